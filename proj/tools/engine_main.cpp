// Copyright (c) 2026, The Easel Engine Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "easel/config.hpp"
#include "easel/demo_seed.hpp"
#include "easel/engine.hpp"
#include "easel/error.hpp"
#include "easel/http_service.hpp"

using namespace easel;

namespace {

std::optional<std::filesystem::path> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::filesystem::path(s);
}

int report(const Error& e) {
  std::cerr << error_body(e).dump(2) << "\n";
  return e.code() == ErrorCode::ValidationError || e.code() == ErrorCode::MalformedPayload ? 2 : 1;
}

// Blocks SIGINT/SIGTERM on every thread, then waits for one of them.
struct SignalWaiter {
  sigset_t set;
  SignalWaiter() {
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);
  }
  int wait() {
    int sig = 0;
    sigwait(&set, &sig);
    return sig;
  }
};

int serve(const std::string& config_path, const std::string& host, int port) {
  SignalWaiter signals;  // before any thread starts
  auto cfg = load_config(opt_path(config_path));
  if (!host.empty()) cfg.host = host;
  if (port >= 0) cfg.port = port;
  validate_config(cfg);
  Engine engine(cfg);
  HttpService service(engine, HttpService::Options{32, cfg.event_buffer, std::chrono::milliseconds(15000)});
  const int bound = service.start(cfg.host, cfg.port);
  std::cerr << "serving on http://" << cfg.host << ":" << bound << " (backend " << cfg.backend_mode << ", "
            << (cfg.data_dir ? cfg.data_dir->string() : std::string("in-memory")) << ")\n";
  const int sig = signals.wait();
  std::cerr << "signal " << sig << ", shutting down\n";
  service.stop();
  engine.quiesce();
  return 0;
}

int compile(const std::string& spec_path, const std::string& out, const std::string& config_path) {
  std::ifstream in(spec_path);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + spec_path);
  std::stringstream ss;
  ss << in.rdbuf();
  const json j = json::parse(ss.str(), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::MalformedPayload, spec_path + " is not valid JSON");

  auto cfg = load_config(opt_path(config_path));
  Engine engine(cfg);
  std::string bytes;
  if (j.is_object() && j.contains("type")) {
    auto g = engine.compile_run_spec(run_spec_from_json(j));
    if (!g) throw Error(ErrorCode::UnknownKind, "this operation runs locally and has no workflow graph");
    bytes = g->serialize();
  } else {
    bytes = engine.compile(j.get<EaselSpec>()).serialize();
  }
  if (out.empty() || out == "-") {
    std::cout << bytes << "\n";
  } else {
    std::ofstream f(out, std::ios::binary);
    f << bytes;
    if (!f) throw Error(ErrorCode::Io, "cannot write " + out);
  }
  return 0;
}

int demo_seed(const std::string& config_path, bool force) {
  auto cfg = load_config(opt_path(config_path));
  Engine engine(cfg);
  if (!engine.assets().empty() && !force) {
    std::cerr << "document already has assets; pass --force to seed again\n";
    return 1;
  }
  const auto seed = seed_demo(engine);
  json summary = {{"storyboard", seed.storyboard}, {"moodboard", seed.moodboard},
                  {"collection", seed.warrior_collection}, {"assets", json::object()}, {"items", json::object()}};
  for (const auto& [k, v] : seed.assets) summary["assets"][k] = v;
  for (const auto& [k, v] : seed.items) summary["items"][k] = v;
  std::cout << summary.dump(2) << "\n";
  if (!cfg.data_dir) std::cerr << "note: no data_dir configured, the seeded document was not persisted\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Easel engine: asset store, workflow compiler and provenance service"};
  app.require_subcommand(1);

  std::string config;
  std::string host;
  int port = -1;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--config", config, "Config file (JSON)");
  serve_cmd->add_option("--host", host, "Override the bind host");
  serve_cmd->add_option("--port", port, "Override the port (0 picks a free one)");

  std::string spec, out;
  auto* compile_cmd = app.add_subcommand("compile", "Compile an easel spec to a workflow graph");
  compile_cmd->add_option("spec", spec, "Spec file (JSON)")->required();
  compile_cmd->add_option("-o,--output", out, "Output file (default stdout)");
  compile_cmd->add_option("--config", config, "Config file; its data_dir supplies referenced assets");

  bool force = false;
  auto* seed_cmd = app.add_subcommand("demo-seed", "Load the demo storyboard document");
  seed_cmd->add_option("--config", config, "Config file (JSON)");
  seed_cmd->add_flag("--force", force, "Seed even if the document is not empty");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*serve_cmd) return serve(config, host, port);
    if (*compile_cmd) return compile(spec, out, config);
    if (*seed_cmd) return demo_seed(config, force);
  } catch (const Error& e) {
    return report(e);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
