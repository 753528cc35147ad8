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

#include "easel/comfy_backend.hpp"

#include <httplib.h>

#include <set>
#include <thread>

#include "easel/compiler.hpp"
#include "easel/error.hpp"
#include "easel/media.hpp"
#include "easel/ws_client.hpp"

namespace easel {

namespace {

constexpr std::string_view kLoaderClasses[] = {"LoadImage", "LoadImageMask"};

struct Http {
  const RemoteOptions& opts;

  httplib::Client client() const {
    const auto u = parse_url(opts.base_url);
    httplib::Client c(u.host, u.port);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(opts.http_timeout).count();
    c.set_connection_timeout(static_cast<time_t>(std::max<long long>(1, secs)));
    c.set_read_timeout(static_cast<time_t>(std::max<long long>(1, secs)));
    return c;
  }

  // Runs `call`, retrying once on transport failure or a 5xx status.
  template <class F>
  httplib::Result with_retry(const std::string& what, F&& call) const {
    std::string last;
    for (int attempt = 0; attempt < 2; ++attempt) {
      if (attempt > 0) std::this_thread::sleep_for(opts.retry_delay);
      auto c = client();
      auto res = call(c);
      if (res && res->status < 500) return res;
      last = res ? "HTTP " + std::to_string(res->status) : httplib::to_string(res.error());
    }
    fail(ErrorCode::BackendUnavailable, what + " failed after retry: " + last);
  }
};

json parse_body(const std::string& what, const httplib::Result& res) {
  try {
    return json::parse(res->body);
  } catch (const json::exception&) {
    fail(ErrorCode::BackendUnavailable, what + " returned non-JSON body");
  }
}

std::string error_text(const json& body) {
  if (body.contains("error") && body["error"].is_object()) return body["error"].value("message", body.dump());
  return body.dump();
}

}  // namespace

Bytes blank_input_png() { return encode_png(Raster(64, 64, Rgba{0, 0, 0, 0})); }

std::string prompt_request_body(const WorkflowGraph& graph, const std::string& client_id) {
  return canonical_dump(json{{"client_id", client_id}, {"prompt", graph.to_json()}});
}

ComfyBackend::ComfyBackend(RemoteOptions opts) : opts_(std::move(opts)) { parse_url(opts_.base_url); }

std::string ComfyBackend::ws_endpoint() const {
  std::string base = opts_.ws_url;
  if (base.empty()) {
    const auto u = parse_url(opts_.base_url);
    base = "ws://" + u.host + ":" + std::to_string(u.port) + "/ws";
  }
  return base + (base.find('?') == std::string::npos ? "?" : "&") + "clientId=" + opts_.client_id;
}

void ComfyBackend::interrupt() {
  try {
    Http{opts_}.with_retry("POST /interrupt", [](httplib::Client& c) { return c.Post("/interrupt", "", "application/json"); });
  } catch (const Error&) {
    // Nothing to interrupt if the server is gone.
  }
}

std::vector<BackendOutput> ComfyBackend::execute(const WorkflowGraph& graph, const RunContext& ctx) {
  const Http http{opts_};

  std::set<std::string> uploads;
  for (const auto& [_, node] : graph.nodes) {
    if (std::find(std::begin(kLoaderClasses), std::end(kLoaderClasses), node.class_type) == std::end(kLoaderClasses)) {
      continue;
    }
    auto it = node.inputs.find("image");
    if (it == node.inputs.end()) continue;
    if (const auto* lit = std::get_if<Literal>(&it->second)) {
      if (const auto* s = std::get_if<std::string>(lit)) uploads.insert(*s);
    }
  }
  for (const auto& name : uploads) {
    Bytes bytes;
    if (name == kBlankImage) {
      bytes = blank_input_png();
    } else if (ctx.input) {
      bytes = ctx.input(name);
    } else {
      fail(ErrorCode::BackendUnavailable, "no input resolver for " + name);
    }
    const httplib::MultipartFormDataItems items = {
        {"image", std::string(bytes.begin(), bytes.end()), name, "application/octet-stream"},
        {"type", "input", "", ""},
        {"overwrite", "true", "", ""},
    };
    auto res = http.with_retry("POST /upload/image", [&](httplib::Client& c) { return c.Post("/upload/image", items); });
    if (res->status != 200) {
      fail(ErrorCode::GenerationFailed, "upload of " + name + " rejected: HTTP " + std::to_string(res->status));
    }
  }

  // Subscribe before submitting so no event for this prompt can be missed.
  WsClient ws;
  for (int attempt = 0;; ++attempt) {
    try {
      ws.connect(ws_endpoint());
      break;
    } catch (const Error&) {
      if (attempt >= 1) throw;
      std::this_thread::sleep_for(opts_.retry_delay);
    }
  }

  const auto body = prompt_request_body(graph, opts_.client_id);
  auto res = http.with_retry("POST /prompt", [&](httplib::Client& c) { return c.Post("/prompt", body, "application/json"); });
  const auto reply = parse_body("POST /prompt", res);
  if (res->status != 200) fail(ErrorCode::GenerationFailed, "prompt rejected: " + error_text(reply));
  if (reply.contains("node_errors") && !reply["node_errors"].empty()) {
    fail(ErrorCode::GenerationFailed, "prompt rejected: " + reply["node_errors"].dump());
  }
  const auto prompt_id = reply.at("prompt_id").get<std::string>();

  const auto deadline = std::chrono::steady_clock::now() + opts_.job_timeout;
  bool finished = false;
  while (!finished) {
    if (ctx.cancelled && ctx.cancelled()) {
      interrupt();
      return {};
    }
    if (std::chrono::steady_clock::now() > deadline) {
      interrupt();
      fail(ErrorCode::GenerationFailed, "prompt " + prompt_id + " timed out");
    }
    auto msg = ws.read(std::chrono::milliseconds(100));
    if (!msg || !msg->text) continue;  // binary frames are previews
    json m;
    try {
      m = json::parse(msg->payload);
    } catch (const json::exception&) {
      continue;
    }
    const auto type = m.value("type", std::string{});
    const auto& data = m.contains("data") ? m["data"] : json::object();
    if (data.value("prompt_id", std::string{}) != prompt_id) continue;
    if (type == "progress") {
      const double max = data.value("max", 0.0);
      if (max > 0 && ctx.progress) ctx.progress(std::min(0.99, data.value("value", 0.0) / max));
    } else if (type == "executing" && data.contains("node") && data["node"].is_null()) {
      finished = true;
    } else if (type == "execution_success") {
      finished = true;
    } else if (type == "execution_error") {
      fail(ErrorCode::GenerationFailed, data.value("node_type", std::string("node")) + ": " +
                                            data.value("exception_message", std::string("execution error")));
    } else if (type == "execution_interrupted") {
      return {};
    }
  }
  ws.close();

  res = http.with_retry("GET /history", [&](httplib::Client& c) { return c.Get("/history/" + prompt_id); });
  const auto history = parse_body("GET /history", res);
  if (!history.contains(prompt_id)) fail(ErrorCode::GenerationFailed, "history has no entry for " + prompt_id);
  const auto& outputs = history[prompt_id].value("outputs", json::object());

  std::vector<BackendOutput> out;
  for (const auto& id : graph.output_node_ids()) {
    if (!outputs.contains(id)) continue;
    const auto& node_out = outputs[id];
    const auto& node = graph.node(id);
    const auto media = output_media(node.class_type).value_or(OutputMedia::image);
    if (media == OutputMedia::text) {
      for (const auto& t : node_out.value("text", json::array())) {
        out.push_back({id, node.class_type, media, "", {}, t.is_string() ? t.get<std::string>() : t.dump()});
      }
      continue;
    }
    for (const char* field : {"images", "gifs", "videos", "meshes"}) {
      if (!node_out.contains(field)) continue;
      for (const auto& f : node_out[field]) {
        const auto filename = f.value("filename", std::string{});
        const httplib::Params params = {{"filename", filename},
                                        {"subfolder", f.value("subfolder", std::string{})},
                                        {"type", f.value("type", std::string("output"))}};
        auto view = http.with_retry("GET /view", [&](httplib::Client& c) { return c.Get("/view", params, {}); });
        if (view->status != 200) {
          fail(ErrorCode::GenerationFailed, "download of " + filename + " failed: HTTP " + std::to_string(view->status));
        }
        out.push_back({id, node.class_type, media, filename, Bytes(view->body.begin(), view->body.end()), ""});
      }
    }
  }
  return out;
}

}  // namespace easel
