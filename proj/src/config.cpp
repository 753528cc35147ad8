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

#include "easel/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "easel/error.hpp"
#include "easel/ws_client.hpp"

namespace easel {

EngineConfig config_from_json(const json& j) {
  EngineConfig c;
  try {
    if (j.contains("data_dir") && !j["data_dir"].is_null()) c.data_dir = j["data_dir"].get<std::string>();
    if (j.contains("template_dir") && !j["template_dir"].is_null()) {
      c.template_dir = j["template_dir"].get<std::string>();
    }
    c.host = j.value("host", c.host);
    c.port = j.value("port", c.port);
    if (j.contains("backend")) {
      const auto& b = j["backend"];
      c.backend_mode = b.value("mode", c.backend_mode);
      c.remote.base_url = b.value("url", c.remote.base_url);
      c.remote.ws_url = b.value("ws_url", c.remote.ws_url);
      c.remote.client_id = b.value("client_id", c.remote.client_id);
      c.max_inflight = b.value("max_inflight", c.max_inflight);
      c.mock_ticks = b.value("mock_ticks", c.mock_ticks);
      c.mock_tick_ms = b.value("mock_tick_ms", c.mock_tick_ms);
    }
    if (j.contains("journal")) {
      c.snapshot_every = j["journal"].value("snapshot_every", c.snapshot_every);
      c.fsync = j["journal"].value("fsync", c.fsync);
    }
    if (j.contains("trail_bucket_seconds")) {
      c.trail_bucket = static_cast<Timestamp>(j["trail_bucket_seconds"].get<double>() * 1e6);
    }
    c.event_buffer = j.value("event_buffer", c.event_buffer);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ValidationError, std::string("bad config: ") + e.what());
  }
  return c;
}

void apply_env_overrides(EngineConfig& c) {
  auto env = [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
  };
  auto to_int = [](const std::string& name, const std::string& v) {
    try {
      return std::stoi(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ValidationError, name + " must be an integer", {name + "=" + v});
    }
  };
  if (auto v = env("EASEL_DATA_DIR")) c.data_dir = *v;
  if (auto v = env("EASEL_TEMPLATE_DIR")) c.template_dir = *v;
  if (auto v = env("EASEL_HOST")) c.host = *v;
  if (auto v = env("EASEL_PORT")) c.port = to_int("EASEL_PORT", *v);
  if (auto v = env("EASEL_BACKEND_MODE")) c.backend_mode = *v;
  if (auto v = env("EASEL_BACKEND_URL")) c.remote.base_url = *v;
  if (auto v = env("EASEL_BACKEND_WS_URL")) c.remote.ws_url = *v;
  if (auto v = env("EASEL_CLIENT_ID")) c.remote.client_id = *v;
  if (auto v = env("EASEL_MAX_INFLIGHT")) c.max_inflight = static_cast<std::size_t>(to_int("EASEL_MAX_INFLIGHT", *v));
}

void validate_config(const EngineConfig& c) {
  std::vector<std::string> v;
  if (c.backend_mode != "mock" && c.backend_mode != "remote") v.push_back("backend.mode must be mock or remote");
  if (c.port < 0 || c.port > 65535) v.push_back("port must be within [0, 65535]");
  if (c.max_inflight < 1) v.push_back("backend.max_inflight must be at least 1");
  if (c.trail_bucket <= 0) v.push_back("trail_bucket_seconds must be positive");
  if (c.mock_ticks < 1) v.push_back("backend.mock_ticks must be at least 1");
  if (c.backend_mode == "remote") {
    try {
      parse_url(c.remote.base_url);
    } catch (const Error&) {
      v.push_back("backend.url is not a valid http url");
    }
  }
  if (!v.empty()) throw Error(ErrorCode::ValidationError, "invalid configuration", v);
}

EngineConfig load_config(const std::optional<std::filesystem::path>& file) {
  json j = json::object();
  if (file) {
    std::ifstream in(*file);
    if (!in) fail(ErrorCode::Io, "cannot read config " + file->string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      j = json::parse(ss.str());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ValidationError, std::string("config is not valid JSON: ") + e.what());
    }
  }
  auto c = config_from_json(j);
  apply_env_overrides(c);
  validate_config(c);
  return c;
}

json config_to_json(const EngineConfig& c) {
  return json{{"data_dir", c.data_dir ? json(c.data_dir->string()) : json(nullptr)},
              {"template_dir", c.template_dir ? json(c.template_dir->string()) : json(nullptr)},
              {"host", c.host},
              {"port", c.port},
              {"backend",
               {{"mode", c.backend_mode},
                {"url", c.remote.base_url},
                {"ws_url", c.remote.ws_url},
                {"client_id", c.remote.client_id},
                {"max_inflight", c.max_inflight},
                {"mock_ticks", c.mock_ticks},
                {"mock_tick_ms", c.mock_tick_ms}}},
              {"journal", {{"snapshot_every", c.snapshot_every}, {"fsync", c.fsync}}},
              {"trail_bucket_seconds", static_cast<double>(c.trail_bucket) / 1e6},
              {"event_buffer", c.event_buffer}};
}

}  // namespace easel
