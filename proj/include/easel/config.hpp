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

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "easel/comfy_backend.hpp"
#include "easel/gateway.hpp"

namespace easel {

struct EngineConfig {
  std::optional<std::filesystem::path> data_dir;  // none: everything in memory
  std::optional<std::filesystem::path> template_dir;
  std::string host = "127.0.0.1";
  int port = 8787;

  std::string backend_mode = "mock";  // mock | remote
  RemoteOptions remote;
  int mock_ticks = 4;
  int mock_tick_ms = 2;
  std::size_t max_inflight = 1;

  std::size_t snapshot_every = 256;
  bool fsync = false;
  Timestamp trail_bucket = 60'000'000;
  std::size_t event_buffer = 1024;
};

// Reads a JSON config file (every key optional), then applies environment
// overrides: EASEL_DATA_DIR, EASEL_TEMPLATE_DIR, EASEL_HOST, EASEL_PORT,
// EASEL_BACKEND_MODE, EASEL_BACKEND_URL, EASEL_BACKEND_WS_URL,
// EASEL_CLIENT_ID, EASEL_MAX_INFLIGHT. Throws ValidationError.
EngineConfig load_config(const std::optional<std::filesystem::path>& file);
EngineConfig config_from_json(const json& j);
void apply_env_overrides(EngineConfig& cfg);
void validate_config(const EngineConfig& cfg);
json config_to_json(const EngineConfig& cfg);

}  // namespace easel
