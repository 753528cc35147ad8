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

#include <chrono>
#include <mutex>
#include <string>

#include "easel/gateway.hpp"

namespace easel {

struct RemoteOptions {
  std::string base_url = "http://127.0.0.1:8188";
  std::string ws_url;  // defaults to ws://<host>:<port>/ws on the base url
  std::string client_id = "easel-engine";
  std::chrono::milliseconds http_timeout{30'000};
  std::chrono::milliseconds job_timeout{30 * 60'000};
  std::chrono::milliseconds retry_delay{250};
};

// Placeholder uploaded for switched-off image slots.
Bytes blank_input_png();

// Request body for POST /prompt.
std::string prompt_request_body(const WorkflowGraph& graph, const std::string& client_id);

// Talks to a ComfyUI server: uploads inputs, submits the graph, follows the
// /ws event channel for progress and completion, then reads /history and
// downloads outputs through /view. Transport failures (connection errors and
// 5xx responses) are retried once; generation errors are not.
class ComfyBackend final : public Backend {
 public:
  explicit ComfyBackend(RemoteOptions opts);
  std::string name() const override { return "remote"; }
  std::vector<BackendOutput> execute(const WorkflowGraph& graph, const RunContext& ctx) override;
  void interrupt() override;

  std::string ws_endpoint() const;

 private:
  RemoteOptions opts_;
};

}  // namespace easel
