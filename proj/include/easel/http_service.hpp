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
#include <memory>
#include <string>

#include "easel/canonical_json.hpp"
#include "easel/error.hpp"

namespace easel {

class Engine;

// HTTP status for an engine error code.
int http_status_for(ErrorCode code);
json error_body(const Error& e);

// JSON API plus a server-sent event stream over one Engine. Routes live under
// /api; see README for the list.
class HttpService {
 public:
  struct Options {
    std::size_t worker_threads = 32;
    std::size_t event_buffer = 1024;
    // Idle interval after which the event stream sends a keep-alive comment.
    std::chrono::milliseconds keepalive{15000};
  };

  explicit HttpService(Engine& engine);
  HttpService(Engine& engine, Options opts);
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  // Binds and serves on a background thread. Port 0 picks a free port; the
  // bound port is returned.
  int start(const std::string& host, int port);
  // Serves on the calling thread until stop().
  void run(const std::string& host, int port);
  void stop();
  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace easel
