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
#include <optional>
#include <string>

namespace easel {

struct ParsedUrl {
  std::string scheme;
  std::string host;
  int port = 0;
  std::string path;  // always starts with '/'

  std::string origin() const;  // scheme://host:port
};

// Accepts http, https, ws and wss. Throws MalformedPayload.
ParsedUrl parse_url(const std::string& url);

// Blocking WebSocket client for reading a server's event channel.
class WsClient {
 public:
  WsClient();
  ~WsClient();
  WsClient(const WsClient&) = delete;
  WsClient& operator=(const WsClient&) = delete;

  // Throws BackendUnavailable.
  void connect(const std::string& url, std::chrono::milliseconds timeout = std::chrono::seconds(10));

  struct Message {
    std::string payload;
    bool text = true;
  };
  // nullopt on timeout. Throws BackendUnavailable when the connection drops.
  std::optional<Message> read(std::chrono::milliseconds timeout);
  void close();
  bool is_open() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace easel
