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

#include "easel/ws_client.hpp"

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <regex>

#include "easel/error.hpp"

namespace easel {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

std::string ParsedUrl::origin() const { return scheme + "://" + host + ":" + std::to_string(port); }

ParsedUrl parse_url(const std::string& url) {
  static const std::regex re(R"(^(https?|wss?)://([^/:?#]+)(?::(\d+))?([^?#]*)?(\?[^#]*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) fail(ErrorCode::MalformedPayload, "bad url '" + url + "'");
  ParsedUrl u;
  u.scheme = m[1];
  u.host = m[2];
  const bool secure = u.scheme == "https" || u.scheme == "wss";
  u.port = m[3].matched ? std::stoi(m[3]) : (secure ? 443 : 80);
  u.path = m[4].matched && !m[4].str().empty() ? m[4].str() : "/";
  if (m[5].matched) u.path += m[5].str();
  return u;
}

struct WsClient::Impl {
  asio::io_context ioc;
  websocket::stream<tcp::socket> ws{ioc};
  beast::flat_buffer buffer;
  bool pending = false;
  bool done = false;
  beast::error_code ec;
};

WsClient::WsClient() : impl_(std::make_unique<Impl>()) {}
WsClient::~WsClient() { close(); }

void WsClient::connect(const std::string& url, std::chrono::milliseconds timeout) {
  const auto u = parse_url(url);
  if (u.scheme != "ws" && u.scheme != "http") {
    fail(ErrorCode::BackendUnavailable, "only plain ws:// event channels are supported: " + url);
  }
  try {
    tcp::resolver resolver(impl_->ioc);
    const auto results = resolver.resolve(u.host, std::to_string(u.port));
    auto& sock = impl_->ws.next_layer();
    // Bounded connect: run the async connect for at most `timeout`.
    beast::error_code ec = asio::error::timed_out;
    bool finished = false;
    asio::async_connect(sock, results, [&](const beast::error_code& e, const tcp::endpoint&) {
      ec = e;
      finished = true;
    });
    impl_->ioc.restart();
    impl_->ioc.run_for(timeout);
    if (!finished) {
      sock.close();
      impl_->ioc.restart();
      impl_->ioc.run();
      fail(ErrorCode::BackendUnavailable, "timed out connecting to " + url);
    }
    if (ec) fail(ErrorCode::BackendUnavailable, "connect " + url + ": " + ec.message());
    impl_->ws.set_option(websocket::stream_base::decorator(
        [](websocket::request_type& req) { req.set(beast::http::field::user_agent, "easel-engine"); }));
    impl_->ws.handshake(u.host + ":" + std::to_string(u.port), u.path);
  } catch (const beast::system_error& e) {
    fail(ErrorCode::BackendUnavailable, "websocket " + url + ": " + e.code().message());
  }
}

std::optional<WsClient::Message> WsClient::read(std::chrono::milliseconds timeout) {
  auto& s = *impl_;
  if (!s.pending) {
    s.pending = true;
    s.done = false;
    s.ws.async_read(s.buffer, [&s](const beast::error_code& ec, std::size_t) {
      s.ec = ec;
      s.done = true;
    });
  }
  s.ioc.restart();
  s.ioc.run_for(timeout);
  if (!s.done) return std::nullopt;
  s.pending = false;
  if (s.ec) fail(ErrorCode::BackendUnavailable, "event channel closed: " + s.ec.message());
  Message m{beast::buffers_to_string(s.buffer.data()), s.ws.got_text()};
  s.buffer.consume(s.buffer.size());
  return m;
}

bool WsClient::is_open() const { return impl_ && impl_->ws.is_open(); }

void WsClient::close() {
  if (!impl_) return;
  auto& s = *impl_;
  beast::error_code ec;
  if (s.ws.is_open()) {
    // A pending async_read must be torn down before the socket goes away.
    s.ws.next_layer().shutdown(tcp::socket::shutdown_both, ec);
    s.ws.next_layer().close(ec);
  }
  if (s.pending) {
    s.ioc.restart();
    s.ioc.run_for(std::chrono::milliseconds(200));
    s.pending = false;
  }
}

}  // namespace easel
