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

#include "easel/canonical_json.hpp"

#include <charconv>
#include <cmath>

#include "easel/error.hpp"

namespace easel {

namespace {

void write_double(std::string& out, double d) {
  if (!std::isfinite(d)) fail(ErrorCode::MalformedPayload, "non-finite number in canonical JSON");
  if (d == 0.0) {
    out += "0.0";
    return;
  }
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), d);
  std::string_view text(buf, static_cast<std::size_t>(end - buf));
  out += text;
  if (text.find_first_of(".e") == std::string_view::npos) out += ".0";
}

void write(std::string& out, const json& v) {
  switch (v.type()) {
    case json::value_t::null: out += "null"; break;
    case json::value_t::boolean: out += v.get<bool>() ? "true" : "false"; break;
    case json::value_t::number_integer: out += std::to_string(v.get<std::int64_t>()); break;
    case json::value_t::number_unsigned: out += std::to_string(v.get<std::uint64_t>()); break;
    case json::value_t::number_float: write_double(out, v.get<double>()); break;
    case json::value_t::string: out += json(v.get_ref<const std::string&>()).dump(); break;
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += ',';
        first = false;
        write(out, e);
      }
      out += ']';
      break;
    }
    case json::value_t::object: {
      // nlohmann's default object_t is a std::map, so iteration is key-sorted.
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        write(out, it.value());
      }
      out += '}';
      break;
    }
    case json::value_t::binary:
    case json::value_t::discarded:
      fail(ErrorCode::MalformedPayload, "unsupported JSON value in canonical form");
  }
}

}  // namespace

std::string canonical_dump(const json& value) {
  std::string out;
  write(out, value);
  return out;
}

}  // namespace easel
