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

#include <string>

#include <json.hpp>

namespace easel {

using json = nlohmann::json;

// Byte-stable JSON: object keys sorted, no insignificant whitespace, floats in
// shortest round-trip form that always carries a fraction or exponent (9.0,
// -0.025), negative zero written as 0.0. Throws on NaN or infinity.
std::string canonical_dump(const json& value);

}  // namespace easel
