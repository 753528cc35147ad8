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

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace easel {

enum class ErrorCode {
  UndecodablePayload,
  UnsupportedKind,
  UnknownAsset,
  UnknownPage,
  NonPositiveSize,
  UnknownItem,
  OutOfRange,
  NonImageLayer,
  EmptyLayerList,
  UnknownInputAsset,
  UnknownNode,
  NotAGeneratedNode,
  CursorOutOfRange,
  EmptyCanvas,
  ValidationError,
  UnknownTemplate,
  InvalidTemplate,
  UnknownKind,
  MissingPrompt,
  WrongAssetKind,
  InvalidGraph,
  BackendUnavailable,
  UnknownJob,
  UnknownRun,
  NotDone,
  NotCancellable,
  UnknownCollection,
  NotAMember,
  UnknownEntry,
  BadIndex,
  UnknownEasel,
  MalformedPayload,
  GenerationFailed,
  CorruptJournal,
  Io,
};

std::string_view to_string(ErrorCode code);

// Every module reports failures through this one exception type; the code is
// what callers (and the HTTP layer) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::vector<std::string> violations = {});

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  ErrorCode code_;
  std::vector<std::string> violations_;
};

[[noreturn]] void fail(ErrorCode code, std::string message);

}  // namespace easel
