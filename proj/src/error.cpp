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

#include "easel/error.hpp"

namespace easel {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UndecodablePayload: return "UndecodablePayload";
    case ErrorCode::UnsupportedKind: return "UnsupportedKind";
    case ErrorCode::UnknownAsset: return "UnknownAsset";
    case ErrorCode::UnknownPage: return "UnknownPage";
    case ErrorCode::NonPositiveSize: return "NonPositiveSize";
    case ErrorCode::UnknownItem: return "UnknownItem";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NonImageLayer: return "NonImageLayer";
    case ErrorCode::EmptyLayerList: return "EmptyLayerList";
    case ErrorCode::UnknownInputAsset: return "UnknownInputAsset";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::NotAGeneratedNode: return "NotAGeneratedNode";
    case ErrorCode::CursorOutOfRange: return "CursorOutOfRange";
    case ErrorCode::EmptyCanvas: return "EmptyCanvas";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnknownTemplate: return "UnknownTemplate";
    case ErrorCode::InvalidTemplate: return "InvalidTemplate";
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::MissingPrompt: return "MissingPrompt";
    case ErrorCode::WrongAssetKind: return "WrongAssetKind";
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::UnknownJob: return "UnknownJob";
    case ErrorCode::UnknownRun: return "UnknownRun";
    case ErrorCode::NotDone: return "NotDone";
    case ErrorCode::NotCancellable: return "NotCancellable";
    case ErrorCode::UnknownCollection: return "UnknownCollection";
    case ErrorCode::NotAMember: return "NotAMember";
    case ErrorCode::UnknownEntry: return "UnknownEntry";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::UnknownEasel: return "UnknownEasel";
    case ErrorCode::MalformedPayload: return "MalformedPayload";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::CorruptJournal: return "CorruptJournal";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string message, std::vector<std::string> violations)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      violations_(std::move(violations)) {}

void fail(ErrorCode code, std::string message) { throw Error(code, std::move(message)); }

}  // namespace easel
