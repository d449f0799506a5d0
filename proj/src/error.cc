// Copyright 2026 The sidfuse Authors.
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

#include "sidfuse/error.h"

namespace sidfuse {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptyAfterVad: return "EmptyAfterVad";
    case ErrorCode::kSignalTooShort: return "SignalTooShort";
    case ErrorCode::kDegenerateFrame: return "DegenerateFrame";
    case ErrorCode::kNoUsableFrames: return "NoUsableFrames";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kEmptyFeatureStream: return "EmptyFeatureStream";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kSampleRateMismatch: return "SampleRateMismatch";
    case ErrorCode::kUnstableFilter: return "UnstableFilter";
    case ErrorCode::kMissingModel: return "MissingModel";
    case ErrorCode::kCorruptModel: return "CorruptModel";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace sidfuse
