// Copyright 2026 The Bento Authors
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

namespace bento {

// Keep in sync with bento_status in bento.h; the C layer casts between them.
enum class ErrorCode : int {
  kOk = 0,
  kSyntax = 1,
  kUnknownTask = 2,
  kUnknownParameter = 3,
  kUnknownMetric = 4,
  kInvalidValue = 5,
  kEmptyBox = 6,
  kDuplicateTask = 7,
  kInvalidManifest = 8,
  kInvalidCombination = 9,
  kEmptyWorkload = 10,
  kEmptySamples = 11,
  kZeroElapsed = 12,
  kPrepareFailed = 13,
  kRunFailed = 14,
  kReportFailed = 15,
  kCleanFailed = 16,
  kNonZeroExit = 17,
  kMalformedSample = 18,
  kTimeout = 19,
  kAllocationFailed = 20,
  kSizeNotWordAligned = 21,
  kAccessSizeExceedsFile = 22,
  kInsufficientSpace = 23,
  kPermissionDenied = 24,
  kInvalidParameter = 25,
  kBindFailed = 26,
  kConnectFailed = 27,
  kPeerClosed = 28,
  kPeerUnreachable = 29,
  kTableMissing = 30,
  kServerUnreachable = 31,
  kRoutingError = 32,
  kMissingSamples = 33,
  kWorkspace = 34,
  kIo = 35,
  kChecksumMismatch = 36,
  kProtocol = 37,
  kInternal = 99,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Formats "<CodeName>: <detail>" so messages are greppable by error kind.
[[noreturn]] void raise(ErrorCode code, const std::string& detail);

}  // namespace bento
