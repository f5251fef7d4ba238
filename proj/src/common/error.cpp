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

#include "bento/error.hpp"

namespace bento {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kSyntax: return "SyntaxError";
    case ErrorCode::kUnknownTask: return "UnknownTask";
    case ErrorCode::kUnknownParameter: return "UnknownParameter";
    case ErrorCode::kUnknownMetric: return "UnknownMetric";
    case ErrorCode::kInvalidValue: return "InvalidValue";
    case ErrorCode::kEmptyBox: return "EmptyBox";
    case ErrorCode::kDuplicateTask: return "DuplicateTask";
    case ErrorCode::kInvalidManifest: return "InvalidManifest";
    case ErrorCode::kInvalidCombination: return "InvalidCombination";
    case ErrorCode::kEmptyWorkload: return "EmptyWorkload";
    case ErrorCode::kEmptySamples: return "EmptySamples";
    case ErrorCode::kZeroElapsed: return "ZeroElapsed";
    case ErrorCode::kPrepareFailed: return "PrepareFailed";
    case ErrorCode::kRunFailed: return "RunFailed";
    case ErrorCode::kReportFailed: return "ReportFailed";
    case ErrorCode::kCleanFailed: return "CleanFailed";
    case ErrorCode::kNonZeroExit: return "NonZeroExit";
    case ErrorCode::kMalformedSample: return "MalformedSample";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kAllocationFailed: return "AllocationFailed";
    case ErrorCode::kSizeNotWordAligned: return "SizeNotWordAligned";
    case ErrorCode::kAccessSizeExceedsFile: return "AccessSizeExceedsFile";
    case ErrorCode::kInsufficientSpace: return "InsufficientSpace";
    case ErrorCode::kPermissionDenied: return "PermissionDenied";
    case ErrorCode::kInvalidParameter: return "InvalidParameter";
    case ErrorCode::kBindFailed: return "BindFailed";
    case ErrorCode::kConnectFailed: return "ConnectFailed";
    case ErrorCode::kPeerClosed: return "PeerClosed";
    case ErrorCode::kPeerUnreachable: return "PeerUnreachable";
    case ErrorCode::kTableMissing: return "TableMissing";
    case ErrorCode::kServerUnreachable: return "ServerUnreachable";
    case ErrorCode::kRoutingError: return "RoutingError";
    case ErrorCode::kMissingSamples: return "MissingSamples";
    case ErrorCode::kWorkspace: return "WorkspaceError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::kProtocol: return "ProtocolError";
    case ErrorCode::kInternal: return "InternalError";
  }
  return "UnknownError";
}

void raise(ErrorCode code, const std::string& detail) {
  std::string message(to_string(code));
  if (!detail.empty()) {
    message += ": ";
    message += detail;
  }
  throw Error(code, message);
}

}  // namespace bento
