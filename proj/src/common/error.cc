// Copyright 2026 The MSDRO Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "common/error.h"

namespace msdro {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "ok";
    case ErrorCode::kInput: return "input";
    case ErrorCode::kUnsupported: return "unsupported";
    case ErrorCode::kSize: return "size";
    case ErrorCode::kMode: return "mode";
    case ErrorCode::kTopology: return "topology";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kUnbounded: return "unbounded";
    case ErrorCode::kSolver: return "solver";
    case ErrorCode::kExtraction: return "extraction";
  }
  return "unknown";
}

}  // namespace msdro
