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

#ifndef MSDRO_COMMON_ERROR_H_
#define MSDRO_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace msdro {

// Error categories shared by every module. The numeric values are part of the
// C API (see include/msdro/msdro.h) and must not be renumbered.
enum class ErrorCode : int {
  kOk = 0,
  kInput = 1,
  kUnsupported = 2,
  kSize = 3,
  kMode = 4,
  kTopology = 5,
  kParse = 6,
  kIo = 7,
  kInfeasible = 8,
  kUnbounded = 9,
  kSolver = 10,
  kExtraction = 11,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void Require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) Fail(code, message);
}

}  // namespace msdro

#endif  // MSDRO_COMMON_ERROR_H_
