// Copyright 2026 The vimp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VIMP_ERROR_HPP_
#define VIMP_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace vimp {

// Codes mirror vimp_status in the C header.
enum class ErrorCode {
  kIo = 1,
  kValidation = 2,
  kParse = 3,
  kDomain = 4,
  kZeroVariance = 5,
  kInvalidArgument = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace vimp

#endif  // VIMP_ERROR_HPP_
