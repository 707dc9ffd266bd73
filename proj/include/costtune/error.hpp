/* Copyright 2026 The costtune Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef COSTTUNE_ERROR_HPP_
#define COSTTUNE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace costtune {

enum class ErrorCode {
  kConfigInvalid,
  kInfeasibleMemory,
  kDegenerateGradient,
  kDegenerateFit,
  kOutOfDomain,
  kEmptyInput,
  kSearchFailed,
  kCapabilityMissing,
  kEnvironmentRefused,
  kNotFound,
  kCorruptDocument,
  kValidation,
  kStorage,
  kParse,
  kUsage,
};

std::string_view to_string(ErrorCode code);

// Process exit status used by the command-line tool for each error class.
// 2 usage, 4 not-found, 5 data/parse, 6 degenerate fit.
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace costtune

#endif  // COSTTUNE_ERROR_HPP_
