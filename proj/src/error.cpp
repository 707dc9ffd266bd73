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

#include "costtune/error.hpp"

namespace costtune {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigInvalid: return "configuration-invalid";
    case ErrorCode::kInfeasibleMemory: return "infeasible-memory";
    case ErrorCode::kDegenerateGradient: return "degenerate-gradient";
    case ErrorCode::kDegenerateFit: return "degenerate-fit";
    case ErrorCode::kOutOfDomain: return "model-out-of-domain";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kSearchFailed: return "search-failed";
    case ErrorCode::kCapabilityMissing: return "capability-missing";
    case ErrorCode::kEnvironmentRefused: return "environment-refused";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kCorruptDocument: return "corrupt-document";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kStorage: return "storage";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kUsage: return "usage";
  }
  return "unknown";
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage: return 2;
    case ErrorCode::kNotFound: return 4;
    case ErrorCode::kDegenerateFit: return 6;
    default: return 5;
  }
}

}  // namespace costtune
