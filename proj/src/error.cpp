// Copyright 2026 The qds Authors
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

#include "qds/error.hpp"

namespace qds {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_layout: return "invalid-layout";
    case ErrorCode::invalid_unitary: return "invalid-unitary";
    case ErrorCode::invalid_target: return "invalid-target";
    case ErrorCode::shape: return "shape";
    case ErrorCode::schema: return "schema";
    case ErrorCode::capacity: return "capacity";
    case ErrorCode::empty_database: return "empty-database";
    case ErrorCode::index: return "index";
    case ErrorCode::ancilla_contamination: return "ancilla-contamination";
    case ErrorCode::family_too_large: return "family-too-large";
    case ErrorCode::hard_input: return "hard-input";
    case ErrorCode::trace: return "trace";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace qds
