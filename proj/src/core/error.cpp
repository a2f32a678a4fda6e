/*
 * Copyright 2026 The qinet Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "core/error.hpp"

namespace qinet {

void ThrowInvalidArgument(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}

void ThrowValidation(const std::string& message) {
  throw Error(ErrorCode::kValidation, message);
}

void ThrowIo(const std::string& message) { throw Error(ErrorCode::kIo, message); }

void ThrowNumeric(const std::string& message) {
  throw Error(ErrorCode::kNumeric, message);
}

const char* ErrorCodeName(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid argument";
    case ErrorCode::kValidation:
      return "validation error";
    case ErrorCode::kIo:
      return "i/o error";
    case ErrorCode::kNumeric:
      return "numeric error";
    case ErrorCode::kRuntime:
      return "runtime error";
  }
  return "unknown error";
}

}  // namespace qinet
