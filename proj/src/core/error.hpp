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

#ifndef QINET_CORE_ERROR_HPP_
#define QINET_CORE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace qinet {

// Coarse failure classes. The C API maps these one-to-one onto status codes.
enum class ErrorCode {
  kInvalidArgument = 1,  // caller-supplied value outside the contract
  kValidation = 2,       // malformed dataset or configuration
  kIo = 3,
  kNumeric = 4,  // positivity violations, non-finite values
  kRuntime = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void ThrowInvalidArgument(const std::string& message);
[[noreturn]] void ThrowValidation(const std::string& message);
[[noreturn]] void ThrowIo(const std::string& message);
[[noreturn]] void ThrowNumeric(const std::string& message);

const char* ErrorCodeName(ErrorCode code) noexcept;

}  // namespace qinet

#endif  // QINET_CORE_ERROR_HPP_
