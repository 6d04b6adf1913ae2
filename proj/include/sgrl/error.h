// Copyright 2026 The SGRL Authors
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

#ifndef SGRL_ERROR_H_
#define SGRL_ERROR_H_

#include <stdexcept>
#include <string>

namespace sgrl {

// Every failure raised by the library carries one of these codes. The C API
// returns them verbatim, so the numeric values are part of the ABI.
enum class ErrorCode : int {
  kOk = 0,
  kDimension = 1,     // tensor shapes do not conform
  kConfig = 2,        // invalid configuration or precondition on inputs
  kData = 3,          // malformed input file or record
  kOutOfRange = 4,    // node id or index outside its domain
  kNumeric = 5,       // non-finite value where a finite one is required
  kIo = 6,            // file could not be opened / written
  kBadMagic = 7,      // checkpoint does not start with "SGRL"
  kVersion = 8,       // checkpoint format version not supported
  kTruncated = 9,     // checkpoint ended inside a tensor
  kInconsistent = 10, // checkpoint tensors disagree with its config block
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void check(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace sgrl

#endif  // SGRL_ERROR_H_
