// Copyright 2026 The skillner Authors
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

#ifndef SKILLNER_ERROR_HPP_
#define SKILLNER_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace skillner {

/// Raised for malformed inputs: bad corpus lines, unknown tags, invalid
/// spans, unreadable files, schema violations. The CLI maps this to exit
/// code 2; usage errors exit 1.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace skillner

#endif  // SKILLNER_ERROR_HPP_
