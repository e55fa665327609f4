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

#ifndef SKILLNER_CSV_HPP_
#define SKILLNER_CSV_HPP_

#include <string>
#include <vector>

namespace skillner {

/// A parsed CSV file with a header row. Quoted fields may contain commas,
/// doubled quotes and newlines (RFC 4180); CRLF is normalized.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a required column; raises DataError when missing.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text, const std::string& origin = "csv");

}  // namespace skillner

#endif  // SKILLNER_CSV_HPP_
