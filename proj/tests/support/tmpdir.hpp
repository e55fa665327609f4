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

#ifndef SKILLNER_TESTS_SUPPORT_TMPDIR_HPP_
#define SKILLNER_TESTS_SUPPORT_TMPDIR_HPP_

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace skillner::testing {

/// Scratch directory removed on destruction.
class TmpDir {
 public:
  explicit TmpDir(const std::string& stem) {
    path_ = std::filesystem::temp_directory_path() /
            ("skillner-" + stem + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TmpDir() { std::filesystem::remove_all(path_); }

  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string fixture(const std::string& name) {
  return std::string(SKILLNER_FIXTURES) + "/" + name;
}

}  // namespace skillner::testing

#endif  // SKILLNER_TESTS_SUPPORT_TMPDIR_HPP_
