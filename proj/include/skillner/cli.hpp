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

#ifndef SKILLNER_CLI_HPP_
#define SKILLNER_CLI_HPP_

namespace skillner {

/// Entry point behind the skillner binary. Exit status: 0 on success,
/// 1 on usage errors, 2 on data errors.
int run_cli(int argc, const char* const* argv);

}  // namespace skillner

#endif  // SKILLNER_CLI_HPP_
