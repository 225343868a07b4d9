// Copyright 2026 The Reroute Authors
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

#ifndef REROUTE_CLI_HPP_
#define REROUTE_CLI_HPP_

#include <ostream>

namespace reroute {

// Entry point of the `reroute` tool. Returns 0 on success, 1 when the answer
// is negative (infeasible instance, invalid schedule, unsatisfied witness,
// search budget exhausted) or an input is outside what an operation
// supports, and 2 on usage errors and unreadable or malformed inputs.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace reroute

#endif  // REROUTE_CLI_HPP_
