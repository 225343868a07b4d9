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

#ifndef REROUTE_DOCUMENT_HPP_
#define REROUTE_DOCUMENT_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "reroute/network.hpp"
#include "reroute/schedule.hpp"

namespace reroute {

// Instance documents are JSON objects:
//
//   {"vertices": ["s", ...],
//    "edges": [{"tail": "s", "head": "u", "capacity": 2}, ...],
//    "source": "s", "terminal": "t",
//    "pairs": [{"id": "R", "old_path": [...], "new_path": [...],
//               "demand": 1}, ...]}
//
// Pair ids may be given as strings or integers; integers are kept as their
// decimal spelling.
InstanceDocument parse_instance_document(std::string_view text);
UpdateFlowNetwork load_instance(std::string_view text);
std::string serialize_instance(const UpdateFlowNetwork& net);

// Schedule documents: {"rounds": [[{"vertex": "u", "pair": "B"}, ...], ...]}.
// Empty updates are dropped on load, and so are rounds left empty by that.
UpdateSequence load_schedule(const UpdateFlowNetwork& net,
                             std::string_view text);
std::string serialize_schedule(const UpdateFlowNetwork& net,
                               const UpdateSequence& seq);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace reroute

#endif  // REROUTE_DOCUMENT_HPP_
