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

#include "reroute/schedule.hpp"

#include <algorithm>

#include "reroute/error.hpp"

namespace reroute {

std::size_t UpdateSequence::update_count() const {
  std::size_t total = 0;
  for (const auto& round : rounds) total += round.size();
  return total;
}

std::string format_update(const UpdateFlowNetwork& net, Update u) {
  return "(" + net.vertex_name(u.vertex) + "," + net.pair(u.pair).id + ")";
}

void normalize(UpdateSequence& seq) {
  std::erase_if(seq.rounds, [](const auto& r) { return r.empty(); });
  for (auto& round : seq.rounds) std::sort(round.begin(), round.end());
}

void check_well_formed(const UpdateFlowNetwork& net,
                       const UpdateSequence& seq) {
  std::vector<bool> seen(net.updates().size(), false);
  for (std::size_t r = 0; r < seq.rounds.size(); ++r) {
    if (seq.rounds[r].empty()) {
      throw Error(ErrorCode::kMalformedSchedule,
                  "round " + std::to_string(r + 1) + " is empty");
    }
    for (Update u : seq.rounds[r]) {
      if (u.pair < 0 || static_cast<std::size_t>(u.pair) >= net.pair_count() ||
          u.vertex < 0 ||
          static_cast<std::size_t>(u.vertex) >= net.vertex_count()) {
        throw Error(ErrorCode::kMalformedSchedule, "update out of range");
      }
      auto id = net.update_index(u);
      const std::string label = format_update(net, u);
      if (!id) {
        throw Error(ErrorCode::kMalformedSchedule,
                    "update " + label + " is not a non-empty update");
      }
      if (seen[*id]) {
        throw Error(ErrorCode::kMalformedSchedule,
                    "update " + label + " appears more than once");
      }
      seen[*id] = true;
    }
  }
}

bool is_complete(const UpdateFlowNetwork& net, const UpdateSequence& seq) {
  auto rounds = round_index(net, seq);
  return std::none_of(rounds.begin(), rounds.end(),
                      [](std::size_t r) { return r == 0; });
}

std::vector<std::size_t> round_index(const UpdateFlowNetwork& net,
                                     const UpdateSequence& seq) {
  std::vector<std::size_t> out(net.updates().size(), 0);
  for (std::size_t r = 0; r < seq.rounds.size(); ++r) {
    for (Update u : seq.rounds[r]) {
      if (auto id = net.update_index(u)) out[*id] = r + 1;
    }
  }
  return out;
}

}  // namespace reroute
