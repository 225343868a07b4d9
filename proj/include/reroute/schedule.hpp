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

#ifndef REROUTE_SCHEDULE_HPP_
#define REROUTE_SCHEDULE_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "reroute/network.hpp"

namespace reroute {

// Ordered partition of (a subset of) the non-empty updates into rounds.
// Rounds are sets; normalize() keeps each one sorted so equal sequences
// compare equal.
struct UpdateSequence {
  std::vector<std::vector<Update>> rounds;

  std::size_t round_count() const { return rounds.size(); }
  std::size_t update_count() const;

  friend bool operator==(const UpdateSequence&, const UpdateSequence&) = default;
};

// "(vertex,pair)" for messages and traces.
std::string format_update(const UpdateFlowNetwork& net, Update u);

// Sorts every round and removes empty ones.
void normalize(UpdateSequence& seq);

// Throws Error(kMalformedSchedule) unless every update is a non-empty update
// of `net`, no update repeats and no round is empty.
void check_well_formed(const UpdateFlowNetwork& net, const UpdateSequence& seq);

// True iff the rounds cover every non-empty update of `net`.
bool is_complete(const UpdateFlowNetwork& net, const UpdateSequence& seq);

// 1-based round of every non-empty update, indexed by update id; 0 for
// updates the sequence does not contain.
std::vector<std::size_t> round_index(const UpdateFlowNetwork& net,
                                     const UpdateSequence& seq);

}  // namespace reroute

#endif  // REROUTE_SCHEDULE_HPP_
