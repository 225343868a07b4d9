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

#ifndef REROUTE_VALIDATOR_HPP_
#define REROUTE_VALIDATOR_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "reroute/network.hpp"
#include "reroute/schedule.hpp"

namespace reroute {

enum class FailureReason {
  kNoTransientFlow,
  kNonUniqueTransientFlow,
  kCapacityViolation,
};

std::string_view to_string(FailureReason reason);

struct ValidationReport {
  bool valid = true;
  // 1-based round of the first failing subset.
  std::optional<std::size_t> failing_round;
  std::optional<std::vector<Update>> failing_subset;
  std::optional<FailureReason> reason;
  // The pair (no/non-unique transient flow) or edge (capacity) at fault.
  PairIndex failing_pair = -1;
  EdgeId failing_edge = kNoEdge;
  // Whether the sequence resolves every non-empty update. A valid but
  // incomplete sequence is a valid prefix.
  bool complete = false;

  std::string describe(const UpdateFlowNetwork& net) const;
};

// Checks the state after exactly `resolved` has been applied: every pair
// has a transient s-t path and the summed demands respect capacities.
ValidationReport check_state(const UpdateFlowNetwork& net,
                             const UpdateSet& resolved);

inline constexpr std::size_t kDefaultSubsetCap = 20;

// Checks every subset of every round against the rounds before it. Subsets
// of a round are visited by size, then lexicographically by update id, so
// the reported failure is the first one in that order. Throws
// Error(kRoundTooLarge) if a round has more than subset_cap updates.
ValidationReport validate_sequence(const UpdateFlowNetwork& net,
                                   const UpdateSequence& seq,
                                   std::size_t subset_cap = kDefaultSubsetCap);

}  // namespace reroute

#endif  // REROUTE_VALIDATOR_HPP_
