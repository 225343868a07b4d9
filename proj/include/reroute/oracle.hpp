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

#ifndef REROUTE_ORACLE_HPP_
#define REROUTE_ORACLE_HPP_

#include <chrono>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "reroute/network.hpp"
#include "reroute/schedule.hpp"

namespace reroute {

struct OracleBudget {
  std::size_t max_updates = 16;
  std::size_t max_states = 5'000'000;
  std::chrono::milliseconds time_limit{60'000};
  // Prune with two exchange arguments: updates at vertices that have no old
  // out-edge go in round 1, and updates at vertices no future transient flow
  // can reach go in the next round. Neither changes the optimum.
  bool dominance = true;
};

enum class OracleStatus { kOptimal, kFeasible, kInfeasible, kBudgetExhausted };

std::string_view to_string(OracleStatus status);

struct OracleResult {
  OracleStatus status = OracleStatus::kBudgetExhausted;
  std::optional<UpdateSequence> sequence;
  // Distinct resolved-sets reached by the search.
  std::size_t explored_states = 0;
  std::chrono::duration<double> elapsed{0};
};

// Minimum number of rounds by breadth-first search over resolved-update
// sets, one layer per round. From every set, each round all of whose
// subsets leave a valid state is tried. The first layer containing the full
// set gives the optimum; exhausting all reachable sets proves infeasibility.
// Throws Error(kPrecondition) when the instance has more than
// budget.max_updates non-empty updates (at most 64 are supported).
OracleResult min_rounds(const UpdateFlowNetwork& net,
                        const OracleBudget& budget = {});

// Decides feasibility only. Any valid sequence can be split into
// single-update rounds, so it suffices to search single-update steps; the
// sequence returned on success is valid but not short. Status is kFeasible,
// kInfeasible or kBudgetExhausted.
OracleResult find_any(const UpdateFlowNetwork& net,
                      const OracleBudget& budget = {});

// Up to `limit` valid complete sequences with at most max_rounds rounds, in
// depth-first order with candidate rounds ordered by size, then
// lexicographically by update id. Throws Error(kPrecondition) above 12
// non-empty updates.
std::vector<UpdateSequence> enumerate_valid_sequences(
    const UpdateFlowNetwork& net, std::size_t max_rounds, std::size_t limit);

}  // namespace reroute

#endif  // REROUTE_ORACLE_HPP_
