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

#include "reroute/validator.hpp"

#include <algorithm>
#include <numeric>

#include "reroute/error.hpp"

namespace reroute {

std::string_view to_string(FailureReason reason) {
  switch (reason) {
    case FailureReason::kNoTransientFlow:
      return "no-transient-flow";
    case FailureReason::kNonUniqueTransientFlow:
      return "non-unique-transient-flow";
    case FailureReason::kCapacityViolation:
      return "capacity-violation";
  }
  return "unknown";
}

std::string ValidationReport::describe(const UpdateFlowNetwork& net) const {
  if (valid) return complete ? "valid" : "valid prefix (incomplete)";
  std::string out = "invalid";
  if (failing_round) out += " at round " + std::to_string(*failing_round);
  if (failing_subset) {
    out += ", subset {";
    for (std::size_t i = 0; i < failing_subset->size(); ++i) {
      if (i) out += ",";
      out += format_update(net, (*failing_subset)[i]);
    }
    out += "}";
  }
  if (reason) {
    out += ": ";
    out += to_string(*reason);
    if (*reason == FailureReason::kCapacityViolation && failing_edge != kNoEdge) {
      const Edge& e = net.edge(failing_edge);
      out += "(" + net.vertex_name(e.tail) + "," + net.vertex_name(e.head) + ")";
    } else if (failing_pair >= 0) {
      out += "(" + net.pair(failing_pair).id + ")";
    }
  }
  return out;
}

namespace {

// Reusable buffers so that subset enumeration does not allocate per state.
class StateChecker {
 public:
  explicit StateChecker(const UpdateFlowNetwork& net)
      : net_(net), load_(net.edges().size(), 0) {}

  ValidationReport check(const UpdateSet& resolved) {
    ValidationReport report;
    touched_.clear();
    for (std::size_t pi = 0; pi < net_.pair_count(); ++pi) {
      const auto p = static_cast<PairIndex>(pi);
      const std::int64_t demand = net_.pair(p).demand;
      VertexId v = net_.source();
      std::size_t steps = 0;
      bool reached = true;
      while (v != net_.terminal()) {
        EdgeId e = active_out(net_, p, v, resolved);
        if (e == kNoEdge || ++steps >= net_.vertex_count()) {
          reached = false;
          break;
        }
        if (load_[e] == 0) touched_.push_back(e);
        load_[e] += demand;
        v = net_.edge(e).head;
      }
      if (!reached) {
        report.valid = false;
        report.reason = FailureReason::kNoTransientFlow;
        report.failing_pair = p;
        break;
      }
    }
    if (report.valid) {
      std::sort(touched_.begin(), touched_.end());
      for (EdgeId e : touched_) {
        if (load_[e] > net_.edge(e).capacity) {
          report.valid = false;
          report.reason = FailureReason::kCapacityViolation;
          report.failing_edge = e;
          break;
        }
      }
    }
    for (EdgeId e : touched_) load_[e] = 0;
    return report;
  }

 private:
  const UpdateFlowNetwork& net_;
  std::vector<std::int64_t> load_;
  std::vector<EdgeId> touched_;
};

}  // namespace

ValidationReport check_state(const UpdateFlowNetwork& net,
                             const UpdateSet& resolved) {
  StateChecker checker(net);
  return checker.check(resolved);
}

ValidationReport validate_sequence(const UpdateFlowNetwork& net,
                                   const UpdateSequence& seq,
                                   std::size_t subset_cap) {
  check_well_formed(net, seq);
  for (std::size_t r = 0; r < seq.rounds.size(); ++r) {
    if (seq.rounds[r].size() > subset_cap) {
      throw Error(ErrorCode::kRoundTooLarge,
                  "round " + std::to_string(r + 1) + " has " +
                      std::to_string(seq.rounds[r].size()) +
                      " updates, more than the subset cap of " +
                      std::to_string(subset_cap));
    }
  }

  StateChecker checker(net);
  UpdateSet state(net);
  for (std::size_t r = 0; r < seq.rounds.size(); ++r) {
    // Sorted updates are in update-id order.
    std::vector<Update> round = seq.rounds[r];
    std::sort(round.begin(), round.end());
    const std::size_t n = round.size();
    std::vector<std::size_t> pick;
    for (std::size_t k = 0; k <= n; ++k) {
      pick.resize(k);
      std::iota(pick.begin(), pick.end(), std::size_t{0});
      while (true) {
        for (std::size_t i : pick) state.insert(round[i]);
        ValidationReport report = checker.check(state);
        for (std::size_t i : pick) state.erase(round[i]);
        if (!report.valid) {
          report.failing_round = r + 1;
          std::vector<Update> subset;
          for (std::size_t i : pick) subset.push_back(round[i]);
          report.failing_subset = std::move(subset);
          return report;
        }
        // Advance to the next k-combination in lexicographic order.
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
      }
    }
    for (Update u : round) state.insert(u);
  }
  ValidationReport ok;
  ok.complete = is_complete(net, seq);
  return ok;
}

}  // namespace reroute
