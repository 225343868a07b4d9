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

#include "reroute/oracle.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "reroute/error.hpp"

namespace reroute {

std::string_view to_string(OracleStatus status) {
  switch (status) {
    case OracleStatus::kOptimal:
      return "optimal";
    case OracleStatus::kFeasible:
      return "feasible";
    case OracleStatus::kInfeasible:
      return "infeasible";
    case OracleStatus::kBudgetExhausted:
      return "budget-exhausted";
  }
  return "unknown";
}

namespace {

using Mask = std::uint64_t;
using Clock = std::chrono::steady_clock;

struct OutOfBudget {};

// Round candidates beyond this many make the subset table too large.
constexpr std::size_t kMaxCandidates = 24;

// Orders masks by size, then lexicographically by their sorted update ids.
bool round_order(Mask a, Mask b) {
  const int pa = std::popcount(a);
  const int pb = std::popcount(b);
  if (pa != pb) return pa < pb;
  if (a == b) return false;
  const Mask diff = a ^ b;
  return (a & diff & (~diff + 1)) != 0;
}

// Resolved-update sets as bit masks over update ids, with a memoized state
// check.
class SearchSpace {
 public:
  SearchSpace(const UpdateFlowNetwork& net, const OracleBudget& budget)
      : net_(net),
        budget_(budget),
        start_(Clock::now()),
        n_(net.updates().size()),
        id_(net.pair_count() * net.vertex_count(), -1),
        load_(net.edges().size(), 0) {
    for (std::size_t i = 0; i < n_; ++i) {
      Update u = net.updates()[i];
      id_[slot(u.pair, u.vertex)] = static_cast<int>(i);
    }
  }

  std::size_t size() const { return n_; }
  Mask full() const { return n_ == 64 ? ~Mask{0} : (Mask{1} << n_) - 1; }

  // Updates at vertices without an old out-edge.
  Mask preps() const {
    Mask m = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      Update u = net_.updates()[i];
      if (net_.old_out(u.pair, u.vertex) == kNoEdge) m |= Mask{1} << i;
    }
    return m;
  }

  // Unresolved updates at vertices that no transient flow of a superset of
  // `resolved` can visit: unreachable from s along new edges and along old
  // edges of unresolved vertices.
  Mask dead(Mask resolved) {
    Mask out = 0;
    for (std::size_t pi = 0; pi < net_.pair_count(); ++pi) {
      const auto p = static_cast<PairIndex>(pi);
      reach_.assign(net_.vertex_count(), false);
      stack_.assign(1, net_.source());
      reach_[net_.source()] = true;
      while (!stack_.empty()) {
        VertexId v = stack_.back();
        stack_.pop_back();
        const int id = id_[slot(p, v)];
        const bool done = id >= 0 && (resolved >> id & 1);
        for (EdgeId e : {net_.new_out(p, v), done ? kNoEdge : net_.old_out(p, v)}) {
          if (e == kNoEdge) continue;
          VertexId w = net_.edge(e).head;
          if (!reach_[w]) {
            reach_[w] = true;
            stack_.push_back(w);
          }
        }
      }
      for (VertexId v : net_.pair_vertices(p)) {
        const int id = id_[slot(p, v)];
        if (id >= 0 && !reach_[v] && !(resolved >> id & 1)) out |= Mask{1} << id;
      }
    }
    return out;
  }

  bool valid(Mask m) {
    auto it = memo_.find(m);
    if (it != memo_.end()) return it->second;
    if ((++checks_ & 1023) == 0) tick();
    bool ok = true;
    touched_.clear();
    for (std::size_t pi = 0; pi < net_.pair_count() && ok; ++pi) {
      const auto p = static_cast<PairIndex>(pi);
      VertexId v = net_.source();
      std::size_t steps = 0;
      while (v != net_.terminal()) {
        const int id = id_[slot(p, v)];
        EdgeId e = (id >= 0 && (m >> id & 1)) ? net_.new_out(p, v) : net_.old_out(p, v);
        if (e == kNoEdge || ++steps >= net_.vertex_count()) {
          ok = false;
          break;
        }
        if (load_[e] == 0) touched_.push_back(e);
        load_[e] += net_.pair(p).demand;
        v = net_.edge(e).head;
      }
    }
    for (EdgeId e : touched_) {
      if (load_[e] > net_.edge(e).capacity) ok = false;
      load_[e] = 0;
    }
    memo_.emplace(m, ok);
    return ok;
  }

  // Non-empty subsets A of `pool` such that every subset S of A leaves
  // base | S valid, sorted by round_order. `base` itself must be valid.
  std::vector<Mask> admissible_rounds(Mask base, Mask pool) {
    std::vector<Mask> cand;
    for (Mask rest = pool; rest; rest &= rest - 1) {
      const Mask bit = rest & (~rest + 1);
      if (valid(base | bit)) cand.push_back(bit);
    }
    if (cand.size() > kMaxCandidates) throw OutOfBudget{};
    const std::size_t k = cand.size();
    std::vector<Mask> expand(std::size_t{1} << k, 0);
    std::vector<char> ok(std::size_t{1} << k, 0);
    ok[0] = 1;
    std::vector<Mask> out;
    for (std::size_t s = 1; s < expand.size(); ++s) {
      expand[s] = expand[s & (s - 1)] | cand[std::countr_zero(s)];
      bool sub = true;
      for (std::size_t rest = s; rest && sub; rest &= rest - 1) {
        sub = ok[s & ~(rest & (~rest + 1))];
      }
      ok[s] = sub && valid(base | expand[s]);
      if (ok[s]) out.push_back(expand[s]);
    }
    std::sort(out.begin(), out.end(), round_order);
    return out;
  }

  void tick() {
    if (Clock::now() - start_ > budget_.time_limit) throw OutOfBudget{};
  }

  UpdateSequence sequence(const std::vector<Mask>& rounds) const {
    UpdateSequence seq;
    for (Mask r : rounds) {
      std::vector<Update> round;
      for (; r; r &= r - 1) round.push_back(net_.updates()[std::countr_zero(r)]);
      seq.rounds.push_back(std::move(round));
    }
    normalize(seq);
    return seq;
  }

  Clock::time_point start() const { return start_; }

 private:
  std::size_t slot(PairIndex p, VertexId v) const {
    return static_cast<std::size_t>(p) * net_.vertex_count() +
           static_cast<std::size_t>(v);
  }

  const UpdateFlowNetwork& net_;
  const OracleBudget& budget_;
  Clock::time_point start_;
  std::size_t n_;
  std::vector<int> id_;
  std::vector<std::int64_t> load_;
  std::vector<EdgeId> touched_;
  std::vector<bool> reach_;
  std::vector<VertexId> stack_;
  std::unordered_map<Mask, bool> memo_;
  std::size_t checks_ = 0;
};

void check_size(const UpdateFlowNetwork& net, std::size_t limit) {
  const std::size_t n = net.updates().size();
  if (n > limit || n > 64) {
    throw Error(ErrorCode::kPrecondition,
                "instance has " + std::to_string(n) +
                    " non-empty updates, more than the limit of " +
                    std::to_string(std::min<std::size_t>(limit, 64)));
  }
}

struct Step {
  Mask prev;
  Mask round;
};

std::vector<Mask> trace_back(const std::unordered_map<Mask, Step>& parent,
                             Mask state) {
  std::vector<Mask> rounds;
  while (state != 0) {
    const Step& s = parent.at(state);
    rounds.push_back(s.round);
    state = s.prev;
  }
  std::reverse(rounds.begin(), rounds.end());
  return rounds;
}

}  // namespace

OracleResult min_rounds(const UpdateFlowNetwork& net, const OracleBudget& budget) {
  check_size(net, budget.max_updates);
  SearchSpace space(net, budget);
  OracleResult result;
  const Mask full = space.full();
  const Mask preps = budget.dominance ? space.preps() : 0;
  std::unordered_map<Mask, Step> parent;
  std::unordered_set<Mask> seen{0};

  auto finish = [&](OracleStatus status) {
    result.status = status;
    result.explored_states = seen.size();
    result.elapsed = Clock::now() - space.start();
    return result;
  };

  if (space.size() == 0) {
    result.sequence = UpdateSequence{};
    return finish(OracleStatus::kOptimal);
  }

  try {
    std::vector<Mask> layer{0};
    for (std::size_t round = 1; !layer.empty(); ++round) {
      std::vector<Mask> next;
      for (Mask r : layer) {
        Mask forced = 0;
        if (budget.dominance) forced = ((round == 1 ? preps : 0) | space.dead(r)) & ~r;
        std::vector<Mask> options;
        if (forced) options.push_back(0);
        for (Mask a : space.admissible_rounds(r, full & ~r & ~forced)) {
          options.push_back(a);
        }
        for (Mask a : options) {
          const Mask s = r | a | forced;
          if (!seen.insert(s).second) continue;
          parent[s] = {r, a | forced};
          if (s == full) {
            result.sequence = space.sequence(trace_back(parent, s));
            return finish(OracleStatus::kOptimal);
          }
          if (seen.size() >= budget.max_states) throw OutOfBudget{};
          next.push_back(s);
        }
        space.tick();
      }
      layer = std::move(next);
    }
  } catch (const OutOfBudget&) {
    return finish(OracleStatus::kBudgetExhausted);
  }
  return finish(OracleStatus::kInfeasible);
}

OracleResult find_any(const UpdateFlowNetwork& net, const OracleBudget& budget) {
  check_size(net, budget.max_updates);
  SearchSpace space(net, budget);
  OracleResult result;
  const Mask full = space.full();
  const Mask preps = budget.dominance ? space.preps() : 0;

  // Each search node records how it was reached: the state it came from and
  // the rounds in between (the single update, then any forced additions as
  // a round of their own).
  struct Node {
    Mask prev;
    std::vector<Mask> rounds;
  };
  std::unordered_map<Mask, Node> parent;

  auto close = [&](Mask s, std::vector<Mask>& rounds) {
    if (!budget.dominance) return s;
    while (true) {
      const Mask add = (preps | space.dead(s)) & ~s;
      if (!add) return s;
      rounds.push_back(add);
      s |= add;
    }
  };
  auto finish = [&](OracleStatus status) {
    result.status = status;
    result.explored_states = parent.size() + 1;
    result.elapsed = Clock::now() - space.start();
    return result;
  };

  std::vector<Mask> first;
  const Mask root = close(0, first);
  auto rebuild = [&](Mask s) {
    std::vector<Mask> rounds;
    while (s != root) {
      const Node& node = parent.at(s);
      rounds.insert(rounds.begin(), node.rounds.begin(), node.rounds.end());
      s = node.prev;
    }
    rounds.insert(rounds.begin(), first.begin(), first.end());
    return rounds;
  };

  if (root == full) {
    result.sequence = space.sequence(first);
    return finish(OracleStatus::kFeasible);
  }
  try {
    std::vector<Mask> stack{root};
    parent.reserve(1024);
    while (!stack.empty()) {
      const Mask s = stack.back();
      stack.pop_back();
      std::vector<Mask> children;
      for (Mask rest = full & ~s; rest; rest &= rest - 1) {
        const Mask bit = rest & (~rest + 1);
        if (!space.valid(s | bit)) continue;
        std::vector<Mask> rounds{bit};
        const Mask t = close(s | bit, rounds);
        if (t == root || parent.contains(t)) continue;
        parent.emplace(t, Node{s, std::move(rounds)});
        if (t == full) {
          result.sequence = space.sequence(rebuild(t));
          return finish(OracleStatus::kFeasible);
        }
        if (parent.size() >= budget.max_states) throw OutOfBudget{};
        children.push_back(t);
      }
      stack.insert(stack.end(), children.rbegin(), children.rend());
      space.tick();
    }
  } catch (const OutOfBudget&) {
    return finish(OracleStatus::kBudgetExhausted);
  }
  return finish(OracleStatus::kInfeasible);
}

std::vector<UpdateSequence> enumerate_valid_sequences(
    const UpdateFlowNetwork& net, std::size_t max_rounds, std::size_t limit) {
  check_size(net, 12);
  OracleBudget budget;
  budget.time_limit = std::chrono::hours(24);
  SearchSpace space(net, budget);
  const Mask full = space.full();
  constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max() / 2;

  std::unordered_map<Mask, std::vector<Mask>> options;
  auto rounds_from = [&](Mask r) -> const std::vector<Mask>& {
    auto it = options.find(r);
    if (it == options.end()) {
      it = options.emplace(r, space.admissible_rounds(r, full & ~r)).first;
    }
    return it->second;
  };
  std::unordered_map<Mask, std::size_t> remaining;
  auto min_remaining = [&](auto&& self, Mask r) -> std::size_t {
    if (r == full) return 0;
    if (auto it = remaining.find(r); it != remaining.end()) return it->second;
    std::size_t best = kNever;
    for (Mask a : rounds_from(r)) best = std::min(best, 1 + self(self, r | a));
    remaining[r] = best;
    return best;
  };

  std::vector<UpdateSequence> out;
  std::vector<Mask> path;
  auto dfs = [&](auto&& self, Mask r) -> void {
    if (out.size() >= limit) return;
    if (r == full) {
      out.push_back(space.sequence(path));
      return;
    }
    for (Mask a : rounds_from(r)) {
      if (path.size() + 1 + min_remaining(min_remaining, r | a) > max_rounds) continue;
      path.push_back(a);
      self(self, r | a);
      path.pop_back();
      if (out.size() >= limit) return;
    }
  };
  if (limit > 0 && min_remaining(min_remaining, 0) <= max_rounds) dfs(dfs, 0);
  return out;
}

}  // namespace reroute
