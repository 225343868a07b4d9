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

#ifndef REROUTE_BENCH_HPP_
#define REROUTE_BENCH_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reroute/network.hpp"

namespace reroute {

// Simple undirected topology. Nodes keep their declaration order; each edge
// is stored once with first < second.
struct BaseGraph {
  std::string id;
  std::vector<std::string> nodes;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::string> warnings;

  std::vector<std::vector<int>> adjacency() const;
  std::optional<int> find_node(std::string_view name) const;
};

// Reads <node id=...> and <edge source=... target=...> from the first
// <graph> of a GraphML document. Parallel edges collapse into one and
// self-loops are dropped, each with a warning. Throws Error(kParse) on
// malformed XML or dangling edge endpoints and Error(kEmptyGraph) when there
// are no nodes.
BaseGraph ingest_graphml(std::string_view text, std::string id = "graph");

using NodePath = std::vector<int>;

struct PathPair {
  NodePath old_path;
  NodePath new_path;
};

enum class CapacityRule {
  // 2 where both old paths or both new paths use the edge: the least
  // capacity under which the initial and final states are valid.
  kSameRoleOverlap,
  // 2 where any path of the first pair and any path of the second do.
  kAnyOverlap,
};

// Directed two-pair instance over the edges the four paths use, each edge
// directed along the path that uses it (anti-parallel uses give two edges).
// Vertices are the nodes on some path, in graph order. Pairs are "1" and
// "2" with demand 1. Throws Error(kPathNotInGraph) unless all four paths
// are simple paths of the graph from one common source to one terminal.
UpdateFlowNetwork allocate_capacities(const BaseGraph& graph,
                                      const PathPair& first,
                                      const PathPair& second,
                                      CapacityRule rule = CapacityRule::kSameRoleOverlap);

// Simple s-t paths by depth-first search, at most `limit` of them, sorted.
// A nonzero seed shuffles the neighbour order, which only matters when the
// limit truncates the enumeration.
std::vector<NodePath> enumerate_paths(const BaseGraph& graph, int s, int t,
                                      std::size_t limit, std::uint64_t seed = 0);

// Round estimate from weighted dependency chains: a chain of k blocks
// weighs k, plus one if its earliest block has more than one new edge, plus
// one if its latest block has more than one old edge; the estimate is the
// heaviest chain, raised to |old| + |new| + 1 of the largest block. nullopt
// when the dependency graph is cyclic. Throws Error(kWrongPairCount) unless
// there are two pairs.
std::optional<int> estimate_rounds_weighting(const UpdateFlowNetwork& net);

// True if raising one capacity-1 edge to 2 makes the dependency graph
// acyclic.
bool repairable_by_one_edge(const UpdateFlowNetwork& net);

struct SurveyConfig {
  std::size_t max_paths_per_st = 64;
  std::size_t max_instances = 1'000'000;
  std::optional<std::vector<std::pair<std::string, std::string>>> vertex_pair_filter;
  unsigned parallelism = 1;  // 0: one worker per hardware thread
  bool include_weighting_estimator = true;
  std::uint64_t seed = 0;
  // Instances with more non-empty updates skip the exact oracle; 0 disables it.
  std::size_t oracle_max_updates = 12;
  CapacityRule capacity_rule = CapacityRule::kSameRoleOverlap;
};

struct SurveyRecord {
  std::string graph;
  std::string s;
  std::string t;
  std::size_t old1 = 0, new1 = 0, old2 = 0, new2 = 0;  // indices into the s-t paths
  bool feasible = false;
  bool feasible_by_batches = false;  // schedule_feasible verdict
  std::optional<bool> feasible_by_oracle;
  std::optional<int> rounds_feasible;
  std::optional<int> rounds_optimal;
  std::optional<int> rounds_oracle;
  std::optional<int> rounds_weighting;
  std::size_t blocks = 0;
  std::size_t dependencies = 0;
  bool repairable = false;
  std::string error;

  bool verdicts_agree() const;
};

struct SurveyResult {
  std::vector<SurveyRecord> records;
  std::map<int, std::size_t> histogram_optimal;
  std::map<int, std::size_t> histogram_feasible;
  std::size_t infeasible = 0;
  std::size_t repairable = 0;
  std::size_t dismissed_not_dag = 0;
  std::size_t errors = 0;
  std::size_t estimator_mismatches = 0;
  std::size_t verdict_disagreements = 0;
};

// Surveys every ordered (s,t) of every graph: each flow independently picks
// an old and a different new path among the s-t paths, and every resulting
// instance is scheduled both ways. Pair unions with a cycle are dismissed.
// Records come out in enumeration order whatever the parallelism.
SurveyResult run_survey(const std::vector<BaseGraph>& graphs,
                        const SurveyConfig& cfg);

std::string survey_csv(const SurveyResult& result);
// "rounds,optimal,feasible" rows.
std::string survey_histogram(const SurveyResult& result);
std::string survey_summary(const SurveyResult& result);

// Two pairs over `segments` consecutive segments z_j -> z_{j+1} (4 vertices
// per segment, plus the terminal). In every segment the first pair moves
// from one detour onto the detour the second pair leaves, so it depends on
// the second pair's block there; even and odd segments swap the roles.
UpdateFlowNetwork chain_instance(std::size_t segments);

}  // namespace reroute

#endif  // REROUTE_BENCH_HPP_
