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

#ifndef REROUTE_TWO_FLOW_HPP_
#define REROUTE_TWO_FLOW_HPP_

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reroute/network.hpp"
#include "reroute/schedule.hpp"

namespace reroute {

// Maximal segment of one pair between consecutive vertices shared by its old
// and new paths, where the two paths differ. Segments that coincide (a shared
// edge) produce no block.
struct Block {
  PairIndex pair = 0;
  int index = 0;
  VertexId start_vertex = kNoVertex;
  VertexId end_vertex = kNoVertex;
  std::vector<EdgeId> old_edges;
  std::vector<EdgeId> new_edges;

  friend bool operator==(const Block&, const Block&) = default;
};

// Interior vertices of the new segment (need a rule before the flip) and of
// the old segment (can be cleared after it).
std::vector<VertexId> prep_vertices(const UpdateFlowNetwork& net, const Block& b);
std::vector<VertexId> cleanup_vertices(const UpdateFlowNetwork& net,
                                       const Block& b);

// Blocks of one pair in path order. Throws Error(kNotDag) when the old and
// new paths visit their shared vertices in different orders, i.e. when the
// union of the two paths has a directed cycle.
std::vector<Block> decompose_blocks(const UpdateFlowNetwork& net, PairIndex p);

// A rank per vertex that extends the order of every pair path: a topological
// order of the union of all pair edges, ties broken by vertex id. If the
// union is cyclic, strongly connected components are ranked topologically
// and vertices inside one component by id.
std::vector<std::size_t> vertex_ranks(const UpdateFlowNetwork& net);

// Orders blocks by start vertex, then end vertex, then pair index.
std::strong_ordering compare_blocks(const Block& a, const Block& b,
                                    const std::vector<std::size_t>& ranks);

// Blocks of both pairs, with b1 -> b2 ("b1 requires b2") when some edge of
// b1's new segment lies on b2's old segment and cannot carry both demands.
struct DependencyGraph {
  std::vector<Block> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  bool has_cycle() const;
  std::vector<std::size_t> sinks() const;
};

// Nodes sorted by compare_blocks, edges sorted and deduplicated. Throws
// Error(kWrongPairCount) unless the instance has exactly two pairs.
DependencyGraph build_dependency_graph(const UpdateFlowNetwork& net);

// Repeatedly updates all sink blocks of the dependency graph, each batch in
// its own window of three rounds (prepare, flip start, clean up). Returns
// nullopt if the dependency graph has a cycle, in which case no valid
// sequence exists.
std::optional<UpdateSequence> schedule_feasible(const UpdateFlowNetwork& net);

// Minimum-round schedule. Every block flips as early as its dependencies
// allow: in round 1 + [needs preparation], or one round after the latest
// flip among the blocks it requires. Preparation goes in the round before
// the flip, cleanup in the round after. Runs in linear time.
std::optional<UpdateSequence> schedule_optimal(const UpdateFlowNetwork& net);

// Sink batches with overlapping windows: batch k prepares in round i-1,
// flips in round i and cleans up in round i+1, where i starts at 2 if any
// first-batch block needs preparation (else 1) and grows by one per batch.
// Always valid, but not always shortest.
std::optional<UpdateSequence> schedule_batched(const UpdateFlowNetwork& net);

// Fewest rounds a block can be updated in, from its segment lengths.
int block_round_lower_bound(const Block& b);

// Human-readable listing of blocks and dependency edges.
std::string format_dependency_graph(const UpdateFlowNetwork& net,
                                    const DependencyGraph& graph);

}  // namespace reroute

#endif  // REROUTE_TWO_FLOW_HPP_
