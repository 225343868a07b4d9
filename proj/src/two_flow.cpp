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

#include "reroute/two_flow.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <sstream>

#include "reroute/error.hpp"

namespace reroute {

std::vector<VertexId> prep_vertices(const UpdateFlowNetwork& net,
                                    const Block& b) {
  std::vector<VertexId> out;
  for (std::size_t i = 0; i + 1 < b.new_edges.size(); ++i) {
    out.push_back(net.edge(b.new_edges[i]).head);
  }
  return out;
}

std::vector<VertexId> cleanup_vertices(const UpdateFlowNetwork& net,
                                       const Block& b) {
  std::vector<VertexId> out;
  for (std::size_t i = 0; i + 1 < b.old_edges.size(); ++i) {
    out.push_back(net.edge(b.old_edges[i]).head);
  }
  return out;
}

std::vector<Block> decompose_blocks(const UpdateFlowNetwork& net, PairIndex p) {
  const FlowPair& pair = net.pair(p);
  std::vector<int> new_pos(net.vertex_count(), -1);
  for (std::size_t i = 0; i < pair.new_path.size(); ++i) {
    new_pos[pair.new_path[i]] = static_cast<int>(i);
  }

  std::vector<Block> blocks;
  int prev_old = -1;
  int prev_new = -1;
  for (std::size_t i = 0; i < pair.old_path.size(); ++i) {
    const int np = new_pos[pair.old_path[i]];
    if (np < 0) continue;
    const int op = static_cast<int>(i);
    if (np <= prev_new) {
      throw Error(ErrorCode::kNotDag,
                  "pair '" + pair.id + "': old and new paths cross at '" +
                      net.vertex_name(pair.old_path[i]) +
                      "', their union has a cycle");
    }
    if (prev_old >= 0 && !(op - prev_old == 1 && np - prev_new == 1)) {
      Block b;
      b.pair = p;
      b.index = static_cast<int>(blocks.size()) + 1;
      b.start_vertex = pair.old_path[prev_old];
      b.end_vertex = pair.old_path[op];
      for (int k = prev_old; k < op; ++k) {
        b.old_edges.push_back(*net.find_edge(pair.old_path[k], pair.old_path[k + 1]));
      }
      for (int k = prev_new; k < np; ++k) {
        b.new_edges.push_back(*net.find_edge(pair.new_path[k], pair.new_path[k + 1]));
      }
      blocks.push_back(std::move(b));
    }
    prev_old = op;
    prev_new = np;
  }
  return blocks;
}

std::vector<std::size_t> vertex_ranks(const UpdateFlowNetwork& net) {
  const std::size_t n = net.vertex_count();
  std::vector<std::vector<VertexId>> out(n), in(n);
  std::vector<bool> used(net.edges().size(), false);
  for (std::size_t p = 0; p < net.pair_count(); ++p) {
    for (EdgeId e : net.pair_edges(static_cast<PairIndex>(p))) {
      if (used[e]) continue;
      used[e] = true;
      out[net.edge(e).tail].push_back(net.edge(e).head);
      in[net.edge(e).head].push_back(net.edge(e).tail);
    }
  }

  // Kosaraju, iteratively: finishing order on the graph, then components on
  // the reverse graph.
  std::vector<VertexId> order;
  order.reserve(n);
  std::vector<bool> seen(n, false);
  for (std::size_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<std::pair<VertexId, std::size_t>> stack{{static_cast<VertexId>(root), 0}};
    seen[root] = true;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < out[v].size()) {
        VertexId w = out[v][next++];
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back({w, 0});
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  std::vector<int> comp(n, -1);
  std::vector<VertexId> comp_min;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] >= 0) continue;
    const int c = static_cast<int>(comp_min.size());
    comp_min.push_back(*it);
    std::vector<VertexId> stack{*it};
    comp[*it] = c;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      comp_min[c] = std::min(comp_min[c], v);
      for (VertexId w : in[v]) {
        if (comp[w] < 0) {
          comp[w] = c;
          stack.push_back(w);
        }
      }
    }
  }

  // Kahn on the condensation, smallest member id first.
  const std::size_t cc = comp_min.size();
  std::vector<std::vector<int>> members(cc), succ(cc);
  std::vector<int> indeg(cc, 0);
  for (std::size_t v = 0; v < n; ++v) {
    members[comp[v]].push_back(static_cast<VertexId>(v));
    for (VertexId w : out[v]) {
      if (comp[v] != comp[w]) {
        succ[comp[v]].push_back(comp[w]);
        ++indeg[comp[w]];
      }
    }
  }
  using Entry = std::pair<VertexId, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> ready;
  for (std::size_t c = 0; c < cc; ++c) {
    if (indeg[c] == 0) ready.push({comp_min[c], static_cast<int>(c)});
  }
  std::vector<std::size_t> rank(n, 0);
  std::size_t next_rank = 0;
  while (!ready.empty()) {
    const int c = ready.top().second;
    ready.pop();
    for (VertexId v : members[c]) rank[v] = next_rank++;
    for (int d : succ[c]) {
      if (--indeg[d] == 0) ready.push({comp_min[d], d});
    }
  }
  return rank;
}

std::strong_ordering compare_blocks(const Block& a, const Block& b,
                                    const std::vector<std::size_t>& ranks) {
  if (auto c = ranks[a.start_vertex] <=> ranks[b.start_vertex]; c != 0) return c;
  if (auto c = ranks[a.end_vertex] <=> ranks[b.end_vertex]; c != 0) return c;
  return a.pair <=> b.pair;
}

bool DependencyGraph::has_cycle() const {
  std::vector<std::size_t> outdeg(nodes.size(), 0);
  std::vector<std::vector<std::size_t>> pred(nodes.size());
  for (auto [a, b] : edges) {
    ++outdeg[a];
    pred[b].push_back(a);
  }
  std::vector<std::size_t> queue = sinks();
  std::size_t removed = 0;
  while (!queue.empty()) {
    std::size_t x = queue.back();
    queue.pop_back();
    ++removed;
    for (std::size_t y : pred[x]) {
      if (--outdeg[y] == 0) queue.push_back(y);
    }
  }
  return removed != nodes.size();
}

std::vector<std::size_t> DependencyGraph::sinks() const {
  std::vector<bool> has_out(nodes.size(), false);
  for (auto [a, b] : edges) has_out[a] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!has_out[i]) out.push_back(i);
  }
  return out;
}

namespace {

void require_two_pairs(const UpdateFlowNetwork& net) {
  if (net.pair_count() != 2) {
    throw Error(ErrorCode::kWrongPairCount,
                "expected exactly 2 flow pairs, got " +
                    std::to_string(net.pair_count()));
  }
}

// Blocks in pair order plus dependency adjacency, built in one sweep over
// the block edges. Successor lists may repeat a block.
struct Blocks {
  std::vector<Block> blocks;
  std::vector<std::vector<std::size_t>> succ;
  std::vector<std::vector<std::size_t>> pred;
};

Blocks analyze(const UpdateFlowNetwork& net) {
  require_two_pairs(net);
  Blocks out;
  for (PairIndex p = 0; p < 2; ++p) {
    for (Block& b : decompose_blocks(net, p)) out.blocks.push_back(std::move(b));
  }
  const std::size_t nb = out.blocks.size();
  out.succ.resize(nb);
  out.pred.resize(nb);

  // Block owning each edge as part of its old segment, per pair.
  const std::size_t ne = net.edges().size();
  std::vector<std::int64_t> old_owner(2 * ne, -1);
  for (std::size_t i = 0; i < nb; ++i) {
    const Block& b = out.blocks[i];
    for (EdgeId e : b.old_edges) {
      old_owner[static_cast<std::size_t>(b.pair) * ne + e] =
          static_cast<std::int64_t>(i);
    }
  }
  for (std::size_t i = 0; i < nb; ++i) {
    const Block& b = out.blocks[i];
    const PairIndex other = 1 - b.pair;
    const std::int64_t both = net.pair(0).demand + net.pair(1).demand;
    for (EdgeId e : b.new_edges) {
      const std::int64_t j = old_owner[static_cast<std::size_t>(other) * ne + e];
      if (j >= 0 && net.edge(e).capacity < both) {
        out.succ[i].push_back(static_cast<std::size_t>(j));
        out.pred[static_cast<std::size_t>(j)].push_back(i);
      }
    }
  }
  return out;
}

// Reverse topological sweep from the sinks. Returns the blocks in removal
// order, or nullopt on a cycle.
std::optional<std::vector<std::size_t>> sink_order(const Blocks& g) {
  const std::size_t nb = g.blocks.size();
  std::vector<std::size_t> outdeg(nb);
  std::vector<std::size_t> order;
  order.reserve(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    outdeg[i] = g.succ[i].size();
    if (outdeg[i] == 0) order.push_back(i);
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t y : g.pred[order[k]]) {
      if (--outdeg[y] == 0) order.push_back(y);
    }
  }
  if (order.size() != nb) return std::nullopt;
  return order;
}

// Places each block with its flip in flip_round[b] (1-based), preparation
// one round earlier and cleanup one round later, then drops empty rounds.
UpdateSequence emit(const UpdateFlowNetwork& net, const Blocks& g,
                    const std::vector<std::size_t>& flip_round) {
  std::size_t horizon = 0;
  for (std::size_t r : flip_round) horizon = std::max(horizon, r + 1);
  UpdateSequence seq;
  seq.rounds.resize(horizon + 1);
  for (std::size_t i = 0; i < g.blocks.size(); ++i) {
    const Block& b = g.blocks[i];
    const std::size_t r = flip_round[i];
    for (VertexId v : prep_vertices(net, b)) seq.rounds[r - 2].push_back({v, b.pair});
    seq.rounds[r - 1].push_back({b.start_vertex, b.pair});
    for (VertexId v : cleanup_vertices(net, b)) seq.rounds[r].push_back({v, b.pair});
  }
  normalize(seq);
  return seq;
}

bool needs_prep(const Block& b) { return b.new_edges.size() > 1; }

// Batch number of every block: 1 for sinks, else one more than the latest
// batch among the blocks it requires.
std::vector<std::size_t> batches(const Blocks& g,
                                 const std::vector<std::size_t>& order) {
  std::vector<std::size_t> batch(g.blocks.size(), 1);
  for (std::size_t x : order) {
    for (std::size_t y : g.succ[x]) batch[x] = std::max(batch[x], batch[y] + 1);
  }
  return batch;
}

}  // namespace

DependencyGraph build_dependency_graph(const UpdateFlowNetwork& net) {
  Blocks g = analyze(net);
  const auto ranks = vertex_ranks(net);
  std::vector<std::size_t> perm(g.blocks.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return compare_blocks(g.blocks[a], g.blocks[b], ranks) < 0;
  });
  std::vector<std::size_t> position(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) position[perm[i]] = i;

  DependencyGraph d;
  for (std::size_t i : perm) d.nodes.push_back(g.blocks[i]);
  for (std::size_t i = 0; i < g.blocks.size(); ++i) {
    for (std::size_t j : g.succ[i]) d.edges.push_back({position[i], position[j]});
  }
  std::sort(d.edges.begin(), d.edges.end());
  d.edges.erase(std::unique(d.edges.begin(), d.edges.end()), d.edges.end());
  return d;
}

std::optional<UpdateSequence> schedule_feasible(const UpdateFlowNetwork& net) {
  Blocks g = analyze(net);
  auto order = sink_order(g);
  if (!order) return std::nullopt;
  auto batch = batches(g, *order);
  std::vector<std::size_t> flip(g.blocks.size());
  for (std::size_t i = 0; i < flip.size(); ++i) flip[i] = 3 * batch[i] - 1;
  return emit(net, g, flip);
}

std::optional<UpdateSequence> schedule_optimal(const UpdateFlowNetwork& net) {
  Blocks g = analyze(net);
  auto order = sink_order(g);
  if (!order) return std::nullopt;
  std::vector<std::size_t> flip(g.blocks.size());
  for (std::size_t x : *order) {
    flip[x] = needs_prep(g.blocks[x]) ? 2 : 1;
    for (std::size_t y : g.succ[x]) flip[x] = std::max(flip[x], flip[y] + 1);
  }
  return emit(net, g, flip);
}

std::optional<UpdateSequence> schedule_batched(const UpdateFlowNetwork& net) {
  Blocks g = analyze(net);
  auto order = sink_order(g);
  if (!order) return std::nullopt;
  auto batch = batches(g, *order);
  std::size_t first = 1;
  for (std::size_t i = 0; i < g.blocks.size(); ++i) {
    if (batch[i] == 1 && needs_prep(g.blocks[i])) first = 2;
  }
  std::vector<std::size_t> flip(g.blocks.size());
  for (std::size_t i = 0; i < flip.size(); ++i) flip[i] = first + batch[i] - 1;
  return emit(net, g, flip);
}

int block_round_lower_bound(const Block& b) {
  const bool long_old = b.old_edges.size() >= 2;
  const bool long_new = b.new_edges.size() >= 2;
  if (long_old && long_new) return 3;
  if (long_old || long_new) return 2;
  return 1;
}

std::string format_dependency_graph(const UpdateFlowNetwork& net,
                                    const DependencyGraph& graph) {
  auto name = [&](const Block& b) {
    return net.pair(b.pair).id + "#" + std::to_string(b.index);
  };
  auto edges = [&](const std::vector<EdgeId>& list) {
    std::string s = "[";
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Edge& e = net.edge(list[i]);
      if (i) s += ",";
      s += "(" + net.vertex_name(e.tail) + "," + net.vertex_name(e.head) + ")";
    }
    return s + "]";
  };
  std::ostringstream out;
  for (const Block& b : graph.nodes) {
    out << "block " << name(b) << " " << net.vertex_name(b.start_vertex) << "->"
        << net.vertex_name(b.end_vertex) << " old " << edges(b.old_edges)
        << " new " << edges(b.new_edges) << "\n";
  }
  for (auto [a, b] : graph.edges) {
    out << "requires " << name(graph.nodes[a]) << " -> " << name(graph.nodes[b])
        << "\n";
  }
  return out.str();
}

}  // namespace reroute
