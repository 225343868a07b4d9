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

#ifndef REROUTE_NETWORK_HPP_
#define REROUTE_NETWORK_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace reroute {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;
using PairIndex = std::int32_t;

inline constexpr VertexId kNoVertex = -1;
inline constexpr EdgeId kNoEdge = -1;

struct Edge {
  VertexId tail;
  VertexId head;
  std::int64_t capacity;
};

struct FlowPair {
  std::string id;
  std::vector<VertexId> old_path;
  std::vector<VertexId> new_path;
  std::int64_t demand;
};

// Switching `vertex` from its old to its new forwarding rule for `pair`.
// Ordered pair-major so that sorted containers group updates by flow.
struct Update {
  VertexId vertex = kNoVertex;
  PairIndex pair = 0;

  friend bool operator==(const Update&, const Update&) = default;
  friend std::strong_ordering operator<=>(const Update& a, const Update& b) {
    if (auto c = a.pair <=> b.pair; c != 0) return c;
    return a.vertex <=> b.vertex;
  }
};

// Name-based form of an instance, i.e. the content of an instance document
// before ids are resolved.
struct InstanceDocument {
  struct EdgeEntry {
    std::string tail;
    std::string head;
    std::int64_t capacity = 0;
    friend bool operator==(const EdgeEntry&, const EdgeEntry&) = default;
  };
  struct PairEntry {
    std::string id;
    std::vector<std::string> old_path;
    std::vector<std::string> new_path;
    std::int64_t demand = 0;
    friend bool operator==(const PairEntry&, const PairEntry&) = default;
  };

  std::vector<std::string> vertices;
  std::vector<EdgeEntry> edges;
  std::string source;
  std::string terminal;
  std::vector<PairEntry> pairs;

  friend bool operator==(const InstanceDocument&,
                         const InstanceDocument&) = default;
};

// A capacitated digraph with one source, one terminal and a family of update
// flow pairs. Immutable once built; every invariant is checked by
// from_document() and violations raise Error(kInvariant).
//
// Vertex names are opaque strings mapped to dense ids in declaration order.
class UpdateFlowNetwork {
 public:
  static UpdateFlowNetwork from_document(const InstanceDocument& doc);
  InstanceDocument to_document() const;

  std::size_t vertex_count() const { return names_.size(); }
  const std::string& vertex_name(VertexId v) const { return names_[v]; }
  std::optional<VertexId> find_vertex(std::string_view name) const;

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::optional<EdgeId> find_edge(VertexId tail, VertexId head) const;

  VertexId source() const { return source_; }
  VertexId terminal() const { return terminal_; }

  std::size_t pair_count() const { return pairs_.size(); }
  const FlowPair& pair(PairIndex p) const { return pairs_[p]; }
  std::optional<PairIndex> find_pair(std::string_view id) const;

  // Out-edge of v on the old (resp. new) path of pair p; kNoEdge if v has
  // none there.
  EdgeId old_out(PairIndex p, VertexId v) const { return old_out_[slot(p, v)]; }
  EdgeId new_out(PairIndex p, VertexId v) const { return new_out_[slot(p, v)]; }
  bool on_pair(PairIndex p, VertexId v) const {
    return old_out(p, v) != kNoEdge || new_out(p, v) != kNoEdge ||
           v == terminal_;
  }
  bool on_old_path(PairIndex p, VertexId v) const;
  bool on_new_path(PairIndex p, VertexId v) const;

  // Vertices of old ∪ new for pair p: the old path in order, then the
  // new-only vertices in new-path order.
  std::span<const VertexId> pair_vertices(PairIndex p) const {
    return pair_vertices_[p];
  }
  // Edges of old ∪ new for pair p: old path edges, then new-only edges.
  std::span<const EdgeId> pair_edges(PairIndex p) const {
    return pair_edges_[p];
  }
  std::span<const EdgeId> old_edges(PairIndex p) const { return old_edges_[p]; }
  std::span<const EdgeId> new_edges(PairIndex p) const { return new_edges_[p]; }

  // All non-empty updates, sorted. Their positions are the "update ids"
  // used for deterministic enumeration orders.
  std::span<const Update> updates() const { return updates_; }
  std::optional<std::size_t> update_index(Update u) const;

 private:
  std::size_t slot(PairIndex p, VertexId v) const {
    return static_cast<std::size_t>(p) * names_.size() +
           static_cast<std::size_t>(v);
  }
  static std::uint64_t edge_key(VertexId tail, VertexId head) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(tail)) << 32) |
           static_cast<std::uint32_t>(head);
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, VertexId> name_index_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, EdgeId> edge_index_;
  VertexId source_ = kNoVertex;
  VertexId terminal_ = kNoVertex;
  std::vector<FlowPair> pairs_;
  std::vector<EdgeId> old_out_;
  std::vector<EdgeId> new_out_;
  std::vector<std::vector<VertexId>> pair_vertices_;
  std::vector<std::vector<EdgeId>> pair_edges_;
  std::vector<std::vector<EdgeId>> old_edges_;
  std::vector<std::vector<EdgeId>> new_edges_;
  std::vector<Update> updates_;
};

// Dense set of resolved updates over (pair, vertex).
class UpdateSet {
 public:
  UpdateSet() = default;
  explicit UpdateSet(const UpdateFlowNetwork& net);
  UpdateSet(const UpdateFlowNetwork& net, std::span<const Update> updates);

  void insert(Update u) { bits_[slot(u)] = true; }
  void erase(Update u) { bits_[slot(u)] = false; }
  bool contains(Update u) const { return bits_[slot(u)]; }
  std::vector<Update> to_vector() const;

  friend bool operator==(const UpdateSet&, const UpdateSet&) = default;

 private:
  std::size_t slot(Update u) const {
    return static_cast<std::size_t>(u.pair) * vertex_count_ +
           static_cast<std::size_t>(u.vertex);
  }

  std::size_t vertex_count_ = 0;
  std::vector<bool> bits_;
};

// Per-pair active edges of a U-state, each list sorted by edge id.
struct ActiveGraph {
  std::vector<std::vector<EdgeId>> per_pair;
};

bool is_empty_update(const UpdateFlowNetwork& net, Update u);

// The edge vertex v forwards pair p on under `resolved`: its new out-edge
// once resolved, its old out-edge before. kNoEdge if that rule is absent.
EdgeId active_out(const UpdateFlowNetwork& net, PairIndex p, VertexId v,
                  const UpdateSet& resolved);

ActiveGraph active_edges(const UpdateFlowNetwork& net,
                         const UpdateSet& resolved);

// The unique simple s->t path among the pair's active edges, or nullopt.
// Every vertex has at most one active out-edge per pair, so the walk from s
// is the only candidate; it fails on a dead end or a revisited vertex.
std::optional<std::vector<VertexId>> transient_flow(
    const UpdateFlowNetwork& net, PairIndex p, const UpdateSet& resolved);

}  // namespace reroute

#endif  // REROUTE_NETWORK_HPP_
