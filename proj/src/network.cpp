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

#include "reroute/network.hpp"

#include <algorithm>
#include <unordered_set>

#include "reroute/error.hpp"

namespace reroute {
namespace {

[[noreturn]] void invariant(const std::string& message) {
  throw Error(ErrorCode::kInvariant, message);
}

std::string edge_label(const std::string& tail, const std::string& head) {
  return "(" + tail + "," + head + ")";
}

}  // namespace

UpdateFlowNetwork UpdateFlowNetwork::from_document(const InstanceDocument& doc) {
  UpdateFlowNetwork net;

  if (doc.vertices.empty()) invariant("instance declares no vertices");
  net.names_ = doc.vertices;
  net.name_index_.reserve(doc.vertices.size());
  for (std::size_t i = 0; i < doc.vertices.size(); ++i) {
    if (!net.name_index_.emplace(doc.vertices[i], static_cast<VertexId>(i))
             .second) {
      invariant("duplicate vertex '" + doc.vertices[i] + "'");
    }
  }
  auto resolve = [&](const std::string& name, const std::string& where) {
    auto it = net.name_index_.find(name);
    if (it == net.name_index_.end()) {
      invariant(where + " references undeclared vertex '" + name + "'");
    }
    return it->second;
  };

  net.source_ = resolve(doc.source, "source");
  net.terminal_ = resolve(doc.terminal, "terminal");
  if (net.source_ == net.terminal_) invariant("source equals terminal");

  net.edges_.reserve(doc.edges.size());
  net.edge_index_.reserve(doc.edges.size());
  for (const auto& entry : doc.edges) {
    const std::string label = edge_label(entry.tail, entry.head);
    Edge e{resolve(entry.tail, "edge " + label),
           resolve(entry.head, "edge " + label), entry.capacity};
    if (e.tail == e.head) invariant("self-loop on edge " + label);
    if (e.capacity < 0) invariant("negative capacity on edge " + label);
    auto id = static_cast<EdgeId>(net.edges_.size());
    if (!net.edge_index_.emplace(edge_key(e.tail, e.head), id).second) {
      invariant("parallel edge " + label);
    }
    net.edges_.push_back(e);
  }

  const std::size_t n = net.names_.size();
  net.pairs_.reserve(doc.pairs.size());
  net.old_out_.assign(doc.pairs.size() * n, kNoEdge);
  net.new_out_.assign(doc.pairs.size() * n, kNoEdge);
  std::unordered_set<std::string> pair_ids;

  for (std::size_t pi = 0; pi < doc.pairs.size(); ++pi) {
    const auto& entry = doc.pairs[pi];
    const auto p = static_cast<PairIndex>(pi);
    if (entry.id.empty()) invariant("pair with empty id");
    if (!pair_ids.insert(entry.id).second) {
      invariant("duplicate pair id '" + entry.id + "'");
    }
    if (entry.demand <= 0) {
      invariant("pair '" + entry.id + "' has non-positive demand");
    }
    FlowPair pair{entry.id, {}, {}, entry.demand};

    auto build_path = [&](const std::vector<std::string>& names,
                          const char* which, std::vector<VertexId>& path,
                          std::vector<EdgeId>& out_table,
                          std::vector<EdgeId>& path_edges) {
      const std::string where =
          "pair '" + entry.id + "' " + which + " path";
      if (names.size() < 2) invariant(where + " is too short");
      std::vector<bool> seen(n, false);
      for (const auto& name : names) {
        VertexId v = resolve(name, where);
        if (seen[v]) invariant(where + " is not simple (repeats '" + name + "')");
        seen[v] = true;
        path.push_back(v);
      }
      if (path.front() != net.source_) invariant(where + " does not start at the source");
      if (path.back() != net.terminal_) invariant(where + " does not end at the terminal");
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        auto e = net.find_edge(path[i], path[i + 1]);
        if (!e) {
          invariant(where + " uses missing edge " +
                    edge_label(names[i], names[i + 1]));
        }
        out_table[static_cast<std::size_t>(p) * n + path[i]] = *e;
        path_edges.push_back(*e);
      }
    };

    std::vector<EdgeId> old_edges, new_edges;
    build_path(entry.old_path, "old", pair.old_path, net.old_out_, old_edges);
    build_path(entry.new_path, "new", pair.new_path, net.new_out_, new_edges);

    std::vector<VertexId> vertices = pair.old_path;
    std::vector<bool> on_old(n, false);
    for (VertexId v : pair.old_path) on_old[v] = true;
    for (VertexId v : pair.new_path) {
      if (!on_old[v]) vertices.push_back(v);
    }
    std::vector<EdgeId> edges = old_edges;
    std::unordered_set<EdgeId> old_set(old_edges.begin(), old_edges.end());
    for (EdgeId e : new_edges) {
      if (!old_set.contains(e)) edges.push_back(e);
    }

    net.pair_vertices_.push_back(std::move(vertices));
    net.pair_edges_.push_back(std::move(edges));
    net.old_edges_.push_back(std::move(old_edges));
    net.new_edges_.push_back(std::move(new_edges));
    net.pairs_.push_back(std::move(pair));
  }

  // Both endpoint states must be valid flow sets.
  std::vector<std::int64_t> old_load(net.edges_.size(), 0);
  std::vector<std::int64_t> new_load(net.edges_.size(), 0);
  for (std::size_t p = 0; p < net.pairs_.size(); ++p) {
    for (EdgeId e : net.old_edges_[p]) old_load[e] += net.pairs_[p].demand;
    for (EdgeId e : net.new_edges_[p]) new_load[e] += net.pairs_[p].demand;
  }
  for (std::size_t e = 0; e < net.edges_.size(); ++e) {
    const auto& edge = net.edges_[e];
    const std::string label =
        edge_label(net.names_[edge.tail], net.names_[edge.head]);
    if (old_load[e] > edge.capacity) {
      invariant("initial loads exceed capacity on edge " + label);
    }
    if (new_load[e] > edge.capacity) {
      invariant("final loads exceed capacity on edge " + label);
    }
  }
  for (const auto& edge : net.edges_) {
    if (edge.capacity == 0) {
      invariant("non-positive capacity on edge " +
                edge_label(net.names_[edge.tail], net.names_[edge.head]));
    }
  }

  for (std::size_t p = 0; p < net.pairs_.size(); ++p) {
    for (VertexId v : net.pair_vertices_[p]) {
      Update u{v, static_cast<PairIndex>(p)};
      if (!is_empty_update(net, u)) net.updates_.push_back(u);
    }
  }
  std::sort(net.updates_.begin(), net.updates_.end());
  return net;
}

InstanceDocument UpdateFlowNetwork::to_document() const {
  InstanceDocument doc;
  doc.vertices = names_;
  doc.edges.reserve(edges_.size());
  for (const auto& e : edges_) {
    doc.edges.push_back({names_[e.tail], names_[e.head], e.capacity});
  }
  doc.source = names_[source_];
  doc.terminal = names_[terminal_];
  for (const auto& pair : pairs_) {
    InstanceDocument::PairEntry entry;
    entry.id = pair.id;
    entry.demand = pair.demand;
    for (VertexId v : pair.old_path) entry.old_path.push_back(names_[v]);
    for (VertexId v : pair.new_path) entry.new_path.push_back(names_[v]);
    doc.pairs.push_back(std::move(entry));
  }
  return doc;
}

std::optional<VertexId> UpdateFlowNetwork::find_vertex(
    std::string_view name) const {
  auto it = name_index_.find(std::string(name));
  if (it == name_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeId> UpdateFlowNetwork::find_edge(VertexId tail,
                                                   VertexId head) const {
  auto it = edge_index_.find(edge_key(tail, head));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<PairIndex> UpdateFlowNetwork::find_pair(
    std::string_view id) const {
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    if (pairs_[p].id == id) return static_cast<PairIndex>(p);
  }
  return std::nullopt;
}

bool UpdateFlowNetwork::on_old_path(PairIndex p, VertexId v) const {
  return old_out(p, v) != kNoEdge || v == terminal_;
}

bool UpdateFlowNetwork::on_new_path(PairIndex p, VertexId v) const {
  return new_out(p, v) != kNoEdge || v == terminal_;
}

std::optional<std::size_t> UpdateFlowNetwork::update_index(Update u) const {
  auto it = std::lower_bound(updates_.begin(), updates_.end(), u);
  if (it == updates_.end() || *it != u) return std::nullopt;
  return static_cast<std::size_t>(it - updates_.begin());
}

UpdateSet::UpdateSet(const UpdateFlowNetwork& net)
    : vertex_count_(net.vertex_count()),
      bits_(net.vertex_count() * net.pair_count(), false) {}

UpdateSet::UpdateSet(const UpdateFlowNetwork& net,
                     std::span<const Update> updates)
    : UpdateSet(net) {
  for (Update u : updates) insert(u);
}

std::vector<Update> UpdateSet::to_vector() const {
  std::vector<Update> out;
  if (vertex_count_ == 0) return out;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) {
      out.push_back({static_cast<VertexId>(i % vertex_count_),
                     static_cast<PairIndex>(i / vertex_count_)});
    }
  }
  return out;
}

bool is_empty_update(const UpdateFlowNetwork& net, Update u) {
  return net.old_out(u.pair, u.vertex) == net.new_out(u.pair, u.vertex);
}

EdgeId active_out(const UpdateFlowNetwork& net, PairIndex p, VertexId v,
                  const UpdateSet& resolved) {
  return resolved.contains({v, p}) ? net.new_out(p, v) : net.old_out(p, v);
}

ActiveGraph active_edges(const UpdateFlowNetwork& net,
                         const UpdateSet& resolved) {
  ActiveGraph graph;
  graph.per_pair.resize(net.pair_count());
  for (std::size_t pi = 0; pi < net.pair_count(); ++pi) {
    const auto p = static_cast<PairIndex>(pi);
    auto& active = graph.per_pair[pi];
    for (VertexId v : net.pair_vertices(p)) {
      EdgeId e = active_out(net, p, v, resolved);
      if (e != kNoEdge) active.push_back(e);
    }
    std::sort(active.begin(), active.end());
  }
  return graph;
}

std::optional<std::vector<VertexId>> transient_flow(
    const UpdateFlowNetwork& net, PairIndex p, const UpdateSet& resolved) {
  // The terminal has no out-edges, so a walk that revisits a vertex is stuck
  // in a cycle and can never reach it; bounding the walk length suffices.
  std::vector<VertexId> path{net.source()};
  VertexId v = net.source();
  while (v != net.terminal()) {
    EdgeId e = active_out(net, p, v, resolved);
    if (e == kNoEdge || path.size() >= net.vertex_count()) return std::nullopt;
    v = net.edge(e).head;
    path.push_back(v);
  }
  return path;
}

}  // namespace reroute
