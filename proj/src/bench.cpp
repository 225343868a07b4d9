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

#include "reroute/bench.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "reroute/error.hpp"
#include "reroute/oracle.hpp"
#include "reroute/two_flow.hpp"

namespace reroute {

namespace pt = boost::property_tree;

std::vector<std::vector<int>> BaseGraph::adjacency() const {
  std::vector<std::vector<int>> adj(nodes.size());
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

std::optional<int> BaseGraph::find_node(std::string_view name) const {
  auto it = std::find(nodes.begin(), nodes.end(), name);
  if (it == nodes.end()) return std::nullopt;
  return static_cast<int>(it - nodes.begin());
}

BaseGraph ingest_graphml(std::string_view text, std::string id) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::kParse, "line " + std::to_string(e.line()) +
                                       ": malformed GraphML (" + e.message() + ")");
  }
  auto root = tree.get_child_optional("graphml");
  if (!root) throw Error(ErrorCode::kParse, "missing <graphml> element");
  auto graph = root->get_child_optional("graph");
  if (!graph) throw Error(ErrorCode::kEmptyGraph, "no <graph> element");

  BaseGraph g;
  g.id = std::move(id);
  for (const auto& [tag, child] : *graph) {
    if (tag != "node") continue;
    auto name = child.get_optional<std::string>("<xmlattr>.id");
    if (!name) throw Error(ErrorCode::kParse, "node without id");
    if (g.find_node(*name)) throw Error(ErrorCode::kParse, "duplicate node " + *name);
    g.nodes.push_back(*name);
  }
  if (g.nodes.empty()) throw Error(ErrorCode::kEmptyGraph, "graph has no nodes");

  std::set<std::pair<int, int>> seen;
  for (const auto& [tag, child] : *graph) {
    if (tag != "edge") continue;
    auto src = child.get_optional<std::string>("<xmlattr>.source");
    auto dst = child.get_optional<std::string>("<xmlattr>.target");
    if (!src || !dst) throw Error(ErrorCode::kParse, "edge without source or target");
    auto a = g.find_node(*src);
    auto b = g.find_node(*dst);
    if (!a || !b) {
      throw Error(ErrorCode::kParse, "edge " + *src + "-" + *dst + " names an unknown node");
    }
    if (*a == *b) {
      g.warnings.push_back("dropped self-loop at " + *src);
      continue;
    }
    std::pair<int, int> key{std::min(*a, *b), std::max(*a, *b)};
    if (!seen.insert(key).second) {
      g.warnings.push_back("collapsed parallel edge " + *src + "-" + *dst);
      continue;
    }
    g.edges.push_back(key);
  }
  return g;
}

namespace {

void check_path(const BaseGraph& g, const NodePath& path, int s, int t,
                const std::set<std::pair<int, int>>& edges) {
  if (path.size() < 2 || path.front() != s || path.back() != t) {
    throw Error(ErrorCode::kPathNotInGraph, "path does not run from the common source to terminal");
  }
  std::set<int> visited;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] < 0 || static_cast<std::size_t>(path[i]) >= g.nodes.size()) {
      throw Error(ErrorCode::kPathNotInGraph, "path names an unknown node");
    }
    if (!visited.insert(path[i]).second) {
      throw Error(ErrorCode::kPathNotInGraph, "path revisits " + g.nodes[path[i]]);
    }
    if (i > 0 && !edges.count({std::min(path[i - 1], path[i]), std::max(path[i - 1], path[i])})) {
      throw Error(ErrorCode::kPathNotInGraph,
                  "no link " + g.nodes[path[i - 1]] + "-" + g.nodes[path[i]]);
    }
  }
}

std::set<std::pair<int, int>> arcs(const NodePath& path) {
  std::set<std::pair<int, int>> out;
  for (std::size_t i = 1; i < path.size(); ++i) out.insert({path[i - 1], path[i]});
  return out;
}

}  // namespace

UpdateFlowNetwork allocate_capacities(const BaseGraph& graph,
                                      const PathPair& first,
                                      const PathPair& second, CapacityRule rule) {
  const std::set<std::pair<int, int>> links(graph.edges.begin(), graph.edges.end());
  if (first.old_path.empty()) throw Error(ErrorCode::kPathNotInGraph, "empty path");
  const int s = first.old_path.front();
  const int t = first.old_path.back();
  for (const NodePath* p : {&first.old_path, &first.new_path, &second.old_path, &second.new_path}) {
    check_path(graph, *p, s, t, links);
  }

  const auto o1 = arcs(first.old_path), n1 = arcs(first.new_path);
  const auto o2 = arcs(second.old_path), n2 = arcs(second.new_path);
  std::set<std::pair<int, int>> used;
  std::set<int> nodes;
  for (const auto* set : {&o1, &n1, &o2, &n2}) {
    for (auto arc : *set) {
      used.insert(arc);
      nodes.insert(arc.first);
      nodes.insert(arc.second);
    }
  }

  InstanceDocument doc;
  for (int v : nodes) doc.vertices.push_back(graph.nodes[v]);
  for (auto arc : used) {
    bool shared = false;
    if (rule == CapacityRule::kSameRoleOverlap) {
      shared = (o1.count(arc) && o2.count(arc)) || (n1.count(arc) && n2.count(arc));
    } else {
      shared = (o1.count(arc) || n1.count(arc)) && (o2.count(arc) || n2.count(arc));
    }
    doc.edges.push_back({graph.nodes[arc.first], graph.nodes[arc.second], shared ? 2 : 1});
  }
  doc.source = graph.nodes[s];
  doc.terminal = graph.nodes[t];
  auto names = [&](const NodePath& p) {
    std::vector<std::string> out;
    for (int v : p) out.push_back(graph.nodes[v]);
    return out;
  };
  doc.pairs.push_back({"1", names(first.old_path), names(first.new_path), 1});
  doc.pairs.push_back({"2", names(second.old_path), names(second.new_path), 1});
  return UpdateFlowNetwork::from_document(doc);
}

std::vector<NodePath> enumerate_paths(const BaseGraph& graph, int s, int t,
                                      std::size_t limit, std::uint64_t seed) {
  std::vector<NodePath> paths;
  if (limit == 0 || s == t) return paths;
  auto adj = graph.adjacency();
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    for (auto& list : adj) std::shuffle(list.begin(), list.end(), rng);
  }
  std::vector<bool> on_path(graph.nodes.size(), false);
  NodePath path{s};
  on_path[s] = true;
  // Explicit stack of next-neighbour positions.
  std::vector<std::size_t> next{0};
  while (!next.empty() && paths.size() < limit) {
    const int v = path.back();
    if (v == t) {
      paths.push_back(path);
    } else if (next.back() < adj[v].size()) {
      const int w = adj[v][next.back()++];
      if (!on_path[w]) {
        on_path[w] = true;
        path.push_back(w);
        next.push_back(0);
      }
      continue;
    }
    on_path[v] = false;
    path.pop_back();
    next.pop_back();
  }
  std::sort(paths.begin(), paths.end());
  return paths;
}

std::optional<int> estimate_rounds_weighting(const UpdateFlowNetwork& net) {
  const DependencyGraph d = build_dependency_graph(net);
  if (d.has_cycle()) return std::nullopt;
  const std::size_t n = d.nodes.size();
  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<std::size_t> indegree(n, 0);
  for (auto [a, b] : d.edges) {
    succ[a].push_back(b);
    ++indegree[b];
  }
  // Reverse topological order: every successor is finished first.
  std::vector<std::size_t> order;
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) queue.push_back(i);
  }
  while (!queue.empty()) {
    std::size_t a = queue.back();
    queue.pop_back();
    order.push_back(a);
    for (std::size_t b : succ[a]) {
      if (--indegree[b] == 0) queue.push_back(b);
    }
  }
  // tail[b]: heaviest chain starting at b, without b's cleanup term.
  std::vector<int> tail(n, 0);
  int best = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Block& b = d.nodes[*it];
    int rest = b.new_edges.size() > 1 ? 1 : 0;
    for (std::size_t c : succ[*it]) rest = std::max(rest, tail[c]);
    tail[*it] = 1 + rest;
    best = std::max(best, tail[*it] + (b.old_edges.size() > 1 ? 1 : 0));
  }
  for (const Block& b : d.nodes) {
    best = std::max(best, static_cast<int>(b.old_edges.size() + b.new_edges.size() + 1));
  }
  return best;
}

bool repairable_by_one_edge(const UpdateFlowNetwork& net) {
  InstanceDocument doc = net.to_document();
  for (auto& e : doc.edges) {
    if (e.capacity != 1) continue;
    e.capacity = 2;
    bool acyclic = !build_dependency_graph(UpdateFlowNetwork::from_document(doc)).has_cycle();
    e.capacity = 1;
    if (acyclic) return true;
  }
  return false;
}

bool SurveyRecord::verdicts_agree() const {
  if (feasible != feasible_by_batches) return false;
  return !feasible_by_oracle || *feasible_by_oracle == feasible;
}

namespace {

struct WorkItem {
  std::size_t graph;
  int s;
  int t;
  const std::vector<NodePath>* paths;
  std::size_t old1, new1, old2, new2;
};

// Returns false if the pair union is not a DAG.
bool survey_one(const BaseGraph& g, const WorkItem& item, const SurveyConfig& cfg,
                SurveyRecord& rec) {
  rec.graph = g.id;
  rec.s = g.nodes[item.s];
  rec.t = g.nodes[item.t];
  rec.old1 = item.old1;
  rec.new1 = item.new1;
  rec.old2 = item.old2;
  rec.new2 = item.new2;
  try {
    const auto& p = *item.paths;
    auto net = allocate_capacities(g, {p[item.old1], p[item.new1]},
                                   {p[item.old2], p[item.new2]}, cfg.capacity_rule);
    DependencyGraph d;
    try {
      d = build_dependency_graph(net);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kNotDag) return false;
      throw;
    }
    rec.blocks = d.nodes.size();
    rec.dependencies = d.edges.size();
    auto feasible = schedule_feasible(net);
    auto optimal = schedule_optimal(net);
    rec.feasible_by_batches = feasible.has_value();
    rec.feasible = optimal.has_value();
    if (feasible) rec.rounds_feasible = static_cast<int>(feasible->round_count());
    if (optimal) rec.rounds_optimal = static_cast<int>(optimal->round_count());
    if (cfg.oracle_max_updates > 0 && net.updates().size() <= cfg.oracle_max_updates) {
      OracleBudget budget;
      budget.max_updates = cfg.oracle_max_updates;
      auto result = min_rounds(net, budget);
      if (result.status == OracleStatus::kOptimal) {
        rec.feasible_by_oracle = true;
        rec.rounds_oracle = static_cast<int>(result.sequence->round_count());
      } else if (result.status == OracleStatus::kInfeasible) {
        rec.feasible_by_oracle = false;
      }
    }
    if (cfg.include_weighting_estimator) rec.rounds_weighting = estimate_rounds_weighting(net);
    if (!rec.feasible) rec.repairable = repairable_by_one_edge(net);
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return true;
}

}  // namespace

SurveyResult run_survey(const std::vector<BaseGraph>& graphs, const SurveyConfig& cfg) {
  std::vector<std::vector<NodePath>> path_store;
  struct StItem {
    std::size_t graph;
    int s, t;
  };
  std::vector<StItem> st;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const BaseGraph& g = graphs[gi];
    for (int s = 0; s < static_cast<int>(g.nodes.size()); ++s) {
      for (int t = 0; t < static_cast<int>(g.nodes.size()); ++t) {
        if (s == t) continue;
        if (cfg.vertex_pair_filter) {
          const auto& f = *cfg.vertex_pair_filter;
          if (std::find(f.begin(), f.end(), std::pair{g.nodes[s], g.nodes[t]}) == f.end()) continue;
        }
        st.push_back({gi, s, t});
      }
    }
  }
  path_store.reserve(st.size());
  std::vector<WorkItem> items;
  for (const auto& [gi, s, t] : st) {
    if (items.size() >= cfg.max_instances) break;
    path_store.push_back(enumerate_paths(graphs[gi], s, t, cfg.max_paths_per_st, cfg.seed));
    const auto& paths = path_store.back();
    const std::size_t k = paths.size();
    for (std::size_t a = 0; a < k && items.size() < cfg.max_instances; ++a) {
      for (std::size_t b = 0; b < k && items.size() < cfg.max_instances; ++b) {
        if (a == b) continue;
        for (std::size_t c = 0; c < k && items.size() < cfg.max_instances; ++c) {
          for (std::size_t d = 0; d < k && items.size() < cfg.max_instances; ++d) {
            if (c == d) continue;
            items.push_back({gi, s, t, &paths, a, b, c, d});
          }
        }
      }
    }
  }

  std::vector<SurveyRecord> records(items.size());
  std::vector<char> kept(items.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      kept[i] = survey_one(graphs[items[i].graph], items[i], cfg, records[i]);
    }
  };
  unsigned jobs = cfg.parallelism == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                       : cfg.parallelism;
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(1, items.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  SurveyResult out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!kept[i]) {
      ++out.dismissed_not_dag;
      continue;
    }
    SurveyRecord& r = records[i];
    if (!r.error.empty()) {
      ++out.errors;
    } else {
      if (r.rounds_optimal) ++out.histogram_optimal[*r.rounds_optimal];
      if (r.rounds_feasible) ++out.histogram_feasible[*r.rounds_feasible];
      if (!r.feasible) ++out.infeasible;
      if (r.repairable) ++out.repairable;
      if (r.rounds_weighting != r.rounds_optimal) ++out.estimator_mismatches;
      if (!r.verdicts_agree()) ++out.verdict_disagreements;
    }
    out.records.push_back(std::move(r));
  }
  return out;
}

namespace {

std::string field(const std::optional<int>& v) { return v ? std::to_string(*v) : ""; }

// Quotes a CSV field when it contains a separator, quote or newline.
std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string survey_csv(const SurveyResult& result) {
  std::string out =
      "graph,s,t,old1,new1,old2,new2,feasible,rounds_feasible,rounds_optimal,"
      "rounds_weighting\n";
  for (const auto& r : result.records) {
    out += csv_text(r.graph) + "," + csv_text(r.s) + "," + csv_text(r.t) + "," +
           std::to_string(r.old1) + "," + std::to_string(r.new1) + "," +
           std::to_string(r.old2) + "," + std::to_string(r.new2) + ",";
    out += r.error.empty() ? (r.feasible ? "true" : "false") : "error";
    out += "," + field(r.rounds_feasible) + "," + field(r.rounds_optimal) + "," +
           field(r.rounds_weighting) + "\n";
  }
  return out;
}

std::string survey_histogram(const SurveyResult& result) {
  std::set<int> rounds;
  for (auto [r, n] : result.histogram_optimal) rounds.insert(r);
  for (auto [r, n] : result.histogram_feasible) rounds.insert(r);
  std::string out = "rounds,optimal,feasible\n";
  auto count = [](const std::map<int, std::size_t>& h, int r) {
    auto it = h.find(r);
    return it == h.end() ? std::size_t{0} : it->second;
  };
  for (int r : rounds) {
    out += std::to_string(r) + "," + std::to_string(count(result.histogram_optimal, r)) +
           "," + std::to_string(count(result.histogram_feasible, r)) + "\n";
  }
  return out;
}

std::string survey_summary(const SurveyResult& result) {
  std::ostringstream out;
  out << "instances " << result.records.size() << "\n"
      << "infeasible " << result.infeasible << "\n"
      << "repairable by one edge " << result.repairable << "\n"
      << "dismissed (pair union not a DAG) " << result.dismissed_not_dag << "\n"
      << "errors " << result.errors << "\n"
      << "estimator mismatches " << result.estimator_mismatches << "\n"
      << "verdict disagreements " << result.verdict_disagreements << "\n";
  return out.str();
}

UpdateFlowNetwork chain_instance(std::size_t segments) {
  if (segments == 0) throw Error(ErrorCode::kPrecondition, "need at least one segment");
  InstanceDocument doc;
  auto z = [](std::size_t j) { return "z" + std::to_string(j); };
  doc.vertices.reserve(4 * segments + 1);
  doc.edges.reserve(6 * segments);
  InstanceDocument::PairEntry first{"1", {z(0)}, {z(0)}, 1};
  InstanceDocument::PairEntry second{"2", {z(0)}, {z(0)}, 1};
  doc.vertices.push_back(z(0));
  for (std::size_t j = 0; j < segments; ++j) {
    const std::string a = "a" + std::to_string(j);
    const std::string b = "b" + std::to_string(j);
    const std::string c = "c" + std::to_string(j);
    const std::string next = z(j + 1);
    for (const auto& v : {a, b, c, next}) doc.vertices.push_back(v);
    for (const auto& v : {a, b, c}) {
      doc.edges.push_back({z(j), v, 1});
      doc.edges.push_back({v, next, 1});
    }
    // The mover goes a -> b, the other pair b -> c.
    auto& mover = j % 2 == 0 ? first : second;
    auto& other = j % 2 == 0 ? second : first;
    mover.old_path.insert(mover.old_path.end(), {a, next});
    mover.new_path.insert(mover.new_path.end(), {b, next});
    other.old_path.insert(other.old_path.end(), {b, next});
    other.new_path.insert(other.new_path.end(), {c, next});
  }
  doc.source = z(0);
  doc.terminal = z(segments);
  doc.pairs = {std::move(first), std::move(second)};
  return UpdateFlowNetwork::from_document(doc);
}

}  // namespace reroute
