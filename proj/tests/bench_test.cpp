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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "reroute/bench.hpp"
#include "reroute/document.hpp"
#include "reroute/error.hpp"
#include "reroute/oracle.hpp"
#include "reroute/two_flow.hpp"
#include "reroute/validator.hpp"
#include "test_support.hpp"

namespace reroute {
namespace {

using testing::load_data;

BaseGraph example_graph() {
  return ingest_graphml(read_text_file(testing::data_path("example.graphml")), "example");
}

NodePath nodes_of(const BaseGraph& g, std::initializer_list<const char*> names) {
  NodePath p;
  for (const char* n : names) p.push_back(*g.find_node(n));
  return p;
}

std::map<std::pair<std::string, std::string>, std::int64_t> capacities(
    const UpdateFlowNetwork& net) {
  std::map<std::pair<std::string, std::string>, std::int64_t> out;
  for (const Edge& e : net.edges()) {
    out[{net.vertex_name(e.tail), net.vertex_name(e.head)}] = e.capacity;
  }
  return out;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::kInvariant;
}

std::string graphml(const std::string& body) {
  return "<?xml version=\"1.0\"?><graphml><graph edgedefault=\"undirected\">" + body +
         "</graph></graphml>";
}

TEST(IngestGraphml, Example) {
  auto g = example_graph();
  EXPECT_EQ(g.nodes.size(), 5u);
  EXPECT_EQ(g.edges.size(), 7u);
  EXPECT_TRUE(g.warnings.empty());
  EXPECT_EQ(g.nodes.front(), "s");
}

TEST(IngestGraphml, CollapsesParallelEdgesAndDropsLoops) {
  auto g = ingest_graphml(graphml(
      "<node id=\"a\"/><node id=\"b\"/><edge source=\"a\" target=\"b\"/>"
      "<edge source=\"b\" target=\"a\"/><edge source=\"a\" target=\"a\"/>"));
  EXPECT_EQ(g.edges.size(), 1u);
  ASSERT_EQ(g.warnings.size(), 2u);
  EXPECT_NE(g.warnings[0].find("parallel"), std::string::npos);
  EXPECT_NE(g.warnings[1].find("self-loop"), std::string::npos);
}

TEST(IngestGraphml, Errors) {
  EXPECT_EQ(code_of([] { ingest_graphml("<graphml><graph>"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { ingest_graphml(graphml("")); }), ErrorCode::kEmptyGraph);
  EXPECT_EQ(code_of([] {
              ingest_graphml(graphml("<node id=\"a\"/><edge source=\"a\" target=\"z\"/>"));
            }),
            ErrorCode::kParse);
}

TEST(AllocateCapacities, ExamplePathsMinimalRule) {
  auto g = example_graph();
  auto net = allocate_capacities(g, {nodes_of(g, {"s", "u", "v", "t"}), nodes_of(g, {"s", "w", "t"})},
                                 {nodes_of(g, {"s", "w", "t"}), nodes_of(g, {"s", "u", "w", "v", "t"})});
  // Neither the two old paths nor the two new paths share an edge.
  for (auto [edge, cap] : capacities(net)) EXPECT_EQ(cap, 1) << edge.first << edge.second;
  EXPECT_EQ(net.edges().size(), 7u);
  EXPECT_TRUE(build_dependency_graph(net).has_cycle());
}

TEST(AllocateCapacities, ExamplePathsAnyOverlapRule) {
  auto g = example_graph();
  auto net = allocate_capacities(g, {nodes_of(g, {"s", "u", "v", "t"}), nodes_of(g, {"s", "w", "t"})},
                                 {nodes_of(g, {"s", "w", "t"}), nodes_of(g, {"s", "u", "w", "v", "t"})},
                                 CapacityRule::kAnyOverlap);
  auto caps = capacities(net);
  std::map<std::pair<std::string, std::string>, std::int64_t> want{
      {{"s", "u"}, 2}, {{"s", "w"}, 2}, {{"w", "t"}, 2}, {{"v", "t"}, 2},
      {{"u", "v"}, 1}, {{"u", "w"}, 1}, {{"w", "v"}, 1}};
  EXPECT_EQ(caps, want);
}

TEST(AllocateCapacities, SharedAndDisjointEdges) {
  auto g = example_graph();
  auto shared = allocate_capacities(
      g, {nodes_of(g, {"s", "u", "v", "t"}), nodes_of(g, {"s", "w", "t"})},
      {nodes_of(g, {"s", "u", "w", "t"}), nodes_of(g, {"s", "w", "v", "t"})});
  auto caps = capacities(shared);
  // (s,u) is on both old paths, (s,w) on both new paths.
  EXPECT_EQ((caps[{"s", "u"}]), 2);
  EXPECT_EQ((caps[{"s", "w"}]), 2);
  for (auto [edge, cap] : caps) {
    if (edge.first != "s") EXPECT_EQ(cap, 1);
  }
  auto disjoint = allocate_capacities(
      g, {nodes_of(g, {"s", "u", "v", "t"}), nodes_of(g, {"s", "u", "w", "t"})},
      {nodes_of(g, {"s", "w", "t"}), nodes_of(g, {"s", "w", "v", "t"})});
  for (auto [edge, cap] : capacities(disjoint)) EXPECT_EQ(cap, 1);
}

TEST(AllocateCapacities, AntiParallelUseGivesTwoEdges) {
  auto g = example_graph();
  auto net = allocate_capacities(
      g, {nodes_of(g, {"s", "u", "w", "t"}), nodes_of(g, {"s", "w", "u", "v", "t"})},
      {nodes_of(g, {"s", "w", "t"}), nodes_of(g, {"s", "u", "v", "t"})});
  EXPECT_TRUE(net.find_edge(*net.find_vertex("u"), *net.find_vertex("w")));
  EXPECT_TRUE(net.find_edge(*net.find_vertex("w"), *net.find_vertex("u")));
}

TEST(AllocateCapacities, PathNotInGraph) {
  auto g = example_graph();
  auto bad = nodes_of(g, {"s", "t"});
  auto ok = nodes_of(g, {"s", "w", "t"});
  EXPECT_EQ(code_of([&] { allocate_capacities(g, {bad, ok}, {ok, ok}); }),
            ErrorCode::kPathNotInGraph);
  auto looping = nodes_of(g, {"s", "u", "s", "w", "t"});
  EXPECT_EQ(code_of([&] { allocate_capacities(g, {ok, looping}, {ok, ok}); }),
            ErrorCode::kPathNotInGraph);
  auto elsewhere = nodes_of(g, {"s", "w", "v"});
  EXPECT_EQ(code_of([&] { allocate_capacities(g, {ok, elsewhere}, {ok, ok}); }),
            ErrorCode::kPathNotInGraph);
}

// All simple s-t paths by trying every ordering of every node subset.
std::vector<NodePath> brute_force_paths(const BaseGraph& g, int s, int t) {
  std::set<std::pair<int, int>> links(g.edges.begin(), g.edges.end());
  std::vector<int> inner;
  for (int v = 0; v < static_cast<int>(g.nodes.size()); ++v) {
    if (v != s && v != t) inner.push_back(v);
  }
  std::set<NodePath> out;
  for (unsigned mask = 0; mask < (1u << inner.size()); ++mask) {
    std::vector<int> chosen;
    for (std::size_t i = 0; i < inner.size(); ++i) {
      if (mask >> i & 1) chosen.push_back(inner[i]);
    }
    do {
      NodePath p{s};
      p.insert(p.end(), chosen.begin(), chosen.end());
      p.push_back(t);
      bool ok = true;
      for (std::size_t i = 1; i < p.size() && ok; ++i) {
        ok = links.count({std::min(p[i - 1], p[i]), std::max(p[i - 1], p[i])}) > 0;
      }
      if (ok) out.insert(p);
    } while (std::next_permutation(chosen.begin(), chosen.end()));
  }
  return {out.begin(), out.end()};
}

TEST(EnumeratePaths, MatchesBruteForce) {
  auto g = example_graph();
  for (int s = 0; s < 5; ++s) {
    for (int t = 0; t < 5; ++t) {
      if (s == t) continue;
      auto want = brute_force_paths(g, s, t);
      EXPECT_EQ(enumerate_paths(g, s, t, 1000), want);
      EXPECT_EQ(enumerate_paths(g, s, t, 1000, 99), want);
    }
  }
  EXPECT_EQ(brute_force_paths(g, *g.find_node("s"), *g.find_node("t")).size(), 7u);
}

TEST(EnumeratePaths, TruncationIsDeterministic) {
  auto g = example_graph();
  const int s = *g.find_node("s"), t = *g.find_node("t");
  auto all = brute_force_paths(g, s, t);
  for (std::uint64_t seed : {0, 1, 2, 3}) {
    auto some = enumerate_paths(g, s, t, 3, seed);
    EXPECT_EQ(some.size(), 3u);
    EXPECT_EQ(some, enumerate_paths(g, s, t, 3, seed));
    for (const auto& p : some) EXPECT_TRUE(std::binary_search(all.begin(), all.end(), p));
  }
  EXPECT_TRUE(enumerate_paths(g, s, t, 0).empty());
}

TEST(EstimateRoundsWeighting, Example) {
  auto net = load_data("example.json");
  EXPECT_EQ(estimate_rounds_weighting(net), 6);
  EXPECT_EQ(schedule_optimal(net)->round_count(), 4u);
}

TEST(EstimateRoundsWeighting, CyclicAndWrongPairCount) {
  EXPECT_EQ(estimate_rounds_weighting(load_data("two_cycle.json")), std::nullopt);
  auto one = load_instance(R"({"vertices":["s","a","t"],
    "edges":[{"tail":"s","head":"a","capacity":1},{"tail":"a","head":"t","capacity":1},
             {"tail":"s","head":"t","capacity":1}],
    "source":"s","terminal":"t",
    "pairs":[{"id":"A","old_path":["s","t"],"new_path":["s","a","t"],"demand":1}]})");
  EXPECT_EQ(code_of([&] { estimate_rounds_weighting(one); }), ErrorCode::kWrongPairCount);
}

TEST(EstimateRoundsWeighting, SingleBlockOverestimates) {
  // One block per pair, one old edge and two new ones, no dependencies.
  auto net = load_instance(R"({"vertices":["s","a","b","t"],
    "edges":[{"tail":"s","head":"t","capacity":2},{"tail":"s","head":"a","capacity":1},
             {"tail":"a","head":"t","capacity":1},{"tail":"s","head":"b","capacity":1},
             {"tail":"b","head":"t","capacity":1}],
    "source":"s","terminal":"t",
    "pairs":[{"id":"A","old_path":["s","t"],"new_path":["s","a","t"],"demand":1},
             {"id":"B","old_path":["s","t"],"new_path":["s","b","t"],"demand":1}]})");
  EXPECT_TRUE(build_dependency_graph(net).edges.empty());
  EXPECT_EQ(estimate_rounds_weighting(net), 4);
  EXPECT_EQ(schedule_optimal(net)->round_count(), 2u);
}

TEST(EstimateRoundsWeighting, ChainTerms) {
  // Closed form on the synthetic chain: each segment is a two-block chain
  // whose earliest block has two new edges and latest block two old edges.
  auto net = chain_instance(3);
  EXPECT_EQ(estimate_rounds_weighting(net), 5);
}

TEST(RepairableByOneEdge, SingleEdgeDependency) {
  // R needs (s,b) from B and B needs (s,a) from R.
  auto net = load_instance(R"({"vertices":["s","a","b","c","t"],
    "edges":[{"tail":"s","head":"a","capacity":1},{"tail":"a","head":"t","capacity":1},
             {"tail":"s","head":"b","capacity":1},{"tail":"b","head":"t","capacity":1},
             {"tail":"b","head":"c","capacity":1},{"tail":"a","head":"c","capacity":1},
             {"tail":"c","head":"t","capacity":1}],
    "source":"s","terminal":"t",
    "pairs":[{"id":"R","old_path":["s","a","t"],"new_path":["s","b","t"],"demand":1},
             {"id":"B","old_path":["s","b","c","t"],"new_path":["s","a","c","t"],"demand":1}]})");
  ASSERT_TRUE(build_dependency_graph(net).has_cycle());
  EXPECT_TRUE(repairable_by_one_edge(net));
  // The example paths under the minimal allocation form two cycles through R's
  // block, over (s,w)/(s,u) and (w,t)/(v,t).
  auto g = example_graph();
  auto example = allocate_capacities(g, {nodes_of(g, {"s", "u", "v", "t"}), nodes_of(g, {"s", "w", "t"})},
                                  {nodes_of(g, {"s", "w", "t"}), nodes_of(g, {"s", "u", "w", "v", "t"})});
  EXPECT_FALSE(repairable_by_one_edge(example));
}

TEST(RepairableByOneEdge, TwoCycleNeedsMoreThanOneEdge) {
  // Each direction of the cycle runs over three unit edges.
  EXPECT_FALSE(repairable_by_one_edge(load_data("two_cycle.json")));
}

TEST(ChainInstance, ShapeAndSchedule) {
  for (std::size_t k : {1, 2, 5}) {
    auto net = chain_instance(k);
    EXPECT_EQ(net.vertex_count(), 4 * k + 1);
    auto d = build_dependency_graph(net);
    EXPECT_EQ(d.nodes.size(), 2 * k);
    EXPECT_EQ(d.edges.size(), k);
    auto seq = schedule_optimal(net);
    ASSERT_TRUE(seq);
    auto report = validate_sequence(net, *seq);
    EXPECT_TRUE(report.valid && report.complete) << report.describe(net);
  }
  auto net = chain_instance(2);
  auto best = min_rounds(net);
  ASSERT_EQ(best.status, OracleStatus::kOptimal);
  EXPECT_EQ(schedule_optimal(net)->round_count(), best.sequence->round_count());
  EXPECT_EQ(code_of([] { chain_instance(0); }), ErrorCode::kPrecondition);
}

TEST(RunSurvey, ExampleGraphProperties) {
  SurveyConfig cfg;
  cfg.parallelism = 0;
  auto result = run_survey({example_graph()}, cfg);
  ASSERT_FALSE(result.records.empty());
  EXPECT_EQ(result.errors, 0u);
  EXPECT_EQ(result.verdict_disagreements, 0u);
  for (const auto& r : result.records) {
    EXPECT_TRUE(r.verdicts_agree());
    EXPECT_EQ(r.feasible, r.rounds_optimal.has_value());
    if (r.feasible) {
      EXPECT_LE(*r.rounds_optimal, *r.rounds_feasible);
      ASSERT_TRUE(r.rounds_oracle);
      EXPECT_EQ(*r.rounds_oracle, *r.rounds_optimal);
    }
  }
  EXPECT_GT(result.histogram_optimal.count(4), 0u);
  EXPECT_GE(result.histogram_optimal.begin()->first, 1);
  EXPECT_GT(result.infeasible, 0u);
  EXPECT_LE(result.repairable, result.infeasible);
}

TEST(RunSurvey, ExamplePathsOccurInTheSurvey) {
  // With its own capacities the example takes four rounds; the survey's
  // minimal allocation makes the same paths cyclic, but some other path
  // choice on the same graph takes four.
  auto g = example_graph();
  SurveyConfig cfg;
  cfg.vertex_pair_filter = {{{"s", "t"}}};
  auto result = run_survey({g}, cfg);
  auto paths = enumerate_paths(g, 0, 4, cfg.max_paths_per_st);
  auto index = [&](NodePath p) {
    return static_cast<std::size_t>(std::find(paths.begin(), paths.end(), p) - paths.begin());
  };
  const std::size_t o1 = index(nodes_of(g, {"s", "u", "v", "t"}));
  const std::size_t n1 = index(nodes_of(g, {"s", "w", "t"}));
  const std::size_t n2 = index(nodes_of(g, {"s", "u", "w", "v", "t"}));
  auto it = std::find_if(result.records.begin(), result.records.end(), [&](const auto& r) {
    return r.old1 == o1 && r.new1 == n1 && r.old2 == n1 && r.new2 == n2;
  });
  ASSERT_NE(it, result.records.end());
  EXPECT_FALSE(it->feasible);
  EXPECT_GT(result.histogram_optimal.count(4), 0u);
  for (const auto& r : result.records) {
    EXPECT_EQ(r.s, "s");
    EXPECT_EQ(r.t, "t");
  }
}

TEST(RunSurvey, IndependentOfParallelism) {
  auto g = example_graph();
  SurveyConfig one, many;
  one.parallelism = 1;
  many.parallelism = 4;
  auto a = run_survey({g}, one);
  auto b = run_survey({g}, many);
  EXPECT_EQ(survey_csv(a), survey_csv(b));
  EXPECT_EQ(survey_histogram(a), survey_histogram(b));
  EXPECT_EQ(survey_summary(a), survey_summary(b));
}

TEST(RunSurvey, InstanceLimit) {
  SurveyConfig cfg;
  cfg.max_instances = 0;
  auto empty = run_survey({example_graph()}, cfg);
  EXPECT_TRUE(empty.records.empty());
  EXPECT_TRUE(empty.histogram_optimal.empty());
  EXPECT_EQ(survey_histogram(empty), "rounds,optimal,feasible\n");
  cfg.max_instances = 10;
  auto few = run_survey({example_graph()}, cfg);
  EXPECT_EQ(few.records.size() + few.dismissed_not_dag, 10u);
}

TEST(SurveyCsv, Header) {
  SurveyConfig cfg;
  cfg.max_instances = 40;
  auto csv = survey_csv(run_survey({example_graph()}, cfg));
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "graph,s,t,old1,new1,old2,new2,feasible,rounds_feasible,rounds_optimal,"
            "rounds_weighting");
  EXPECT_NE(csv.find("\nexample,s,u,"), std::string::npos);
}

}  // namespace
}  // namespace reroute
