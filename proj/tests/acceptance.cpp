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

// Prints one PASS/FAIL line per acceptance criterion; exits non-zero if any
// criterion fails. Optional arguments: GraphML files or directories added
// to the survey corpus of criterion 8.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "reroute/bench.hpp"
#include "reroute/document.hpp"
#include "reroute/error.hpp"
#include "reroute/mip.hpp"
#include "reroute/oracle.hpp"
#include "reroute/sat_reduction.hpp"
#include "reroute/two_flow.hpp"
#include "reroute/validator.hpp"
#include "test_support.hpp"

namespace reroute {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

std::string seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", s);
  return buf;
}

bool report(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  if (o.pass && elapsed > limit_s) {
    o.pass = false;
    o.detail = "took " + seconds(elapsed) + ", limit " + seconds(limit_s);
  }
  std::printf("%s criterion %d %s: %s [%s]\n", o.pass ? "PASS" : "FAIL", id, name,
              o.detail.c_str(), seconds(elapsed).c_str());
  std::fflush(stdout);
  return o.pass;
}

UpdateSequence example_sequence(const UpdateFlowNetwork& net, bool sequential) {
  std::vector<std::vector<std::pair<std::string, std::string>>> rounds{
      {{"u", "B"}},
      {{"s", "B"}, {"w", "R"}},
      {{"s", "R"}, {"v", "B"}},
      {{"u", "R"}, {"v", "R"}, {"w", "B"}}};
  if (sequential) {
    std::vector<std::vector<std::pair<std::string, std::string>>> split;
    for (const auto& r : rounds) {
      for (const auto& u : r) split.push_back({u});
    }
    rounds = split;
  }
  return testing::seq_of(net, rounds);
}

Outcome example_optimal() {
  Outcome o;
  auto net = testing::load_data("example.json");
  auto seq = schedule_optimal(net);
  o.require(seq.has_value(), "no schedule");
  o.require(seq->round_count() == 4, "schedule has " + std::to_string(seq->round_count()) + " rounds");
  auto v = validate_sequence(net, *seq);
  o.require(v.valid && v.complete, "schedule does not validate: " + v.describe(net));
  auto best = min_rounds(net);
  o.require(best.status == OracleStatus::kOptimal && best.sequence->round_count() == 4,
            "oracle optimum is not 4");
  o.require(enumerate_valid_sequences(net, 3, 1).empty(), "a 3-round sequence exists");
  o.detail = "4 rounds, validated; oracle optimum 4, no 3-round sequence";
  return o;
}

Outcome example_prefix() {
  Outcome o;
  auto net = testing::load_data("example.json");
  const PairIndex red = *net.find_pair("R");
  for (auto rounds : std::vector<std::vector<std::vector<std::pair<std::string, std::string>>>>{
           {{{"u", "B"}}, {{"s", "B"}}, {{"s", "R"}}},
           {{{"u", "B"}}, {{"s", "B"}, {"s", "R"}}}}) {
    auto v = validate_sequence(net, testing::seq_of(net, rounds));
    o.require(!v.valid, "prefix accepted");
    o.require(v.reason == FailureReason::kNoTransientFlow && v.failing_pair == red,
              "wrong reason: " + v.describe(net));
  }
  o.detail = "rejected: no-transient-flow(R), sequential and batched";
  return o;
}

// Lowers every capacity to the larger of its initial and final load.
InstanceDocument tighten(InstanceDocument doc) {
  std::map<std::pair<std::string, std::string>, std::int64_t> before, after;
  for (const auto& p : doc.pairs) {
    for (std::size_t i = 0; i + 1 < p.old_path.size(); ++i) {
      before[{p.old_path[i], p.old_path[i + 1]}] += p.demand;
    }
    for (std::size_t i = 0; i + 1 < p.new_path.size(); ++i) {
      after[{p.new_path[i], p.new_path[i + 1]}] += p.demand;
    }
  }
  for (auto& e : doc.edges) {
    const std::pair<std::string, std::string> key{e.tail, e.head};
    e.capacity = std::max<std::int64_t>({1, before[key], after[key]});
  }
  return doc;
}

Outcome oracle_sweep() {
  Outcome o;
  std::mt19937_64 rng(2024);
  int instances = 0, feasible = 0, trials = 0;
  while (instances < 5000 && trials < 200000) {
    ++trials;
    const int vertices = 4 + static_cast<int>(rng() % 5);
    auto doc = testing::random_dag_instance(rng, vertices, 2, 1 + static_cast<int>(rng() % 2));
    if (trials % 2 == 0) doc = tighten(std::move(doc));
    auto net = UpdateFlowNetwork::from_document(doc);
    if (net.updates().size() > 10 || net.updates().empty()) continue;
    ++instances;
    auto ours = schedule_optimal(net);
    auto best = min_rounds(net);
    o.require(best.status != OracleStatus::kBudgetExhausted, "oracle budget exhausted");
    const bool oracle_feasible = best.status == OracleStatus::kOptimal;
    o.require(ours.has_value() == oracle_feasible,
              "verdict mismatch on instance " + std::to_string(instances) + ":\n" +
                  serialize_instance(net));
    if (ours && oracle_feasible) {
      ++feasible;
      o.require(ours->round_count() == best.sequence->round_count(),
                "round mismatch on instance " + std::to_string(instances) + ":\n" +
                    serialize_instance(net));
    }
  }
  o.require(instances >= 1000, "only " + std::to_string(instances) + " instances");
  if (o.pass) {
    o.detail = std::to_string(instances) + " instances (" + std::to_string(feasible) +
               " feasible), verdicts and round counts all agree";
  }
  return o;
}

Outcome block_invariants() {
  Outcome o;
  std::mt19937_64 rng(77);
  int instances = 0;
  std::size_t pairs_checked = 0, sequences = 0;
  for (int trial = 0; trial < 5000 && instances < 20; ++trial) {
    auto net = UpdateFlowNetwork::from_document(
        testing::random_dag_instance(rng, 5 + trial % 3, 2));
    if (net.updates().size() > 9 || net.updates().size() < 4) continue;
    auto ours = schedule_optimal(net);
    if (!ours) continue;
    ++instances;
    std::vector<std::pair<PairIndex, Block>> blocks;
    for (PairIndex p = 0; p < 2; ++p) {
      for (const Block& b : decompose_blocks(net, p)) blocks.push_back({p, b});
    }
    auto all = enumerate_valid_sequences(net, net.updates().size(), 500);
    o.require(!all.empty(), "no valid sequence enumerated");
    sequences += all.size();
    for (const auto& seq : all) {
      auto rounds = round_index(net, seq);
      for (const auto& [p, b] : blocks) {
        ++pairs_checked;
        auto r = [&](VertexId v) { return rounds[*net.update_index({v, p})]; };
        for (VertexId v : prep_vertices(net, b)) {
          o.require(r(v) < r(b.start_vertex), "preparation not before the start flip");
        }
        for (VertexId v : cleanup_vertices(net, b)) {
          o.require(r(v) > r(b.start_vertex), "cleanup not after the start flip");
        }
      }
    }
    auto rounds = round_index(net, *ours);
    for (const auto& [p, b] : blocks) {
      std::size_t lo = rounds[*net.update_index({b.start_vertex, p})], hi = lo;
      for (const auto& list : {prep_vertices(net, b), cleanup_vertices(net, b)}) {
        for (VertexId v : list) {
          std::size_t x = rounds[*net.update_index({v, p})];
          lo = std::min(lo, x);
          hi = std::max(hi, x);
        }
      }
      o.require(hi - lo <= 2, "block spread over more than 3 rounds");
    }
  }
  o.require(instances == 20, "only " + std::to_string(instances) + " instances");
  if (o.pass) {
    o.detail = std::to_string(instances) + " instances, " + std::to_string(sequences) +
               " sequences, " + std::to_string(pairs_checked) +
               " (sequence, block) pairs ordered; every block within 3 rounds";
  }
  return o;
}

// Both pairs swap between two detours in each of `segments` consecutive
// segments; every swap is a two-block dependency cycle.
UpdateFlowNetwork swap_chain(std::mt19937_64& rng, int segments) {
  InstanceDocument doc;
  doc.source = "z0";
  doc.vertices.push_back("z0");
  InstanceDocument::PairEntry red{"R", {"z0"}, {"z0"}, 1};
  InstanceDocument::PairEntry blue{"B", {"z0"}, {"z0"}, 1};
  for (int j = 0; j < segments; ++j) {
    const std::string z = "z" + std::to_string(j);
    const std::string next = "z" + std::to_string(j + 1);
    std::vector<std::string> detour[2];
    for (int side = 0; side < 2; ++side) {
      const int len = 1 + static_cast<int>(rng() % 2);
      std::string prev = z;
      for (int k = 0; k < len; ++k) {
        std::string v = std::string(side ? "b" : "a") + std::to_string(j) + "_" + std::to_string(k);
        doc.vertices.push_back(v);
        doc.edges.push_back({prev, v, 1});
        detour[side].push_back(v);
        prev = v;
      }
      doc.edges.push_back({prev, next, 1});
    }
    doc.vertices.push_back(next);
    auto append = [&](std::vector<std::string>& path, const std::vector<std::string>& via) {
      path.insert(path.end(), via.begin(), via.end());
      path.push_back(next);
    };
    append(red.old_path, detour[0]);
    append(red.new_path, detour[1]);
    append(blue.old_path, detour[1]);
    append(blue.new_path, detour[0]);
  }
  doc.terminal = doc.vertices.back();
  doc.pairs = {red, blue};
  return UpdateFlowNetwork::from_document(doc);
}

Outcome cycle_infeasible() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::vector<UpdateFlowNetwork> nets;
  for (int i = 0; i < 25; ++i) nets.push_back(swap_chain(rng, 1 + i % 3));
  for (int trial = 0; trial < 100000 && nets.size() < 50; ++trial) {
    auto net = UpdateFlowNetwork::from_document(testing::random_dag_instance(rng, 6 + trial % 3, 2));
    if (net.updates().size() <= 14 && build_dependency_graph(net).has_cycle()) {
      nets.push_back(std::move(net));
    }
  }
  o.require(nets.size() == 50, "only " + std::to_string(nets.size()) + " cyclic instances");
  OracleBudget budget;
  budget.max_updates = 64;
  for (const auto& net : nets) {
    o.require(build_dependency_graph(net).has_cycle(), "dependency graph is acyclic");
    o.require(!schedule_optimal(net) && !schedule_feasible(net) && !schedule_batched(net),
              "a scheduler returned a sequence");
    o.require(find_any(net, budget).status == OracleStatus::kInfeasible,
              "oracle did not prove infeasibility:\n" + serialize_instance(net));
  }
  if (o.pass) {
    o.detail = "50 cyclic instances (25 swap chains, 25 random); all schedulers refuse, "
               "oracle proves infeasible";
  }
  return o;
}

Outcome reduction() {
  Outcome o;
  OracleBudget budget;
  budget.max_updates = 64;
  budget.time_limit = std::chrono::milliseconds(120'000);
  int formulas = 0, sat_formulas = 0, unsat_small = 0;
  for (int n = 1; n <= 2; ++n) {
    for (int m = 1; m <= 2; ++m) {
      for (const auto& f : enumerate_formulas(n, m)) {
        ++formulas;
        auto inst = build_reduction(f);
        auto sat = satisfying_assignments(f);
        for (const auto& a : sat) {
          auto v = validate_sequence(inst.network, constructive_schedule(f, inst, a));
          o.require(v.valid && v.complete, "constructive schedule invalid for " + to_dimacs(f));
        }
        auto found = find_any(inst.network, budget);
        o.require(found.status != OracleStatus::kBudgetExhausted, "budget exhausted on " + to_dimacs(f));
        o.require((found.status == OracleStatus::kFeasible) == !sat.empty(),
                  "feasibility differs from satisfiability on " + to_dimacs(f));
        if (found.sequence) {
          o.require(satisfies(f, extract_assignment(f, inst, *found.sequence)),
                    "extracted assignment fails " + to_dimacs(f));
        }
        if (sat.empty()) {
          o.require(n == 1, "unsatisfiable formula with two variables");
          ++unsat_small;
        } else {
          ++sat_formulas;
        }
      }
    }
  }
  o.require(formulas >= 20, "only " + std::to_string(formulas) + " formulas");
  o.require(unsat_small > 0, "no unsatisfiable formula");
  if (o.pass) {
    o.detail = std::to_string(formulas) + " formulas (" + std::to_string(sat_formulas) +
               " satisfiable, " + std::to_string(unsat_small) +
               " unsatisfiable proven infeasible); extracted assignments satisfy";
  }
  return o;
}

Outcome mip() {
  Outcome o;
  auto net = testing::load_data("example.json");
  auto model = build_mip(net);
  o.require(model.horizon == 8, "horizon " + std::to_string(model.horizon));
  o.require(model.count(VarRole::kX) == 80, "x count " + std::to_string(model.count(VarRole::kX)));
  for (bool sequential : {false, true}) {
    auto seq = example_sequence(net, sequential);
    auto v = validate_sequence(net, seq);
    o.require(v.valid && v.complete, "sequence does not validate");
    auto check = cross_check_mip(net, model, seq);
    o.require(check.satisfied, "cross-check fails at " + check.first_violation);
    o.require(check.objective == (sequential ? 8.0 : 4.0), "wrong R");
  }
  if (o.pass) o.detail = "horizon 8, 80 x variables; 4- and 8-round sequences satisfy with R = 4, 8";
  return o;
}

Outcome survey(const std::vector<std::string>& corpus) {
  Outcome o;
  auto bundled = ingest_graphml(read_text_file(testing::data_path("example.graphml")), "example");
  SurveyConfig cfg;
  cfg.parallelism = 0;
  auto check = [&](const SurveyResult& result, const std::string& name) {
    o.require(result.errors == 0, name + ": record errors");
    for (const auto& r : result.records) {
      o.require(r.verdicts_agree(), name + ": verdicts disagree");
      if (r.rounds_optimal && r.rounds_feasible) {
        o.require(*r.rounds_optimal <= *r.rounds_feasible, name + ": optimal above feasible");
      }
      if (r.rounds_optimal && r.rounds_oracle) {
        o.require(*r.rounds_optimal == *r.rounds_oracle, name + ": oracle disagrees on rounds");
      }
    }
    o.require(!survey_histogram(result).empty(), name + ": no histogram");
  };
  auto result = run_survey({bundled}, cfg);
  check(result, "bundled");
  o.require(result.histogram_optimal.count(4) > 0, "bundled graph has no 4-round instance");
  std::ostringstream detail;
  detail << result.records.size() << " instances on the bundled graph, optimal rounds";
  for (auto [r, n] : result.histogram_optimal) detail << " " << r << ":" << n;
  if (!corpus.empty()) {
    std::vector<BaseGraph> graphs;
    for (const auto& in : corpus) {
      std::vector<std::filesystem::path> files;
      if (std::filesystem::is_directory(in)) {
        for (const auto& e : std::filesystem::directory_iterator(in)) {
          if (e.path().extension() == ".graphml") files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
      } else {
        files.emplace_back(in);
      }
      for (const auto& f : files) graphs.push_back(ingest_graphml(read_text_file(f), f.stem().string()));
    }
    auto extra = run_survey(graphs, cfg);
    check(extra, "corpus");
    detail << "; corpus " << extra.records.size() << " instances";
  }
  if (o.pass) o.detail = detail.str();
  return o;
}

Outcome scaling() {
  Outcome o;
  std::vector<double> times;
  std::ostringstream detail;
  const std::size_t sizes[] = {1'000, 10'000, 100'000, 1'000'000};
  for (std::size_t n : sizes) {
    auto net = chain_instance((n - 1) / 4);
    std::vector<double> runs;
    for (int k = 0; k < 5; ++k) {
      auto start = Clock::now();
      auto seq = schedule_optimal(net);
      runs.push_back(std::chrono::duration<double>(Clock::now() - start).count());
      o.require(seq && seq->round_count() == 4, "chain schedule is not 4 rounds");
    }
    std::nth_element(runs.begin(), runs.begin() + 2, runs.end());
    times.push_back(runs[2]);
    detail << (times.size() > 1 ? ", " : "") << "|V|=" << net.vertex_count() << " "
           << runs[2] * 1e3 << " ms";
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double growth = times[i] / times[i - 1];
    const double size_ratio = static_cast<double>(sizes[i]) / static_cast<double>(sizes[i - 1]);
    o.require(growth <= 2 * size_ratio,
              "time grew " + std::to_string(growth) + "x for " + std::to_string(size_ratio) + "x size");
  }
  o.detail = detail.str();
  return o;
}

}  // namespace
}  // namespace reroute

int main(int argc, char** argv) {
  using namespace reroute;
  std::vector<std::string> corpus(argv + 1, argv + argc);
  bool ok = true;
  ok &= report(1, "example-optimal-four-rounds", 1, example_optimal);
  ok &= report(2, "example-invalid-prefix", 1, example_prefix);
  ok &= report(3, "oracle-equivalence-sweep", 300, oracle_sweep);
  ok &= report(4, "block-ordering-and-window", 300, block_invariants);
  ok &= report(5, "cycle-iff-infeasible", 300, cycle_infeasible);
  ok &= report(6, "reduction-biconditional", 600, reduction);
  ok &= report(7, "mip-shape-and-soundness", 1, mip);
  ok &= report(8, "survey-properties", 600, [&] { return survey(corpus); });
  ok &= report(9, "linear-scaling", 120, scaling);
  return ok ? 0 : 1;
}
