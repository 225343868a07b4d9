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

#include "reroute/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reroute/bench.hpp"
#include "reroute/document.hpp"
#include "reroute/error.hpp"
#include "reroute/mip.hpp"
#include "reroute/oracle.hpp"
#include "reroute/sat_reduction.hpp"
#include "reroute/two_flow.hpp"
#include "reroute/validator.hpp"

namespace reroute {

namespace {

namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
    case ErrorCode::kInvariant:
    case ErrorCode::kMalformedSchedule:
    case ErrorCode::kDegenerateFormula:
    case ErrorCode::kPathNotInGraph:
    case ErrorCode::kEmptyGraph:
      return kUsage;
    default:
      return kNegative;
  }
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot write " + path);
  file << text;
}

Assignment parse_witness(const std::string& text, int num_vars) {
  Assignment a(num_vars + 1, false);
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    int lit = 0;
    try {
      std::size_t used = 0;
      lit = std::stoi(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw UsageError("witness: '" + token + "' is not a literal");
    }
    if (lit == 0 || std::abs(lit) > num_vars) {
      throw UsageError("witness: literal " + token + " is out of range");
    }
    a[std::abs(lit)] = lit > 0;
  }
  return a;
}

std::vector<BaseGraph> load_graphs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(in)) {
        if (entry.is_regular_file() && entry.path().extension() == ".graphml") {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.emplace_back(in);
    }
  }
  std::vector<BaseGraph> graphs;
  for (const auto& f : files) {
    try {
      graphs.push_back(ingest_graphml(read_text_file(f), f.stem().string()));
    } catch (const Error& e) {
      throw Error(e.code(), f.string() + ": " + e.what());
    }
  }
  return graphs;
}

struct Options {
  std::string instance;
  std::string schedule;
  std::string output;
  std::string cnf;
  std::string witness;
  std::string check;
  std::vector<std::string> survey_inputs;
  std::string histogram;
  bool feasible = false;
  bool optimal = false;
  bool batched = false;
  bool dependencies = false;
  bool any = false;
  bool no_dominance = false;
  bool no_estimator = false;
  bool any_overlap = false;
  std::size_t subset_cap = kDefaultSubsetCap;
  std::size_t max_updates = OracleBudget{}.max_updates;
  std::size_t max_states = OracleBudget{}.max_states;
  long long time_limit_ms = OracleBudget{}.time_limit.count();
  unsigned jobs = 1;
  SurveyConfig survey;
};

int cmd_validate(const Options& o, std::ostream& out) {
  auto net = load_instance(read_text_file(o.instance));
  auto seq = load_schedule(net, read_text_file(o.schedule));
  auto report = validate_sequence(net, seq, o.subset_cap);
  if (!report.valid) {
    out << report.describe(net) << "\n";
    return kNegative;
  }
  if (!report.complete) {
    out << "valid prefix: " << seq.update_count() << " of " << net.updates().size()
        << " updates in " << seq.round_count() << " rounds\n";
    return kNegative;
  }
  out << "valid: " << seq.round_count() << " rounds\n";
  return kOk;
}

int cmd_schedule(const Options& o, std::ostream& out) {
  if (o.feasible + o.optimal + o.batched > 1) {
    throw UsageError("choose at most one of --feasible, --optimal, --batched");
  }
  auto net = load_instance(read_text_file(o.instance));
  if (o.dependencies) out << format_dependency_graph(net, build_dependency_graph(net));
  std::optional<UpdateSequence> seq;
  if (o.feasible) {
    seq = schedule_feasible(net);
  } else if (o.batched) {
    seq = schedule_batched(net);
  } else {
    seq = schedule_optimal(net);
  }
  if (!seq) {
    out << "impossible to update: the block dependency graph has a cycle\n";
    return kNegative;
  }
  write_output(o.output, serialize_schedule(net, *seq), out);
  out << "rounds: " << seq->round_count() << "\n";
  return kOk;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  auto net = load_instance(read_text_file(o.instance));
  OracleBudget budget;
  budget.max_updates = o.max_updates;
  budget.max_states = o.max_states;
  budget.time_limit = std::chrono::milliseconds(o.time_limit_ms);
  budget.dominance = !o.no_dominance;
  auto result = o.any ? find_any(net, budget) : min_rounds(net, budget);
  out << "status: " << to_string(result.status) << "\n";
  if (result.sequence) out << "rounds: " << result.sequence->round_count() << "\n";
  out << "explored states: " << result.explored_states << "\n"
      << "elapsed ms: " << std::fixed << std::setprecision(3)
      << result.elapsed.count() * 1000 << "\n";
  if (result.sequence) write_output(o.output, serialize_schedule(net, *result.sequence), out);
  const bool found = result.status == OracleStatus::kOptimal ||
                     result.status == OracleStatus::kFeasible;
  return found ? kOk : kNegative;
}

int cmd_reduce(const Options& o, std::ostream& out) {
  auto formula = parse_dimacs(read_text_file(o.cnf));
  auto inst = build_reduction(formula);
  if (o.witness.empty()) {
    write_output(o.output, serialize_instance(inst.network), out);
    return kOk;
  }
  auto a = parse_witness(o.witness, formula.num_vars);
  auto seq = constructive_schedule(formula, inst, a);
  write_output(o.output, serialize_schedule(inst.network, seq), out);
  return kOk;
}

int cmd_mip(const Options& o, std::ostream& out) {
  auto net = load_instance(read_text_file(o.instance));
  auto model = build_mip(net);
  if (!o.check.empty()) {
    auto check = cross_check_mip(net, model, load_schedule(net, read_text_file(o.check)));
    if (!check.satisfied) {
      out << "violated: " << check.first_violation << "\n";
      return kNegative;
    }
    out << "satisfied: R = " << check.objective << "\n";
    return kOk;
  }
  write_output(o.output, emit_lp(net, model), out);
  if (!o.output.empty()) {
    out << "horizon " << model.horizon << ", " << model.variables.size() << " variables, "
        << model.constraints.size() << " constraints\n";
  }
  return kOk;
}

int cmd_survey(const Options& o, std::ostream& out, std::ostream& err) {
  auto graphs = load_graphs(o.survey_inputs);
  for (const auto& g : graphs) {
    for (const auto& w : g.warnings) err << g.id << ": " << w << "\n";
  }
  SurveyConfig cfg = o.survey;
  cfg.parallelism = o.jobs;
  cfg.include_weighting_estimator = !o.no_estimator;
  if (o.any_overlap) cfg.capacity_rule = CapacityRule::kAnyOverlap;
  auto result = run_survey(graphs, cfg);
  write_output(o.output, survey_csv(result), out);
  if (!o.histogram.empty()) write_output(o.histogram, survey_histogram(result), out);
  if (!o.output.empty()) out << survey_histogram(result);
  out << survey_summary(result);
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Consistent rerouting of unsplittable flows: validate, schedule and analyse update sequences"};
  app.name("reroute");
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "Check a schedule against an instance");
  validate->add_option("instance", o.instance, "Instance document")->required();
  validate->add_option("schedule", o.schedule, "Schedule document")->required();
  validate->add_option("--subset-cap", o.subset_cap, "Largest round checked subset by subset");

  auto* schedule = app.add_subcommand("schedule", "Schedule a two-flow instance");
  schedule->add_option("instance", o.instance, "Instance document")->required();
  schedule->add_flag("--optimal", o.optimal, "Fewest rounds (default)");
  schedule->add_flag("--feasible", o.feasible, "One three-round window per batch of blocks");
  schedule->add_flag("--batched", o.batched, "Overlapping windows per batch of blocks");
  schedule->add_flag("--dependencies", o.dependencies, "Print blocks and dependencies first");
  schedule->add_option("-o,--output", o.output, "Write the schedule document here");

  auto* oracle = app.add_subcommand("oracle", "Exhaustive search for small instances");
  oracle->add_option("instance", o.instance, "Instance document")->required();
  oracle->add_option("--max-updates", o.max_updates, "Refuse larger instances");
  oracle->add_option("--max-states", o.max_states, "State budget");
  oracle->add_option("--time-limit-ms", o.time_limit_ms, "Time budget");
  oracle->add_flag("--no-dominance", o.no_dominance, "Search without pruning");
  oracle->add_flag("--any", o.any, "Decide feasibility only");
  oracle->add_option("-o,--output", o.output, "Write the schedule document here");

  auto* reduce = app.add_subcommand("reduce", "Build the six-flow instance of a 3-CNF formula");
  reduce->add_option("cnf", o.cnf, "DIMACS CNF file")->required();
  reduce->add_option("--witness", o.witness, "Assignment as literals, e.g. \"1 -2\"; prints its schedule");
  reduce->add_option("-o,--output", o.output, "Write the document here");

  auto* mip = app.add_subcommand("mip", "Emit the minimum-round MIP in LP format");
  mip->add_option("instance", o.instance, "Instance document")->required();
  mip->add_option("-o,--output", o.output, "Write the LP text here");
  mip->add_option("--check", o.check, "Check the assignment a schedule induces instead");

  auto* survey = app.add_subcommand("survey", "Schedule all path pairs of GraphML topologies");
  survey->add_option("inputs", o.survey_inputs, "GraphML files or directories")->required();
  survey->add_option("-o,--output", o.output, "Write the CSV here");
  survey->add_option("--histogram", o.histogram, "Write the round histogram here");
  survey->add_option("-j,--jobs", o.jobs, "Worker threads (0: all cores)");
  survey->add_option("--max-paths", o.survey.max_paths_per_st, "Paths per (s,t)");
  survey->add_option("--max-instances", o.survey.max_instances, "Instances in total");
  survey->add_option("--seed", o.survey.seed, "Neighbour shuffle when paths are truncated");
  survey->add_option("--oracle-max-updates", o.survey.oracle_max_updates,
                     "Cross-check instances up to this size with the exact search (0: off)");
  survey->add_flag("--no-estimator", o.no_estimator, "Skip the weighting estimate");
  survey->add_flag("--any-overlap", o.any_overlap,
                   "Capacity 2 on every edge both pairs use, not just shared old or new edges");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(o, out);
    if (*schedule) return cmd_schedule(o, out);
    if (*oracle) return cmd_oracle(o, out);
    if (*reduce) return cmd_reduce(o, out);
    if (*mip) return cmd_mip(o, out);
    if (*survey) return cmd_survey(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace reroute
