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

#include "reroute/sat_reduction.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>
#include <sstream>

#include "reroute/error.hpp"
#include "reroute/validator.hpp"

namespace reroute {
namespace {

[[noreturn]] void degenerate(const std::string& message) {
  throw Error(ErrorCode::kDegenerateFormula, message);
}

std::string clause_vertex(char kind, int clause) {
  return std::string(1, kind) + std::to_string(clause);
}

std::string gadget_vertex(char kind, int clause, int position) {
  return clause_vertex(kind, clause) + "_" + std::to_string(position);
}

std::string var_vertex(int var, int side) {
  return "w" + std::to_string(var) + "_" + std::to_string(side);
}

bool literal_true(Literal l, const Assignment& a) {
  return l > 0 ? a[static_cast<std::size_t>(l)] : !a[static_cast<std::size_t>(-l)];
}

}  // namespace

void check_formula(const CnfFormula& f) {
  if (f.num_vars < 1) degenerate("formula has no variables");
  if (f.clauses.empty()) degenerate("formula has no clauses");
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    const std::string where = "clause " + std::to_string(i + 1);
    for (Literal l : f.clauses[i]) {
      if (l == 0 || std::abs(l) > f.num_vars) {
        degenerate(where + " has literal " + std::to_string(l) + " out of range");
      }
      for (Literal k : f.clauses[i]) {
        if (k == -l) degenerate(where + " contains a variable and its negation");
      }
    }
  }
}

CnfFormula parse_dimacs(std::string_view text) {
  CnfFormula f;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false;
  long declared_clauses = 0;
  std::vector<Literal> pending;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string first;
    if (!(tokens >> first) || first[0] == 'c' || first[0] == '%') continue;
    if (first == "p") {
      std::string kind;
      if (header) fail("duplicate problem line");
      if (!(tokens >> kind >> f.num_vars >> declared_clauses) || kind != "cnf") {
        fail("expected 'p cnf <variables> <clauses>'");
      }
      header = true;
      continue;
    }
    if (!header) fail("clause before the problem line");
    tokens.clear();
    tokens.str(line);
    long value;
    while (tokens >> value) {
      if (value != 0) {
        pending.push_back(static_cast<Literal>(value));
        continue;
      }
      if (pending.size() != 3) {
        degenerate("clause " + std::to_string(f.clauses.size() + 1) + " has " +
                   std::to_string(pending.size()) + " literals, expected 3");
      }
      f.clauses.push_back({pending[0], pending[1], pending[2]});
      pending.clear();
    }
    if (!tokens.eof()) fail("expected integer literals");
  }
  if (!header) throw Error(ErrorCode::kParse, "missing 'p cnf' problem line");
  if (!pending.empty()) throw Error(ErrorCode::kParse, "last clause is not terminated by 0");
  if (static_cast<long>(f.clauses.size()) != declared_clauses) {
    throw Error(ErrorCode::kParse, "problem line declares " +
                                       std::to_string(declared_clauses) +
                                       " clauses, found " +
                                       std::to_string(f.clauses.size()));
  }
  check_formula(f);
  return f;
}

std::string to_dimacs(const CnfFormula& f) {
  std::string out = "p cnf " + std::to_string(f.num_vars) + " " +
                    std::to_string(f.clauses.size()) + "\n";
  for (const Clause& c : f.clauses) {
    out += std::to_string(c[0]) + " " + std::to_string(c[1]) + " " +
           std::to_string(c[2]) + " 0\n";
  }
  return out;
}

bool satisfies(const CnfFormula& f, const Assignment& a) {
  return std::all_of(f.clauses.begin(), f.clauses.end(), [&](const Clause& c) {
    return std::any_of(c.begin(), c.end(), [&](Literal l) { return literal_true(l, a); });
  });
}

std::vector<Assignment> satisfying_assignments(const CnfFormula& f) {
  std::vector<Assignment> out;
  const int n = f.num_vars;
  for (unsigned long bits = 0; bits < (1ul << n); ++bits) {
    Assignment a(static_cast<std::size_t>(n) + 1, false);
    for (int j = 1; j <= n; ++j) a[static_cast<std::size_t>(j)] = bits >> (j - 1) & 1;
    if (satisfies(f, a)) out.push_back(a);
  }
  return out;
}

InstanceDocument reduction_document(const CnfFormula& f) {
  check_formula(f);
  const int n = f.num_vars;
  const int m = static_cast<int>(f.clauses.size());
  InstanceDocument doc;
  doc.source = "s";
  doc.terminal = "t";
  doc.vertices.push_back("s");
  for (int i = 1; i <= m; ++i) {
    doc.vertices.push_back(clause_vertex('u', i));
    doc.vertices.push_back(clause_vertex('v', i));
    for (int k = 1; k <= 3; ++k) {
      doc.vertices.push_back(gadget_vertex('u', i, k));
      doc.vertices.push_back(gadget_vertex('v', i, k));
    }
  }
  for (int j = 1; j <= n; ++j) {
    doc.vertices.push_back(var_vertex(j, 1));
    doc.vertices.push_back(var_vertex(j, 2));
  }
  doc.vertices.push_back("t");

  auto literal_paths = [&](int sign, std::vector<std::string>& old_path,
                           std::vector<std::string>& new_path) {
    old_path = {"s"};
    new_path = {"s"};
    for (int j = 1; j <= n; ++j) {
      std::vector<std::string> gadgets;
      for (int i = 1; i <= m; ++i) {
        for (int k = 1; k <= 3; ++k) {
          if (f.clauses[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k - 1)] ==
              sign * j) {
            gadgets.push_back(gadget_vertex('u', i, k));
            gadgets.push_back(gadget_vertex('v', i, k));
          }
        }
      }
      if (gadgets.empty()) continue;
      old_path.push_back(var_vertex(j, 1));
      old_path.insert(old_path.end(), gadgets.begin(), gadgets.end());
      old_path.push_back(var_vertex(j, 2));
      new_path.push_back(var_vertex(j, 1));
      new_path.push_back(var_vertex(j, 2));
    }
    old_path.push_back("t");
    new_path.push_back("t");
  };

  std::vector<std::string> clause_chain{"s"};
  for (int i = 1; i <= m; ++i) {
    clause_chain.push_back(clause_vertex('u', i));
    clause_chain.push_back(clause_vertex('v', i));
  }
  clause_chain.push_back("t");

  InstanceDocument::PairEntry x{"X", {}, {}, 1};
  literal_paths(+1, x.old_path, x.new_path);
  InstanceDocument::PairEntry xbar{"Xbar", {}, {}, 1};
  literal_paths(-1, xbar.old_path, xbar.new_path);
  doc.pairs = {x, xbar};
  for (int k = 1; k <= 3; ++k) {
    InstanceDocument::PairEntry d{"D" + std::to_string(k), clause_chain, {"s"}, 1};
    for (int i = 1; i <= m; ++i) {
      d.new_path.push_back(clause_vertex('u', i));
      d.new_path.push_back(gadget_vertex('u', i, k));
      d.new_path.push_back(gadget_vertex('v', i, k));
      d.new_path.push_back(clause_vertex('v', i));
    }
    d.new_path.push_back("t");
    doc.pairs.push_back(std::move(d));
  }
  InstanceDocument::PairEntry b{"B", {"s"}, clause_chain, 1};
  for (int j = 1; j <= n; ++j) {
    b.old_path.push_back(var_vertex(j, 1));
    b.old_path.push_back(var_vertex(j, 2));
  }
  b.old_path.push_back("t");
  doc.pairs.push_back(std::move(b));

  auto capacity = [&](const std::string& tail, const std::string& head) -> std::int64_t {
    for (int j = 1; j <= n; ++j) {
      if (tail == var_vertex(j, 1) && head == var_vertex(j, 2)) return 2;
    }
    for (int i = 1; i <= m; ++i) {
      if (tail == clause_vertex('u', i) && head == clause_vertex('v', i)) return 3;
      for (int k = 1; k <= 3; ++k) {
        if (tail == gadget_vertex('u', i, k) && head == gadget_vertex('v', i, k)) return 1;
      }
    }
    return 6;
  };
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& pair : doc.pairs) {
    for (const auto* path : {&pair.old_path, &pair.new_path}) {
      for (std::size_t i = 0; i + 1 < path->size(); ++i) {
        const auto& tail = (*path)[i];
        const auto& head = (*path)[i + 1];
        if (seen.insert({tail, head}).second) {
          doc.edges.push_back({tail, head, capacity(tail, head)});
        }
      }
    }
  }
  return doc;
}

ReductionInstance build_reduction(const CnfFormula& f) {
  ReductionInstance inst{UpdateFlowNetwork::from_document(reduction_document(f)), {}};
  for (std::size_t v = 0; v < inst.network.vertex_count(); ++v) {
    inst.vertex[inst.network.vertex_name(static_cast<VertexId>(v))] =
        static_cast<VertexId>(v);
  }
  return inst;
}

UpdateSequence constructive_schedule(const CnfFormula& f,
                                     const ReductionInstance& inst,
                                     const Assignment& a) {
  check_formula(f);
  const auto& net = inst.network;
  if (a.size() != static_cast<std::size_t>(f.num_vars) + 1) {
    throw Error(ErrorCode::kPrecondition, "assignment has the wrong number of variables");
  }
  std::vector<std::vector<Update>> phase(6);

  for (Update u : net.updates()) {
    const bool has_old = net.old_out(u.pair, u.vertex) != kNoEdge;
    const bool has_new = net.new_out(u.pair, u.vertex) != kNoEdge;
    if (!has_old) phase[0].push_back(u);
    if (!has_new) phase[5].push_back(u);
  }

  for (int j = 1; j <= f.num_vars; ++j) {
    const VertexId w = inst.vertex.at(var_vertex(j, 1));
    const PairIndex first = a[static_cast<std::size_t>(j)] ? kPairX : kPairXbar;
    const PairIndex second = first == kPairX ? kPairXbar : kPairX;
    if (net.old_out(first, w) != kNoEdge) phase[0].push_back({w, first});
    if (net.old_out(second, w) != kNoEdge) phase[3].push_back({w, second});
  }

  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    const VertexId u = inst.vertex.at(clause_vertex('u', static_cast<int>(i) + 1));
    int chosen = -1;
    for (int k = 0; k < 3 && chosen < 0; ++k) {
      if (literal_true(f.clauses[i][static_cast<std::size_t>(k)], a)) chosen = k;
    }
    if (chosen < 0) {
      throw Error(ErrorCode::kUnsatisfied, "assignment does not satisfy clause " +
                                               std::to_string(i + 1));
    }
    for (int k = 0; k < 3; ++k) {
      phase[k == chosen ? 1 : 4].push_back({u, static_cast<PairIndex>(kPairD1 + k)});
    }
  }
  phase[2].push_back({net.source(), kPairB});

  UpdateSequence seq;
  seq.rounds = std::move(phase);
  normalize(seq);
  return seq;
}

Assignment extract_assignment(const CnfFormula& f, const ReductionInstance& inst,
                              const UpdateSequence& seq) {
  const auto& net = inst.network;
  auto report = validate_sequence(net, seq);
  if (!report.valid || !report.complete) {
    throw Error(ErrorCode::kInvalidSequence,
                "schedule is not a valid complete sequence: " + report.describe(net));
  }
  auto rounds = round_index(net, seq);
  auto round_of = [&](VertexId v, PairIndex p) -> std::size_t {
    auto id = net.update_index({v, p});
    return id ? rounds[*id] : 0;
  };
  const std::size_t r = round_of(net.source(), kPairB);
  Assignment a(static_cast<std::size_t>(f.num_vars) + 1, false);
  for (int j = 1; j <= f.num_vars; ++j) {
    const VertexId w = inst.vertex.at(var_vertex(j, 1));
    const std::size_t rx = round_of(w, kPairX);
    const std::size_t rxbar = round_of(w, kPairXbar);
    const bool pos = rx != 0 && rx < r;
    const bool neg = rxbar != 0 && rxbar < r;
    if (pos && neg) {
      throw Error(ErrorCode::kInvariant,
                  "both sides of variable " + std::to_string(j) +
                      " switched before the blocking flow");
    }
    a[static_cast<std::size_t>(j)] = pos;
  }
  if (!satisfies(f, a)) {
    throw Error(ErrorCode::kUnsatisfied, "extracted assignment does not satisfy the formula");
  }
  return a;
}

std::vector<CnfFormula> enumerate_formulas(int n, int m) {
  std::vector<Literal> literals;
  for (int j = 1; j <= n; ++j) {
    literals.push_back(-j);
    literals.push_back(j);
  }
  std::sort(literals.begin(), literals.end());
  std::vector<Clause> clauses;
  for (Literal a : literals) {
    for (Literal b : literals) {
      for (Literal c : literals) {
        if (a != -b && a != -c && b != -c) clauses.push_back({a, b, c});
      }
    }
  }

  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<std::vector<int>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  std::array<int, 3> position{0, 1, 2};
  std::vector<std::array<int, 3>> positions;
  do positions.push_back(position);
  while (std::next_permutation(position.begin(), position.end()));

  auto canonical = [&](const std::vector<Clause>& form) {
    std::vector<Clause> best;
    for (const auto& p : perms) {
      for (unsigned flips = 0; flips < (1u << n); ++flips) {
        for (const auto& q : positions) {
          std::vector<Clause> image;
          for (const Clause& c : form) {
            Clause mapped{};
            for (std::size_t k = 0; k < 3; ++k) {
              const Literal l = c[static_cast<std::size_t>(q[k])];
              const int var = std::abs(l);
              int to = p[static_cast<std::size_t>(var - 1)];
              if (flips >> (var - 1) & 1) to = -to;
              mapped[k] = l > 0 ? to : -to;
            }
            image.push_back(mapped);
          }
          std::sort(image.begin(), image.end());
          if (best.empty() || image < best) best = image;
        }
      }
    }
    return best;
  };

  std::set<std::vector<Clause>> classes;
  std::vector<std::size_t> pick(static_cast<std::size_t>(m), 0);
  while (true) {
    std::vector<Clause> form;
    std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
    for (std::size_t i : pick) {
      form.push_back(clauses[i]);
      for (Literal l : clauses[i]) used[static_cast<std::size_t>(std::abs(l))] = true;
    }
    if (std::count(used.begin() + 1, used.end(), true) == n) classes.insert(canonical(form));
    // Next non-decreasing index tuple: clause order is irrelevant.
    std::size_t i = pick.size();
    while (i > 0 && pick[i - 1] + 1 == clauses.size()) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < pick.size(); ++j) pick[j] = pick[i - 1];
  }
  std::vector<CnfFormula> out;
  for (const auto& form : classes) out.push_back({n, form});
  return out;
}

}  // namespace reroute
