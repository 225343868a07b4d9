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

#ifndef REROUTE_SAT_REDUCTION_HPP_
#define REROUTE_SAT_REDUCTION_HPP_

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "reroute/network.hpp"
#include "reroute/schedule.hpp"

namespace reroute {

// DIMACS-style literal: +j is x_j, -j is its negation; j is 1-based.
using Literal = int;
using Clause = std::array<Literal, 3>;

struct CnfFormula {
  int num_vars = 0;
  std::vector<Clause> clauses;

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

// Throws Error(kDegenerateFormula) unless the formula has a variable and a
// clause, all literals are in range and no clause holds x_j and its
// negation.
void check_formula(const CnfFormula& f);

// Reads "p cnf <vars> <clauses>" followed by 0-terminated clauses; lines
// starting with 'c' are comments. Clauses must have exactly 3 literals.
CnfFormula parse_dimacs(std::string_view text);
std::string to_dimacs(const CnfFormula& f);

// Truth values indexed by variable, entry 0 unused.
using Assignment = std::vector<bool>;

bool satisfies(const CnfFormula& f, const Assignment& a);
std::vector<Assignment> satisfying_assignments(const CnfFormula& f);

// Pair order of the reduction instance.
enum ReductionPair : PairIndex {
  kPairX = 0,
  kPairXbar = 1,
  kPairD1 = 2,
  kPairD2 = 3,
  kPairD3 = 4,
  kPairB = 5,
};

// The six-flow instance for a formula. Vertices are named "s", "t",
// "u<i>", "v<i>", "u<i>_<k>", "v<i>_<k>" for clause i and position k, and
// "w<j>_1", "w<j>_2" for variable j.
//
// Pair X threads the gadget edges (u<i>_<k>, v<i>_<k>) of every positive
// occurrence of x_j between w<j>_1 and w<j>_2 on its old path and takes the
// edge (w<j>_1, w<j>_2) on its new path; Xbar does the same for negative
// occurrences. A flow with no occurrence of some variable bypasses that
// variable's two vertices on both paths. D_k's new path detours through
// position k of every clause; B moves from the w-chain to the u/v-chain.
struct ReductionInstance {
  UpdateFlowNetwork network;
  std::map<std::string, VertexId> vertex;
};

ReductionInstance build_reduction(const CnfFormula& f);
InstanceDocument reduction_document(const CnfFormula& f);

// A valid schedule from a satisfying assignment, in up to six rounds:
//   1. flip each w<j>_1 on the side chosen by the assignment, and prepare
//      every vertex that exists only on a new path;
//   2. per clause, flip u<i> in the D flow of its first satisfied literal;
//   3. flip (s, B);
//   4. flip the remaining w<j>_1;
//   5. flip the remaining u<i>;
//   6. clean up the vertices left only on old paths.
// Rounds with nothing to do are dropped. Throws Error(kUnsatisfied) if some
// clause has no satisfied literal.
UpdateSequence constructive_schedule(const CnfFormula& f,
                                     const ReductionInstance& inst,
                                     const Assignment& a);

// Reads the assignment off a valid complete sequence: with r the round of
// (s, B), x_j is true if (w<j>_1, X) switched before r, false if
// (w<j>_1, Xbar) did, false if neither. Throws Error(kInvalidSequence) if
// the sequence does not validate.
Assignment extract_assignment(const CnfFormula& f, const ReductionInstance& inst,
                              const UpdateSequence& seq);

// All formulas with exactly n variables (each one used) and m clauses, one
// per class of isomorphic reduction instances: renaming or negating
// variables, reordering clauses, and permuting literal positions the same
// way in every clause (which relabels D1..D3). Reordering the literals of a
// single clause is not a symmetry, since positions pick the D flow.
std::vector<CnfFormula> enumerate_formulas(int n, int m);

}  // namespace reroute

#endif  // REROUTE_SAT_REDUCTION_HPP_
