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

#ifndef REROUTE_MIP_HPP_
#define REROUTE_MIP_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "reroute/network.hpp"
#include "reroute/schedule.hpp"

namespace reroute {

enum class VarKind { kBinary, kUnitInterval, kNonNegative };
enum class VarRole { kX, kY, kF, kFork, kJoin, kR };

struct MipVariable {
  std::string name;
  VarKind kind;
  VarRole role;
  double lower;
  double upper;
  std::size_t round = 0;
  PairIndex pair = -1;
  VertexId vertex = kNoVertex;
  EdgeId edge = kNoEdge;
};

struct LinearTerm {
  std::size_t var;
  double coef;
};

enum class Sense { kLessEqual, kGreaterEqual, kEqual };

struct MipConstraint {
  std::string name;
  std::vector<LinearTerm> terms;
  Sense sense;
  double rhs;
};

// Minimum-round MIP over rounds 1..horizon with horizon = (|V|-1)|P|.
//
// Per pair i, on-pair vertex v and round r: binary x (v switches pair i in
// round r), fork and join. Per pair edge e and round r: y in [0,1] (e is
// active for i after round r) and f in [0,1] (e carries i's worst-case
// transient flow during round r). R is the number of rounds.
//
//   minimize R
//   sum_r x[r][v][i] = 1                   every switch happens once
//   R >= r x[r][v][i]
//   y[r][e][i] = sum_{r'<=r} x[r'][tail][i]      e on the new path only
//   y[r][e][i] = 1 - sum_{r'<=r} x[r'][tail][i]  e on the old path only
//   y[r][e][i] = 1                         e on both paths (fixed bound)
//   fork[r][v][i] = x[r][v][i]             v has distinct old and new out-edges
//   f[r][e][i] <= y[r-1][e][i] + fork[r][tail][i]   (y[0]: 1 on old, 0 on new)
//   f[r][e][i] <= y[r][e][i] + fork[r][tail][i]
//   join[r][v][i] <= f[r][e][i]            for both in-edges of a vertex with
//                                          distinct old and new in-edges
//   out(f) - in(f) = 1 + fork (at s), -(1 + join) (at t), fork - join
//   sum_i d_i f[r][e][i] <= c(e)           every edge some pair uses
//   R >= 1                                 if any switch is non-empty
//
// fork and join are fixed to 0 by bounds at vertices that are not fork or
// join vertices of the pair.
struct MipModel {
  std::size_t horizon = 0;
  std::vector<MipVariable> variables;
  std::vector<MipConstraint> constraints;
  std::size_t objective = 0;  // index of R

  std::size_t count(VarRole role) const;
  // Index of the variable with this role, or SIZE_MAX if it does not exist.
  std::size_t find(VarRole role, std::size_t round, PairIndex pair, int index) const;

  // Lookup tables: [pair][(round - 1) * V + vertex] or [(round - 1) * E + edge].
  std::vector<std::vector<std::size_t>> x, fork, join, y, f;
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
};

std::vector<VertexId> fork_vertices(const UpdateFlowNetwork& net, PairIndex p);
std::vector<VertexId> join_vertices(const UpdateFlowNetwork& net, PairIndex p);

MipModel build_mip(const UpdateFlowNetwork& net);

// CPLEX LP text. Variables are named x_r<r>_v<v>_p<i>, fork_..., join_...,
// y_r<r>_e<e>_p<i>, f_r<r>_e<e>_p<i> and R; a comment header maps vertex,
// edge and pair indices to their names.
std::string emit_lp(const UpdateFlowNetwork& net, const MipModel& model);

struct MipCheck {
  bool satisfied = false;
  std::string first_violation;  // constraint or bound name
  double objective = 0;         // value of R in the assignment
};

// Builds the assignment a complete sequence induces (empty switches in
// round 1; f marks the edges reachable from s over edges active before and
// after the round plus both out-edges of forks switching in it) and checks
// it against every row and bound of build_mip(net). Throws
// Error(kHorizonExceeded) if the sequence is longer than the horizon and
// Error(kPrecondition) if it is incomplete.
MipCheck cross_check_mip(const UpdateFlowNetwork& net, const MipModel& model,
                         const UpdateSequence& seq);
MipCheck cross_check_mip(const UpdateFlowNetwork& net, const UpdateSequence& seq);

}  // namespace reroute

#endif  // REROUTE_MIP_HPP_
