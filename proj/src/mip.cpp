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

#include "reroute/mip.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "reroute/error.hpp"

namespace reroute {

namespace {

constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();
constexpr double kTolerance = 1e-9;

// In-edges of every vertex on the old and new path of one pair.
struct InEdges {
  std::vector<EdgeId> old_in;
  std::vector<EdgeId> new_in;
};

InEdges in_edges(const UpdateFlowNetwork& net, PairIndex p) {
  InEdges in{std::vector<EdgeId>(net.vertex_count(), kNoEdge),
             std::vector<EdgeId>(net.vertex_count(), kNoEdge)};
  for (EdgeId e : net.old_edges(p)) in.old_in[net.edge(e).head] = e;
  for (EdgeId e : net.new_edges(p)) in.new_in[net.edge(e).head] = e;
  return in;
}

bool is_fork(const UpdateFlowNetwork& net, PairIndex p, VertexId v) {
  EdgeId o = net.old_out(p, v);
  EdgeId n = net.new_out(p, v);
  return o != kNoEdge && n != kNoEdge && o != n;
}

bool is_old(const UpdateFlowNetwork& net, PairIndex p, EdgeId e) {
  return net.old_out(p, net.edge(e).tail) == e;
}

bool is_new(const UpdateFlowNetwork& net, PairIndex p, EdgeId e) {
  return net.new_out(p, net.edge(e).tail) == e;
}

std::string suffix(std::size_t r, char kind, int index, PairIndex p) {
  return "_r" + std::to_string(r) + "_" + kind + std::to_string(index) + "_p" +
         std::to_string(p);
}

class Builder {
 public:
  explicit Builder(const UpdateFlowNetwork& net) : net_(net) {
    m_.vertex_count = net.vertex_count();
    m_.edge_count = net.edges().size();
    m_.horizon = (net.vertex_count() - 1) * net.pair_count();
  }

  MipModel build() {
    const std::size_t H = m_.horizon;
    const std::size_t V = m_.vertex_count;
    const std::size_t E = m_.edge_count;
    const std::size_t P = net_.pair_count();
    for (auto* table : {&m_.x, &m_.fork, &m_.join}) {
      table->assign(P, std::vector<std::size_t>(H * V, kAbsent));
    }
    for (auto* table : {&m_.y, &m_.f}) {
      table->assign(P, std::vector<std::size_t>(H * E, kAbsent));
    }

    m_.objective = add_var("R", VarKind::kNonNegative, VarRole::kR, 0,
                           std::numeric_limits<double>::infinity());
    for (std::size_t p = 0; p < P; ++p) declare_pair(static_cast<PairIndex>(p));
    for (std::size_t p = 0; p < P; ++p) constrain_pair(static_cast<PairIndex>(p));

    std::vector<bool> used(E, false);
    for (std::size_t p = 0; p < P; ++p) {
      for (EdgeId e : net_.pair_edges(static_cast<PairIndex>(p))) used[e] = true;
    }
    for (std::size_t r = 1; r <= H; ++r) {
      for (std::size_t e = 0; e < E; ++e) {
        if (!used[e]) continue;
        MipConstraint c{"cap_r" + std::to_string(r) + "_e" + std::to_string(e),
                        {}, Sense::kLessEqual,
                        static_cast<double>(net_.edge(static_cast<EdgeId>(e)).capacity)};
        for (std::size_t p = 0; p < P; ++p) {
          std::size_t var = m_.f[p][(r - 1) * E + e];
          if (var != kAbsent) {
            c.terms.push_back({var, static_cast<double>(net_.pair(static_cast<PairIndex>(p)).demand)});
          }
        }
        m_.constraints.push_back(std::move(c));
      }
    }
    if (!net_.updates().empty()) {
      m_.constraints.push_back(
          {"min_round", {{m_.objective, 1}}, Sense::kGreaterEqual, 1});
    }
    return std::move(m_);
  }

 private:
  std::size_t add_var(std::string name, VarKind kind, VarRole role, double lo,
                      double hi) {
    m_.variables.push_back({std::move(name), kind, role, lo, hi});
    return m_.variables.size() - 1;
  }

  void declare_pair(PairIndex p) {
    const std::size_t V = m_.vertex_count;
    const std::size_t E = m_.edge_count;
    const InEdges in = in_edges(net_, p);
    for (std::size_t r = 1; r <= m_.horizon; ++r) {
      for (VertexId v : net_.pair_vertices(p)) {
        const std::size_t slot = (r - 1) * V + v;
        const bool fork = is_fork(net_, p, v);
        const bool join = in.old_in[v] != kNoEdge && in.new_in[v] != kNoEdge &&
                          in.old_in[v] != in.new_in[v];
        m_.x[p][slot] = add_vertex_var("x", VarRole::kX, r, v, p, 1);
        m_.fork[p][slot] =
            add_vertex_var("fork", VarRole::kFork, r, v, p, fork ? 1 : 0);
        m_.join[p][slot] =
            add_vertex_var("join", VarRole::kJoin, r, v, p, join ? 1 : 0);
      }
      for (EdgeId e : net_.pair_edges(p)) {
        const std::size_t slot = (r - 1) * E + e;
        const bool shared = is_old(net_, p, e) && is_new(net_, p, e);
        m_.y[p][slot] = add_edge_var("y", VarRole::kY, r, e, p, shared ? 1 : 0);
        m_.f[p][slot] = add_edge_var("f", VarRole::kF, r, e, p, 0);
      }
    }
  }

  std::size_t add_vertex_var(const char* stem, VarRole role, std::size_t r,
                             VertexId v, PairIndex p, double hi) {
    std::size_t i = add_var(stem + suffix(r, 'v', v, p), VarKind::kBinary, role, 0, hi);
    auto& var = m_.variables[i];
    var.round = r;
    var.pair = p;
    var.vertex = v;
    return i;
  }

  std::size_t add_edge_var(const char* stem, VarRole role, std::size_t r,
                           EdgeId e, PairIndex p, double lo) {
    std::size_t i =
        add_var(stem + suffix(r, 'e', e, p), VarKind::kUnitInterval, role, lo, 1);
    auto& var = m_.variables[i];
    var.round = r;
    var.pair = p;
    var.edge = e;
    return i;
  }

  void constrain_pair(PairIndex p) {
    const std::size_t H = m_.horizon;
    const std::size_t V = m_.vertex_count;
    const std::size_t E = m_.edge_count;
    const std::string tag = "_p" + std::to_string(p);
    const InEdges in = in_edges(net_, p);
    auto x = [&](std::size_t r, VertexId v) { return m_.x[p][(r - 1) * V + v]; };
    auto y = [&](std::size_t r, EdgeId e) { return m_.y[p][(r - 1) * E + e]; };
    auto f = [&](std::size_t r, EdgeId e) { return m_.f[p][(r - 1) * E + e]; };
    auto fork = [&](std::size_t r, VertexId v) { return m_.fork[p][(r - 1) * V + v]; };
    auto join = [&](std::size_t r, VertexId v) { return m_.join[p][(r - 1) * V + v]; };

    for (VertexId v : net_.pair_vertices(p)) {
      MipConstraint c{"once_v" + std::to_string(v) + tag, {}, Sense::kEqual, 1};
      for (std::size_t r = 1; r <= H; ++r) c.terms.push_back({x(r, v), 1});
      m_.constraints.push_back(std::move(c));
    }

    for (std::size_t r = 1; r <= H; ++r) {
      const std::string at = "_r" + std::to_string(r);
      for (VertexId v : net_.pair_vertices(p)) {
        const std::string vtag = at + "_v" + std::to_string(v) + tag;
        m_.constraints.push_back({"last" + vtag,
                                  {{m_.objective, 1}, {x(r, v), -static_cast<double>(r)}},
                                  Sense::kGreaterEqual, 0});
        if (is_fork(net_, p, v)) {
          m_.constraints.push_back(
              {"fork" + vtag, {{fork(r, v), 1}, {x(r, v), -1}}, Sense::kEqual, 0});
        }
      }

      for (EdgeId e : net_.pair_edges(p)) {
        const std::string etag = at + "_e" + std::to_string(e) + tag;
        const VertexId u = net_.edge(e).tail;
        const bool old_edge = is_old(net_, p, e);
        const bool new_edge = is_new(net_, p, e);
        if (old_edge != new_edge) {
          // y + (old ? 1 : -1) * sum_{r' <= r} x = (old ? 1 : 0)
          MipConstraint c{(new_edge ? "active_new" : "active_old") + etag,
                          {{y(r, e), 1}}, Sense::kEqual, old_edge ? 1.0 : 0.0};
          for (std::size_t q = 1; q <= r; ++q) {
            c.terms.push_back({x(q, u), old_edge ? 1.0 : -1.0});
          }
          m_.constraints.push_back(std::move(c));
        }
        MipConstraint before{"flow_before" + etag,
                             {{f(r, e), 1}, {fork(r, u), -1}}, Sense::kLessEqual, 0};
        if (r == 1) {
          before.rhs = old_edge ? 1 : 0;
        } else {
          before.terms.push_back({y(r - 1, e), -1});
        }
        m_.constraints.push_back(std::move(before));
        m_.constraints.push_back({"flow_after" + etag,
                                  {{f(r, e), 1}, {fork(r, u), -1}, {y(r, e), -1}},
                                  Sense::kLessEqual, 0});
      }

      for (VertexId v : net_.pair_vertices(p)) {
        const std::string vtag = at + "_v" + std::to_string(v) + tag;
        const EdgeId oi = in.old_in[v];
        const EdgeId ni = in.new_in[v];
        if (oi != kNoEdge && ni != kNoEdge && oi != ni) {
          m_.constraints.push_back(
              {"join_old" + vtag, {{join(r, v), 1}, {f(r, oi), -1}}, Sense::kLessEqual, 0});
          m_.constraints.push_back(
              {"join_new" + vtag, {{join(r, v), 1}, {f(r, ni), -1}}, Sense::kLessEqual, 0});
        }

        MipConstraint c{"conserve" + vtag, {}, Sense::kEqual, 0};
        std::vector<EdgeId> outs, ins;
        for (EdgeId e : {net_.old_out(p, v), net_.new_out(p, v)}) {
          if (e != kNoEdge && std::find(outs.begin(), outs.end(), e) == outs.end()) outs.push_back(e);
        }
        for (EdgeId e : {oi, ni}) {
          if (e != kNoEdge && std::find(ins.begin(), ins.end(), e) == ins.end()) ins.push_back(e);
        }
        for (EdgeId e : outs) c.terms.push_back({f(r, e), 1});
        for (EdgeId e : ins) c.terms.push_back({f(r, e), -1});
        if (v == net_.source()) {
          c.terms.push_back({fork(r, v), -1});
          c.rhs = 1;
        } else if (v == net_.terminal()) {
          c.terms.push_back({join(r, v), 1});
          c.rhs = -1;
        } else {
          c.terms.push_back({fork(r, v), -1});
          c.terms.push_back({join(r, v), 1});
        }
        m_.constraints.push_back(std::move(c));
      }
    }
  }

  const UpdateFlowNetwork& net_;
  MipModel m_;
};

std::string number(double value) {
  if (std::isinf(value)) return value > 0 ? "+inf" : "-inf";
  if (value == std::trunc(value) && std::fabs(value) < 1e15) {
    return std::to_string(static_cast<long long>(value));
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

// Appends " + 2 x" style terms, wrapping long rows onto continuation lines.
void append_terms(std::string& out, const MipModel& m,
                  const std::vector<LinearTerm>& terms, std::size_t line_start) {
  bool first = true;
  for (const auto& t : terms) {
    std::string piece;
    double mag = std::fabs(t.coef);
    if (first) {
      piece = t.coef < 0 ? "- " : "";
    } else {
      piece = t.coef < 0 ? " - " : " + ";
    }
    if (mag != 1) piece += number(mag) + " ";
    piece += m.variables[t.var].name;
    if (out.size() - line_start + piece.size() > 200) {
      out += "\n  ";
      line_start = out.size() - 2;
    }
    out += piece;
    first = false;
  }
}

const char* sense_text(Sense s) {
  switch (s) {
    case Sense::kLessEqual: return " <= ";
    case Sense::kGreaterEqual: return " >= ";
    case Sense::kEqual: return " = ";
  }
  return " = ";
}

}  // namespace

std::size_t MipModel::count(VarRole role) const {
  return static_cast<std::size_t>(std::count_if(
      variables.begin(), variables.end(),
      [role](const MipVariable& v) { return v.role == role; }));
}

std::size_t MipModel::find(VarRole role, std::size_t round, PairIndex pair,
                           int index) const {
  if (role == VarRole::kR) return objective;
  if (round < 1 || round > horizon || pair < 0 ||
      static_cast<std::size_t>(pair) >= x.size() || index < 0) {
    return kAbsent;
  }
  const bool by_vertex = role == VarRole::kX || role == VarRole::kFork ||
                         role == VarRole::kJoin;
  const std::size_t width = by_vertex ? vertex_count : edge_count;
  if (static_cast<std::size_t>(index) >= width) return kAbsent;
  const std::size_t slot = (round - 1) * width + static_cast<std::size_t>(index);
  switch (role) {
    case VarRole::kX: return x[pair][slot];
    case VarRole::kFork: return fork[pair][slot];
    case VarRole::kJoin: return join[pair][slot];
    case VarRole::kY: return y[pair][slot];
    case VarRole::kF: return f[pair][slot];
    case VarRole::kR: break;
  }
  return kAbsent;
}

std::vector<VertexId> fork_vertices(const UpdateFlowNetwork& net, PairIndex p) {
  std::vector<VertexId> out;
  for (VertexId v : net.pair_vertices(p)) {
    if (is_fork(net, p, v)) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VertexId> join_vertices(const UpdateFlowNetwork& net, PairIndex p) {
  const InEdges in = in_edges(net, p);
  std::vector<VertexId> out;
  for (VertexId v : net.pair_vertices(p)) {
    if (in.old_in[v] != kNoEdge && in.new_in[v] != kNoEdge &&
        in.old_in[v] != in.new_in[v]) {
      out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

MipModel build_mip(const UpdateFlowNetwork& net) { return Builder(net).build(); }

std::string emit_lp(const UpdateFlowNetwork& net, const MipModel& model) {
  std::string out;
  out += "\\ minimum-round update schedule, horizon " +
         std::to_string(model.horizon) + " rounds\n";
  out += "\\ vertices:";
  for (std::size_t v = 0; v < net.vertex_count(); ++v) {
    out += " v" + std::to_string(v) + "=" + net.vertex_name(static_cast<VertexId>(v));
  }
  out += "\n\\ edges:";
  for (std::size_t e = 0; e < net.edges().size(); ++e) {
    const Edge& edge = net.edge(static_cast<EdgeId>(e));
    out += " e" + std::to_string(e) + "=(" + net.vertex_name(edge.tail) + "," +
           net.vertex_name(edge.head) + ")";
  }
  out += "\n\\ pairs:";
  for (std::size_t p = 0; p < net.pair_count(); ++p) {
    out += " p" + std::to_string(p) + "=" + net.pair(static_cast<PairIndex>(p)).id;
  }
  out += "\nMinimize\n obj: " + model.variables[model.objective].name + "\n";
  out += "Subject To\n";
  for (const auto& c : model.constraints) {
    std::size_t line_start = out.size();
    out += " " + c.name + ": ";
    append_terms(out, model, c.terms, line_start);
    out += sense_text(c.sense) + number(c.rhs) + "\n";
  }
  out += "Bounds\n";
  for (const auto& v : model.variables) {
    if (v.kind == VarKind::kBinary) {
      if (v.upper == 0) out += " " + v.name + " = 0\n";
    } else if (v.lower == v.upper) {
      out += " " + v.name + " = " + number(v.lower) + "\n";
    } else if (std::isinf(v.upper)) {
      out += " " + v.name + " >= " + number(v.lower) + "\n";
    } else {
      out += " " + number(v.lower) + " <= " + v.name + " <= " + number(v.upper) + "\n";
    }
  }
  out += "Binaries\n";
  for (const auto& v : model.variables) {
    if (v.kind == VarKind::kBinary) out += " " + v.name + "\n";
  }
  out += "End\n";
  return out;
}

MipCheck cross_check_mip(const UpdateFlowNetwork& net, const MipModel& model,
                         const UpdateSequence& seq) {
  check_well_formed(net, seq);
  if (seq.round_count() > model.horizon) {
    throw Error(ErrorCode::kHorizonExceeded,
                std::to_string(seq.round_count()) + " rounds exceed the horizon of " +
                    std::to_string(model.horizon));
  }
  if (!is_complete(net, seq)) {
    throw Error(ErrorCode::kPrecondition, "sequence is incomplete");
  }

  const std::size_t H = model.horizon;
  const std::size_t V = model.vertex_count;
  const std::size_t E = model.edge_count;
  std::vector<double> value(model.variables.size(), 0.0);
  std::vector<std::size_t> round_of(net.pair_count() * V, 1);
  for (std::size_t r = 0; r < seq.rounds.size(); ++r) {
    for (Update u : seq.rounds[r]) round_of[u.pair * V + u.vertex] = r + 1;
  }

  for (std::size_t pi = 0; pi < net.pair_count(); ++pi) {
    const auto p = static_cast<PairIndex>(pi);
    const InEdges in = in_edges(net, p);
    auto when = [&](VertexId v) { return round_of[pi * V + v]; };
    // Active before (r - 1) or after (r) round r.
    auto active = [&](EdgeId e, std::size_t r) {
      const bool o = is_old(net, p, e);
      const bool n = is_new(net, p, e);
      if (o && n) return true;
      const bool switched = when(net.edge(e).tail) <= r;
      return n ? switched : !switched;
    };
    for (std::size_t r = 1; r <= H; ++r) {
      for (VertexId v : net.pair_vertices(p)) {
        const std::size_t slot = (r - 1) * V + v;
        const double x = when(v) == r ? 1.0 : 0.0;
        value[model.x[pi][slot]] = x;
        value[model.fork[pi][slot]] = is_fork(net, p, v) ? x : 0.0;
      }
      for (EdgeId e : net.pair_edges(p)) {
        value[model.y[pi][(r - 1) * E + e]] = active(e, r) ? 1.0 : 0.0;
      }

      // Worst-case transient flow of round r: edges stably active across the
      // round plus both out-edges of forks switching in it.
      std::vector<bool> reached(V, false);
      std::vector<VertexId> stack{net.source()};
      reached[net.source()] = true;
      while (!stack.empty()) {
        VertexId u = stack.back();
        stack.pop_back();
        const bool forking = is_fork(net, p, u) && when(u) == r;
        for (EdgeId e : {net.old_out(p, u), net.new_out(p, u)}) {
          if (e == kNoEdge) continue;
          if (!forking && !(active(e, r - 1) && active(e, r))) continue;
          value[model.f[pi][(r - 1) * E + e]] = 1.0;
          VertexId w = net.edge(e).head;
          if (!reached[w]) {
            reached[w] = true;
            stack.push_back(w);
          }
        }
      }
      for (VertexId v : net.pair_vertices(p)) {
        const EdgeId oi = in.old_in[v];
        const EdgeId ni = in.new_in[v];
        if (oi != kNoEdge && ni != kNoEdge && oi != ni &&
            value[model.f[pi][(r - 1) * E + oi]] > 0.5 &&
            value[model.f[pi][(r - 1) * E + ni]] > 0.5) {
          value[model.join[pi][(r - 1) * V + v]] = 1.0;
        }
      }
    }
  }

  const double rounds =
      static_cast<double>(std::max<std::size_t>(1, seq.round_count()));
  value[model.objective] = rounds;

  MipCheck check{true, "", rounds};
  for (std::size_t i = 0; i < model.variables.size(); ++i) {
    const auto& var = model.variables[i];
    if (value[i] < var.lower - kTolerance || value[i] > var.upper + kTolerance) {
      check.satisfied = false;
      check.first_violation = var.name;
      return check;
    }
  }
  for (const auto& c : model.constraints) {
    double lhs = 0;
    for (const auto& t : c.terms) lhs += t.coef * value[t.var];
    bool ok = true;
    switch (c.sense) {
      case Sense::kLessEqual: ok = lhs <= c.rhs + kTolerance; break;
      case Sense::kGreaterEqual: ok = lhs >= c.rhs - kTolerance; break;
      case Sense::kEqual: ok = std::fabs(lhs - c.rhs) <= kTolerance; break;
    }
    if (!ok) {
      check.satisfied = false;
      check.first_violation = c.name;
      return check;
    }
  }
  return check;
}

MipCheck cross_check_mip(const UpdateFlowNetwork& net, const UpdateSequence& seq) {
  return cross_check_mip(net, build_mip(net), seq);
}

}  // namespace reroute
