// Test-side helpers shared by the unit and acceptance suites: a brute-force
// solution enumerator (independent of the solvers under test) and a generator
// of random acyclic models whose declared dominance and dual bounds are sound
// by construction.
#pragma once

#include <optional>
#include <random>

#include "bpkit/model.hpp"

namespace bpkit::testing {

// Enumerates every solution by depth-first traversal of the transition graph
// and returns the optimal cost, or nullopt when no base state is reachable.
// Depends only on the model operations, never on the search module.
inline std::optional<double> enumerate_optimum(const Model& m, const State& s, int depth_cap = 64) {
  if (!check_state_constraints(m, s)) return std::nullopt;
  if (auto v = is_base(m, s)) return *v;
  if (depth_cap == 0) throw Error("enumerate_optimum: depth cap hit (model not finite?)");
  std::optional<double> best;
  for (int ti : applicable_transitions(m, s)) {
    const Transition& t = m.transitions[static_cast<size_t>(ti)];
    double w = transition_weight(m, t, s);
    auto sub = enumerate_optimum(m, apply(m, t, s), depth_cap - 1);
    if (sub && (!best || w + *sub < *best)) best = w + *sub;
  }
  return best;
}

// Random models: a step counter guarantees acyclicity; resource variables are
// wired so the declared preference is provably sound (preconditions monotone
// in the preferred direction, weights monotone, effects order-preserving).
struct RandomModelConfig {
  int max_depth = 6;
  int n_counters = 2;       // non-resource element vars driving the DAG
  int n_numeric_res = 1;    // prefer-less numeric resources
  int n_set_res = 1;        // prefer-greater set resources
  uint32_t set_universe = 5;
  int n_transitions = 6;
  bool with_dual_bound = true;
  bool with_state_constraint = false;
};

inline Model random_model(std::mt19937_64& rng, const RandomModelConfig& cfg = {}) {
  ModelBuilder b;
  auto depth = b.element_var("depth", static_cast<uint32_t>(cfg.max_depth), Pref::None, 0);
  std::vector<ElementVar> counters;
  for (int i = 0; i < cfg.n_counters; ++i)
    counters.push_back(b.element_var("c" + std::to_string(i), 64, Pref::None,
                                     static_cast<uint32_t>(rng() % 3)));
  std::vector<NumericVar> res;
  for (int i = 0; i < cfg.n_numeric_res; ++i)
    res.push_back(b.numeric_var("r" + std::to_string(i), Pref::Less,
                                static_cast<double>(rng() % 3)));
  std::vector<SetVar> sres;
  for (int i = 0; i < cfg.n_set_res; ++i) {
    Bitset init(cfg.set_universe);
    for (uint32_t e = 0; e < cfg.set_universe; ++e)
      if (rng() % 4) init.add(e);
    sres.push_back(b.set_var("S" + std::to_string(i), cfg.set_universe, Pref::Greater,
                             std::move(init)));
  }

  for (int ti = 0; ti < cfg.n_transitions; ++ti) {
    Transition& tr = b.transition("t" + std::to_string(ti));
    tr.preconditions.push_back(
        cmp_elem(nodes::CmpOp::Lt, depth, elem_const(static_cast<uint32_t>(cfg.max_depth))));
    // Element-var guards keep the graph sparse and create dead ends.
    if (rng() % 2) {
      const ElementVar& c = counters[rng() % counters.size()];
      uint32_t bound = static_cast<uint32_t>(rng() % 8);
      tr.preconditions.push_back(rng() % 2 ? cmp_elem(nodes::CmpOp::Le, c, elem_const(bound))
                                           : cmp_elem(nodes::CmpOp::Ne, c, elem_const(bound)));
    }
    // Numeric-resource guards only as upper bounds: smaller r stays feasible.
    if (!res.empty() && rng() % 2) {
      const NumericVar& r = res[rng() % res.size()];
      tr.preconditions.push_back(r.expr() <= num_const(static_cast<double>(rng() % 8)));
    }
    // Set-resource guards only as membership: supersets stay feasible.
    if (!sres.empty() && rng() % 2) {
      const SetVar& s = sres[rng() % sres.size()];
      tr.preconditions.push_back(
          member(elem_const(static_cast<uint32_t>(rng() % cfg.set_universe)), s));
    }

    tr.elem_effects.push_back({depth.slot, elem_add(depth, 1)});
    for (size_t ci = 0; ci < counters.size(); ++ci)
      if (rng() % 2) {
        uint32_t step = static_cast<uint32_t>(rng() % 3);
        tr.elem_effects.push_back(
            {counters[ci].slot,
             rng() % 4 == 0 ? ElementExpr(elem_const(static_cast<uint32_t>(rng() % 8)))
                            : elem_add(counters[ci], step)});
      }
    // Resource effects only move in directions that keep dominance sound:
    // prefer-less numerics only grow by a nonnegative step; prefer-greater
    // sets only shrink via intersection with a constant mask.
    for (size_t ri = 0; ri < res.size(); ++ri)
      if (rng() % 2)
        tr.num_effects.push_back(
            {res[ri].slot, res[ri].expr() + num_const(static_cast<double>(rng() % 3))});
    for (size_t si = 0; si < sres.size(); ++si)
      if (rng() % 2) {
        Bitset mask(cfg.set_universe);
        for (uint32_t e = 0; e < cfg.set_universe; ++e)
          if (rng() % 3) mask.add(e);
        tr.set_effects.push_back({sres[si].slot, sres[si].expr() & set_const(mask)});
      }
    // Weight: integer in [-10, 10], optionally plus a nonnegative multiple of
    // a prefer-less resource (monotone, so dominance stays cost-safe).
    NumericExpr w = num_const(static_cast<double>(static_cast<int>(rng() % 21) - 10));
    if (!res.empty() && rng() % 3 == 0)
      w = w + num_const(static_cast<double>(rng() % 2 + 1)) * res[rng() % res.size()].expr();
    tr.weight = w;
  }

  // Base cases: reaching full depth always terminates (value >= 0); an early
  // exit triggers on a counter hit for some models.
  if (rng() % 3 == 0) {
    const ElementVar& c = counters[rng() % counters.size()];
    b.base_case({cmp_elem(nodes::CmpOp::Eq, c, elem_const(static_cast<uint32_t>(rng() % 6)))},
                num_const(static_cast<double>(rng() % 5)));
  }
  b.base_case(
      {cmp_elem(nodes::CmpOp::Eq, depth, elem_const(static_cast<uint32_t>(cfg.max_depth)))},
      num_const(static_cast<double>(rng() % 5)));

  if (cfg.with_state_constraint && rng() % 2) {
    const ElementVar& c = counters[rng() % counters.size()];
    b.state_constraint(cmp_elem(nodes::CmpOp::Ne, c, elem_const(7)));
  }
  if (cfg.with_dual_bound && rng() % 2) {
    // Admissible: every weight is a constant >= -10 plus nonnegative
    // resource terms, and base values are >= 0, so -10 per remaining step
    // is a valid lower bound on the cost to go.
    std::vector<double> per_depth(static_cast<size_t>(cfg.max_depth) + 1);
    for (int dteps = 0; dteps <= cfg.max_depth; ++dteps)
      per_depth[static_cast<size_t>(dteps)] = -10.0 * (cfg.max_depth - dteps);
    int table = b.numeric_table("eta", per_depth, {static_cast<uint32_t>(cfg.max_depth) + 1});
    b.dual_bound(b.num_at(table, depth));
  }
  return b.build();
}

}  // namespace bpkit::testing
