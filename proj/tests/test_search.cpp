#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bpkit/search.hpp"
#include "support/random_models.hpp"

using namespace bpkit;
using bpkit::testing::enumerate_optimum;
using bpkit::testing::random_model;

namespace {

Model chain_model(std::vector<double> weights, double base_value = 0.0) {
  ModelBuilder b;
  auto pos = b.element_var("pos", static_cast<uint32_t>(weights.size()), Pref::None, 0);
  for (size_t i = 0; i < weights.size(); ++i) {
    Transition& t = b.transition("step" + std::to_string(i));
    t.preconditions.push_back(cmp_elem(nodes::CmpOp::Eq, pos, elem_const(static_cast<uint32_t>(i))));
    t.elem_effects.push_back({pos.slot, elem_const(static_cast<uint32_t>(i + 1))});
    t.weight = num_const(weights[i]);
  }
  b.base_case({cmp_elem(nodes::CmpOp::Eq, pos, elem_const(static_cast<uint32_t>(weights.size())))},
              num_const(base_value));
  return b.build();
}

}  // namespace

TEST_CASE("exhaustive: immediate base state with value 7") {
  ModelBuilder b;
  b.numeric_var("x", Pref::None, 0.0);
  b.base_case({}, num_const(7.0));
  Model m = b.build();
  SearchResult r = solve_exhaustive(m);
  REQUIRE(r.status == SearchStatus::Optimal);
  CHECK(r.best().cost == 7.0);
  CHECK(r.best().path.empty());
}

TEST_CASE("exhaustive: target violating a state constraint is infeasible") {
  ModelBuilder b;
  auto x = b.numeric_var("x", Pref::None, 5.0);
  b.state_constraint(x.expr() <= 1.0);
  b.base_case({}, num_const(0.0));
  Model m = b.build();
  CHECK(solve_exhaustive(m).status == SearchStatus::Infeasible);
  CHECK(solve_best_first(m).status == SearchStatus::Infeasible);
  CHECK(solve_cabs(m).status == SearchStatus::Infeasible);
  CHECK(solve_labeling(m).status == SearchStatus::Infeasible);
}

TEST_CASE("exhaustive: cycle detection") {
  ModelBuilder b;
  auto x = b.element_var("x", 2, Pref::None, 0);
  Transition& t1 = b.transition("flip");
  t1.preconditions.push_back(cmp_elem(nodes::CmpOp::Eq, x, elem_const(0)));
  t1.elem_effects.push_back({x.slot, elem_const(1)});
  t1.weight = num_const(1.0);
  Transition& t2 = b.transition("flop");
  t2.preconditions.push_back(cmp_elem(nodes::CmpOp::Eq, x, elem_const(1)));
  t2.elem_effects.push_back({x.slot, elem_const(0)});
  t2.weight = num_const(1.0);
  b.base_case({cmp_elem(nodes::CmpOp::Eq, x, elem_const(2))}, num_const(0.0));
  Model m = b.build();
  CHECK_THROWS_AS(solve_exhaustive(m), CycleDetectedError);
}

TEST_CASE("chain model: all solvers agree and CABS proves at width 1") {
  Model m = chain_model({2.0, -3.0, 4.0}, 1.0);
  double want = 2.0 - 3.0 + 4.0 + 1.0;
  for (Pricer p : {Pricer::Exhaustive, Pricer::BestFirst, Pricer::Cabs, Pricer::Labeling}) {
    SearchResult r = solve(m, p, {});
    REQUIRE(r.status == SearchStatus::Optimal);
    CHECK(r.best().cost == Catch::Approx(want));
    CHECK(r.best().path.size() == 3);
  }
}

TEST_CASE("infeasible model: no base state reachable") {
  ModelBuilder b;
  auto x = b.element_var("x", 3, Pref::None, 0);
  Transition& t = b.transition("step");
  t.preconditions.push_back(cmp_elem(nodes::CmpOp::Eq, x, elem_const(0)));
  t.elem_effects.push_back({x.slot, elem_const(1)});
  t.weight = num_const(1.0);
  b.base_case({cmp_elem(nodes::CmpOp::Eq, x, elem_const(2))}, num_const(0.0));
  Model m = b.build();
  for (Pricer p : {Pricer::Exhaustive, Pricer::BestFirst, Pricer::Cabs, Pricer::Labeling})
    CHECK(solve(m, p, {}).status == SearchStatus::Infeasible);
}

TEST_CASE("time limit of zero reports limit-reached") {
  Model m = chain_model({1.0, 1.0, 1.0});
  SearchLimits limits;
  limits.time_limit = 0.0;
  CHECK(solve_cabs(m, limits).status == SearchStatus::LimitReached);
  CHECK(solve_best_first(m, limits).status == SearchStatus::LimitReached);
  CHECK(solve_labeling(m, limits).status == SearchStatus::LimitReached);
}

TEST_CASE("cost cutoff at the optimum: optimal status, no solutions") {
  Model m = chain_model({2.0, 3.0});
  SearchResult first = solve_labeling(m, {});
  REQUIRE(first.status == SearchStatus::Optimal);
  double opt = first.best().cost;
  SearchLimits cut;
  cut.cost_cutoff = opt;
  SearchResult again = solve_labeling(m, cut);
  CHECK(again.status == SearchStatus::Optimal);
  CHECK(again.solutions.empty());
  CHECK(again.best_bound == Catch::Approx(opt));
  // A cutoff strictly above the optimum still finds it.
  cut.cost_cutoff = opt + 1.0;
  SearchResult found = solve_labeling(m, cut);
  REQUIRE(found.status == SearchStatus::Optimal);
  CHECK(found.best().cost == Catch::Approx(opt));
}

TEST_CASE("labeling returns the strictly improving solution set") {
  // Two routes to the base: an expensive short one and a cheaper long one.
  ModelBuilder b;
  auto pos = b.element_var("pos", 3, Pref::None, 0);
  Transition& quick = b.transition("quick");
  quick.preconditions.push_back(cmp_elem(nodes::CmpOp::Eq, pos, elem_const(0)));
  quick.elem_effects.push_back({pos.slot, elem_const(3)});
  quick.weight = num_const(5.0);
  Transition& slow1 = b.transition("slow1");
  slow1.preconditions.push_back(cmp_elem(nodes::CmpOp::Eq, pos, elem_const(0)));
  slow1.elem_effects.push_back({pos.slot, elem_const(1)});
  slow1.weight = num_const(1.0);
  Transition& slow2 = b.transition("slow2");
  slow2.preconditions.push_back(cmp_elem(nodes::CmpOp::Eq, pos, elem_const(1)));
  slow2.elem_effects.push_back({pos.slot, elem_const(3)});
  slow2.weight = num_const(1.0);
  b.base_case({cmp_elem(nodes::CmpOp::Eq, pos, elem_const(3))}, num_const(0.0));
  Model m = b.build();
  SearchResult r = solve_labeling(m, {});
  REQUIRE(r.status == SearchStatus::Optimal);
  CHECK(r.best().cost == Catch::Approx(2.0));
  for (size_t i = 1; i < r.solutions.size(); ++i)
    CHECK(r.solutions[i].cost < r.solutions[i - 1].cost - 1e-12);
  CHECK(r.best_bound == Catch::Approx(2.0));
}

TEST_CASE("solver cross-agreement on random acyclic models") {
  std::mt19937_64 rng(314159);
  int infeasible_seen = 0;
  for (int trial = 0; trial < 150; ++trial) {
    Model m = random_model(rng);
    auto oracle = enumerate_optimum(m, m.target);
    SearchResult ex = solve_exhaustive(m);
    if (!oracle) {
      ++infeasible_seen;
      CHECK(ex.status == SearchStatus::Infeasible);
    } else {
      REQUIRE(ex.status == SearchStatus::Optimal);
      CHECK(ex.best().cost == Catch::Approx(*oracle));
      // Reported path must reproduce the reported cost.
      CHECK(path_cost(m, ex.best().path) == Catch::Approx(ex.best().cost));
    }
    for (Pricer p : {Pricer::BestFirst, Pricer::Cabs, Pricer::Labeling}) {
      SearchResult r = solve(m, p, {});
      if (!oracle) {
        CHECK(r.status == SearchStatus::Infeasible);
      } else {
        REQUIRE(r.status == SearchStatus::Optimal);
        CHECK(r.best().cost == Catch::Approx(*oracle));
        CHECK(path_cost(m, r.best().path) == Catch::Approx(r.best().cost));
      }
    }
  }
  CHECK(infeasible_seen > 0);  // the generator must exercise both verdicts
}

TEST_CASE("disabling dominance or bound pruning never changes the optimum") {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 60; ++trial) {
    Model m = random_model(rng);
    SearchLimits plain;
    SearchLimits no_dom;
    no_dom.use_dominance = false;
    SearchLimits no_bound;
    no_bound.use_dual_bounds = false;
    for (Pricer p : {Pricer::BestFirst, Pricer::Cabs, Pricer::Labeling}) {
      SearchResult a = solve(m, p, plain);
      SearchResult bres = solve(m, p, no_dom);
      SearchResult c = solve(m, p, no_bound);
      CHECK(a.status == bres.status);
      CHECK(a.status == c.status);
      if (a.status == SearchStatus::Optimal && !a.solutions.empty()) {
        CHECK(a.best().cost == Catch::Approx(bres.best().cost));
        CHECK(a.best().cost == Catch::Approx(c.best().cost));
      }
    }
  }
}

TEST_CASE("dominance frontier invariant under random insert sequences") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 40; ++trial) {
    Model m = random_model(rng);
    detail::DominanceFrontier frontier(m);
    // Generate states by random walks and insert with random g-values,
    // mimicking the solver protocol.
    for (int walk = 0; walk < 30; ++walk) {
      State s = m.target;
      int steps = static_cast<int>(rng() % 5);
      for (int k = 0; k < steps; ++k) {
        auto apps = applicable_transitions(m, s);
        if (apps.empty()) break;
        s = apply(m, m.transitions[static_cast<size_t>(apps[rng() % apps.size()])], s);
      }
      double g = static_cast<double>(rng() % 20);
      if (!frontier.covered(s, g)) {
        frontier.evict_dominated(s, g, [](int) {});
        frontier.insert(s, g, -1);
      }
      REQUIRE(frontier.invariant_holds());
    }
  }
}

TEST_CASE("stats are populated") {
  Model m = chain_model({1.0, 1.0});
  SearchResult r = solve_best_first(m, {});
  CHECK(r.stats.expanded > 0);
  CHECK(r.stats.generated > 0);
  CHECK(r.stats.wall_time >= 0.0);
  SearchLimits collect;
  collect.collect_visited = true;
  SearchResult rv = solve_labeling(m, collect);
  CHECK(rv.visited.size() == rv.stats.expanded);
}
