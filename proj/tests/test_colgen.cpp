#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "bpkit/colgen.hpp"

using namespace bpkit;

namespace {

// A deliberately small bin-packing pricing adapter, written by hand so the
// column-generation loop is exercised against something independent of the
// production problem builders. Items are included/excluded one by one; the
// state is (next item g, remaining capacity q, reachable items R).
class MiniBppAdapter : public PricingAdapter {
 public:
  MiniBppAdapter(std::vector<double> weights, double capacity)
      : weights_(std::move(weights)), capacity_(capacity) {}

  Model rebuild(const std::vector<double>& duals) override {
    uint32_t n = static_cast<uint32_t>(weights_.size());
    ModelBuilder b;
    Bitset all(n);
    for (uint32_t i = 0; i < n; ++i)
      if (weights_[i] <= capacity_) all.add(i);
    auto g = b.element_var("g", n, Pref::None, 0);
    auto q = b.numeric_var("q", Pref::Greater, capacity_);
    auto R = b.set_var("R", n, Pref::Greater, all);
    int w = b.numeric_table("w", weights_, {n});
    std::vector<double> negpi(n);
    for (uint32_t i = 0; i < n; ++i) negpi[i] = -duals[i];
    int npi = b.numeric_table("npi", negpi, {n});

    Transition& inc = b.transition("include");
    inc.preconditions.push_back(member(g, R));
    inc.preconditions.push_back(b.num_at(w, g) <= q.expr());
    inc.elem_effects.push_back({g.slot, elem_add(g, 1)});
    inc.num_effects.push_back({q.slot, q.expr() - b.num_at(w, g)});
    inc.set_effects.push_back(
        {R.slot, set_filter(R, b.num_at(w, elem_param()) <= q.expr() - b.num_at(w, g))});
    inc.weight = b.num_at(npi, g);

    Transition& exc = b.transition("exclude");
    exc.preconditions.push_back(cmp_elem(nodes::CmpOp::Lt, g, elem_const(n)));
    exc.elem_effects.push_back({g.slot, elem_add(g, 1)});
    exc.set_effects.push_back({R.slot, set_remove(R, g)});
    exc.weight = num_const(0.0);

    b.base_case({cmp_elem(nodes::CmpOp::Eq, g, elem_const(n))}, num_const(0.0));
    std::vector<NumericExpr> profits, ws;
    for (uint32_t i = 0; i < n; ++i) {
      profits.push_back(num_const(duals[i]));
      ws.push_back(num_const(weights_[i]));
    }
    b.dual_bound(-knapsack_bound(R, q.expr(), std::move(profits), std::move(ws)));
    return b.build();
  }

  Column extract(const Model& model, const std::vector<int>& path) const override {
    Column c;
    c.cost = 1.0;
    auto states = replay(model, path);
    for (size_t k = 0; k < path.size(); ++k)
      if (model.transitions[static_cast<size_t>(path[k])].name == "include")
        c.rows.push_back({static_cast<int>(states[k].elems[0]), 1});
    std::sort(c.rows.begin(), c.rows.end());
    for (auto [r, v] : c.rows) c.seq.push_back(r);
    return c;
  }

  double offset(const std::vector<double>&) const override { return 1.0; }

 private:
  std::vector<double> weights_;
  double capacity_;
};

MasterProblem seed_master(const std::vector<double>& weights) {
  MasterProblem master;
  for (size_t i = 0; i < weights.size(); ++i) master.lp().add_row(RowSense::Ge, 1.0);
  for (size_t i = 0; i < weights.size(); ++i) {
    Column c;
    c.cost = 1.0;
    c.rows = {{static_cast<int>(i), 1}};
    c.seq = {static_cast<int>(i)};
    master.add(std::move(c));
  }
  for (size_t i = 0; i < weights.size(); ++i) master.add_artificial(static_cast<int>(i));
  return master;
}

// Oracle: the master LP over every feasible pattern, solved directly.
double full_enumeration_lp(const std::vector<double>& weights, double capacity) {
  size_t n = weights.size();
  LinearProgram lp;
  for (size_t i = 0; i < n; ++i) lp.add_row(RowSense::Ge, 1.0);
  for (size_t mask = 1; mask < (size_t{1} << n); ++mask) {
    double total = 0.0;
    std::vector<std::pair<int, double>> coeffs;
    for (size_t i = 0; i < n; ++i)
      if (mask >> i & 1) {
        total += weights[i];
        coeffs.push_back({static_cast<int>(i), 1.0});
      }
    if (total <= capacity) lp.add_column(1.0, coeffs);
  }
  auto [sol, basis] = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  return sol.objective;
}

std::vector<std::vector<int>> feasible_patterns(const std::vector<double>& weights,
                                                double capacity) {
  std::vector<std::vector<int>> out;
  size_t n = weights.size();
  for (size_t mask = 1; mask < (size_t{1} << n); ++mask) {
    double total = 0.0;
    std::vector<int> items;
    for (size_t i = 0; i < n; ++i)
      if (mask >> i & 1) {
        total += weights[i];
        items.push_back(static_cast<int>(i));
      }
    if (total <= capacity) out.push_back(std::move(items));
  }
  return out;
}

}  // namespace

TEST_CASE("reduced cost computation") {
  Column c;
  c.cost = 3.0;
  c.rows = {{0, 1}, {2, 1}};
  SECTION("zero duals give the raw cost") {
    CHECK(reduced_cost(c, {0, 0, 0}) == Catch::Approx(3.0));
  }
  SECTION("dot product against the duals") {
    CHECK(reduced_cost(c, {1.0, 2.0, 0.5}) == Catch::Approx(1.5));
  }
  SECTION("rows outside the dual vector are rejected") {
    CHECK_THROWS_AS(reduced_cost(c, {1.0}), DimensionMismatchError);
  }
}

TEST_CASE("single item converges immediately") {
  std::vector<double> w{3.0};
  MasterProblem master = seed_master(w);
  MiniBppAdapter adapter(w, 5.0);
  ColgenConfig cfg;
  ColgenResult r = run_column_generation(master, adapter, cfg);
  CHECK(r.status == ColgenStatus::Converged);
  CHECK(r.lp_value == Catch::Approx(1.0));
  CHECK(r.min_reduced_cost_at_exit >= -kRcEps);
}

TEST_CASE("colgen equals the fully enumerated master on random bin packing") {
  std::mt19937_64 rng(424242);
  for (int trial = 0; trial < 12; ++trial) {
    size_t n = 3 + rng() % 6;  // up to 8 items
    double capacity = static_cast<double>(8 + rng() % 8);
    std::vector<double> w(n);
    for (auto& x : w) x = static_cast<double>(1 + rng() % 8);
    for (auto& x : w) x = std::min(x, capacity);
    double want = full_enumeration_lp(w, capacity);

    for (Pricer pricer :
         {Pricer::Labeling, Pricer::BestFirst, Pricer::Cabs, Pricer::Exhaustive}) {
      MasterProblem master = seed_master(w);
      MiniBppAdapter adapter(w, capacity);
      ColgenConfig cfg;
      cfg.pricer = pricer;
      ColgenResult r = run_column_generation(master, adapter, cfg);
      REQUIRE(r.status == ColgenStatus::Converged);
      CHECK(r.lp_value == Catch::Approx(want).margin(1e-6));

      // Termination certificate: no feasible pattern prices negatively.
      for (const auto& items : feasible_patterns(w, capacity)) {
        double rc = 1.0;
        for (int i : items) rc -= r.duals[static_cast<size_t>(i)];
        CHECK(rc >= -1e-5);
      }
      // Complementary slackness through the master solution.
      for (int j = 0; j < master.num_columns(); ++j) {
        if (r.last_lp.primal[static_cast<size_t>(j)] > 1e-6 && !master.column(j).artificial) {
          CHECK(reduced_cost(master.column(j), r.duals) == Catch::Approx(0.0).margin(1e-7));
        }
      }
    }
  }
}

TEST_CASE("lp value is non-increasing across iterations") {
  std::vector<double> w{4, 3, 3, 2, 2, 5};
  MasterProblem master = seed_master(w);
  MiniBppAdapter adapter(w, 7.0);
  ColgenConfig cfg;
  cfg.verbosity = 1;
  std::ostringstream trace;
  cfg.diag = &trace;
  ColgenResult r = run_column_generation(master, adapter, cfg);
  REQUIRE(r.status == ColgenStatus::Converged);
  // Parse the per-iteration trace lines.
  std::istringstream in(trace.str());
  std::string line;
  double prev = kInf;
  int lines = 0;
  while (std::getline(in, line)) {
    auto pos = line.find("lp=");
    REQUIRE(pos != std::string::npos);
    double lp_val = std::stod(line.substr(pos + 3));
    CHECK(lp_val <= prev + 1e-9);
    prev = lp_val;
    ++lines;
  }
  CHECK(lines == r.iterations);
}

TEST_CASE("iteration limit reports the last valid lp value") {
  std::vector<double> w{4, 3, 3, 2, 2, 5, 1, 6};
  MasterProblem master = seed_master(w);
  MiniBppAdapter adapter(w, 7.0);
  ColgenConfig cfg;
  cfg.max_iterations = 1;
  cfg.max_columns_per_iter = 1;
  ColgenResult r = run_column_generation(master, adapter, cfg);
  CHECK(r.status == ColgenStatus::IterationLimit);
  CHECK(r.lp_value <= 8.0 + 1e-9);  // a valid RMP value
}
