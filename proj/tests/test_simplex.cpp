#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "bpkit/simplex.hpp"

using namespace bpkit;

namespace {

// Residual checks shared by the randomized audits.
void audit_optimal(const LinearProgram& lp, const LpSolution& sol) {
  REQUIRE(sol.status == LpStatus::Optimal);
  // Primal feasibility.
  for (int i = 0; i < lp.num_rows(); ++i) {
    double lhs = 0.0;
    for (int j = 0; j < lp.num_cols(); ++j) lhs += lp.coeff(i, j) * sol.primal[j];
    double tol = 1e-7 * (1.0 + std::abs(lp.rhs(i)));
    switch (lp.sense(i)) {
      case RowSense::Ge: CHECK(lhs >= lp.rhs(i) - tol); break;
      case RowSense::Le: CHECK(lhs <= lp.rhs(i) + tol); break;
      case RowSense::Eq: CHECK(std::abs(lhs - lp.rhs(i)) <= tol); break;
    }
  }
  for (int j = 0; j < lp.num_cols(); ++j) {
    CHECK(sol.primal[j] >= -1e-9);
    CHECK(sol.primal[j] <= lp.upper(j) + 1e-9);
  }
  // Strong duality.
  double dual_obj = 0.0;
  for (int i = 0; i < lp.num_rows(); ++i) dual_obj += sol.duals[i] * lp.rhs(i);
  CHECK(std::abs(sol.objective - dual_obj) <= 1e-7 * (1.0 + std::abs(sol.objective)));
  // Dual sign conventions.
  for (int i = 0; i < lp.num_rows(); ++i) {
    if (lp.sense(i) == RowSense::Ge) CHECK(sol.duals[i] >= -1e-9);
    if (lp.sense(i) == RowSense::Le) CHECK(sol.duals[i] <= 1e-9);
  }
  // Reduced-cost nonnegativity away from upper bounds.
  for (int j = 0; j < lp.num_cols(); ++j) {
    double rc = lp.cost(j);
    for (int i = 0; i < lp.num_rows(); ++i) rc -= lp.coeff(i, j) * sol.duals[i];
    if (sol.primal[j] < lp.upper(j) - 1e-9) CHECK(rc >= -1e-7);
  }
}

}  // namespace

TEST_CASE("single-variable covering LP") {
  LinearProgram lp;
  lp.add_row(RowSense::Ge, 1.0);
  lp.add_column(1.0, {{0, 1.0}});
  auto [sol, basis] = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.primal[0] == Catch::Approx(1.0));
  CHECK(sol.duals[0] == Catch::Approx(1.0));
  CHECK(sol.objective == Catch::Approx(1.0));
}

TEST_CASE("infeasible: -x >= 1 with x >= 0") {
  LinearProgram lp;
  lp.add_row(RowSense::Ge, 1.0);
  lp.add_column(0.0, {{0, -1.0}});
  auto [sol, basis] = solve_lp(lp);
  CHECK(sol.status == LpStatus::Infeasible);
}

TEST_CASE("unbounded: min -x with no rows") {
  LinearProgram lp;
  lp.add_column(-1.0, {});
  auto [sol, basis] = solve_lp(lp);
  CHECK(sol.status == LpStatus::Unbounded);
}

TEST_CASE("negative rhs rows are normalized internally") {
  // x <= 3 written as -x >= -3.
  LinearProgram lp;
  lp.add_row(RowSense::Ge, -3.0);
  lp.add_row(RowSense::Ge, 1.0);
  lp.add_column(-1.0, {{0, -1.0}, {1, 1.0}});
  auto [sol, basis] = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.primal[0] == Catch::Approx(3.0));
  CHECK(sol.objective == Catch::Approx(-3.0));
  audit_optimal(lp, sol);
}

TEST_CASE("column addition warm start") {
  LinearProgram lp;
  lp.add_row(RowSense::Ge, 1.0);
  lp.add_column(5.0, {{0, 1.0}});
  auto [sol1, basis1] = solve_lp(lp);
  REQUIRE(sol1.status == LpStatus::Optimal);
  CHECK(sol1.objective == Catch::Approx(5.0));

  SECTION("a cheaper covering column weakly decreases the objective") {
    lp.add_column(2.0, {{0, 1.0}});
    auto [sol2, basis2] = solve_lp(lp, &basis1);
    REQUIRE(sol2.status == LpStatus::Optimal);
    CHECK(sol2.objective == Catch::Approx(2.0));
    CHECK(sol2.objective <= sol1.objective + 1e-9);
  }
  SECTION("a duplicate column keeps the objective") {
    lp.add_column(5.0, {{0, 1.0}});
    auto [sol2, basis2] = solve_lp(lp, &basis1);
    REQUIRE(sol2.status == LpStatus::Optimal);
    CHECK(sol2.objective == Catch::Approx(sol1.objective));
  }
}

TEST_CASE("negative-reduced-cost column strictly improves a 2-row LP") {
  // Hand-enumerated vertices: with columns a=(1,0), b=(0,1), costs 3 and 2,
  // rows x >= 1 (twice), the optimum is 5. Adding c=(1,1) with cost 4
  // (reduced cost 4 - 3 - 2 = -1) moves the optimum to 4.
  LinearProgram lp;
  lp.add_row(RowSense::Ge, 1.0);
  lp.add_row(RowSense::Ge, 1.0);
  lp.add_column(3.0, {{0, 1.0}});
  lp.add_column(2.0, {{1, 1.0}});
  auto [sol1, basis1] = solve_lp(lp);
  REQUIRE(sol1.status == LpStatus::Optimal);
  CHECK(sol1.objective == Catch::Approx(5.0));
  double rc = 4.0 - sol1.duals[0] - sol1.duals[1];
  CHECK(rc < 0);
  lp.add_column(4.0, {{0, 1.0}, {1, 1.0}});
  auto [sol2, basis2] = solve_lp(lp, &basis1);
  REQUIRE(sol2.status == LpStatus::Optimal);
  CHECK(sol2.objective == Catch::Approx(4.0));
  audit_optimal(lp, sol2);
}

TEST_CASE("upper bounds deactivate and reactivate columns") {
  LinearProgram lp;
  lp.add_row(RowSense::Ge, 1.0);
  lp.add_column(1.0, {{0, 1.0}});
  lp.add_column(3.0, {{0, 1.0}});
  auto [sol1, basis1] = solve_lp(lp);
  REQUIRE(sol1.status == LpStatus::Optimal);
  CHECK(sol1.primal[0] == Catch::Approx(1.0));

  SECTION("fixing the basic column to 0 forces the alternative") {
    lp.set_column_upper_bound(0, 0.0);
    auto [sol2, basis2] = solve_lp(lp, &basis1);
    REQUIRE(sol2.status == LpStatus::Optimal);
    CHECK(sol2.primal[0] == Catch::Approx(0.0));
    CHECK(sol2.primal[1] == Catch::Approx(1.0));
    CHECK(sol2.objective == Catch::Approx(3.0));
    lp.set_column_upper_bound(0, kInf);
    auto [sol3, basis3] = solve_lp(lp, &basis2);
    REQUIRE(sol3.status == LpStatus::Optimal);
    CHECK(sol3.objective == Catch::Approx(1.0));
  }
  SECTION("fixing the unique covering column makes the LP infeasible") {
    LinearProgram lone;
    lone.add_row(RowSense::Ge, 1.0);
    lone.add_column(1.0, {{0, 1.0}});
    lone.set_column_upper_bound(0, 0.0);
    auto [sol2, basis2] = solve_lp(lone);
    CHECK(sol2.status == LpStatus::Infeasible);
  }
}

TEST_CASE("equality rows carry free duals") {
  LinearProgram lp;
  lp.add_row(RowSense::Eq, 2.0);
  lp.add_column(-1.0, {{0, 1.0}});
  auto [sol, basis] = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.primal[0] == Catch::Approx(2.0));
  CHECK(sol.duals[0] == Catch::Approx(-1.0));
  audit_optimal(lp, sol);
}

TEST_CASE("dump format") {
  LinearProgram lp;
  lp.add_row(RowSense::Ge, 1.0);
  lp.add_row(RowSense::Le, 4.0);
  lp.add_column(1.5, {{0, 1.0}, {1, 2.0}});
  std::ostringstream os;
  lp.dump(os);
  CHECK(os.str() == "min 1.5\n1 >= 1\n2 <= 4\n");
}

TEST_CASE("random LPs: duality, feasibility, and dual audits") {
  std::mt19937_64 rng(9001);
  int optimal_seen = 0;
  for (int trial = 0; trial < 120; ++trial) {
    LinearProgram lp;
    int m = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < m; ++i) {
      RowSense sense = RowSense::Ge;
      uint64_t pick = rng() % 4;
      if (pick == 1) sense = RowSense::Le;
      if (pick == 2) sense = RowSense::Eq;
      lp.add_row(sense, static_cast<double>(rng() % 5));
    }
    int n = 1 + static_cast<int>(rng() % 10);
    for (int j = 0; j < n; ++j) {
      std::vector<std::pair<int, double>> coeffs;
      for (int i = 0; i < m; ++i)
        if (rng() % 2) coeffs.push_back({i, static_cast<double>(rng() % 3)});
      lp.add_column(static_cast<double>(1 + rng() % 10), coeffs);
    }
    auto [sol, basis] = solve_lp(lp);
    if (sol.status == LpStatus::Optimal) {
      ++optimal_seen;
      audit_optimal(lp, sol);
    }
  }
  CHECK(optimal_seen > 30);
}

TEST_CASE("warm and cold solves agree across random column additions") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    LinearProgram lp;
    int m = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < m; ++i) lp.add_row(RowSense::Ge, 1.0 + static_cast<double>(rng() % 3));
    // Start feasible: one covering column.
    {
      std::vector<std::pair<int, double>> cover;
      for (int i = 0; i < m; ++i) cover.push_back({i, 1.0});
      lp.add_column(static_cast<double>(5 + rng() % 5), cover);
    }
    Basis basis;
    auto [sol, b0] = solve_lp(lp);
    basis = b0;
    REQUIRE(sol.status == LpStatus::Optimal);
    int additions = 1 + static_cast<int>(rng() % 6);
    for (int a = 0; a < additions; ++a) {
      std::vector<std::pair<int, double>> coeffs;
      for (int i = 0; i < m; ++i)
        if (rng() % 2) coeffs.push_back({i, 1.0 + static_cast<double>(rng() % 2)});
      lp.add_column(static_cast<double>(1 + rng() % 9), coeffs);
      auto [warm_sol, wb] = solve_lp(lp, &basis);
      basis = wb;
      auto [cold_sol, cb] = solve_lp(lp);
      REQUIRE(warm_sol.status == LpStatus::Optimal);
      REQUIRE(cold_sol.status == LpStatus::Optimal);
      CHECK(std::abs(warm_sol.objective - cold_sol.objective) <= 1e-7);
      audit_optimal(lp, warm_sol);
    }
  }
}
