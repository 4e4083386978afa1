#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bpkit/expr.hpp"
#include "bpkit/model.hpp"

using namespace bpkit;

namespace {

// Independent oracle: exact 0-1 knapsack optimum by subset enumeration,
// restricted to positive-profit items like the bound under test.
double exact_knapsack(const std::vector<uint32_t>& items, double capacity,
                      const std::vector<double>& profits, const std::vector<double>& weights) {
  double best = 0.0;
  size_t n = items.size();
  for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
    double p = 0.0, w = 0.0;
    for (size_t i = 0; i < n; ++i)
      if (mask >> i & 1) {
        if (profits[items[i]] <= 0.0) goto next;
        p += profits[items[i]];
        w += weights[items[i]];
      }
    if (w <= capacity) best = std::max(best, p);
  next:;
  }
  return best;
}

Bitset make_set(uint32_t universe, std::initializer_list<uint32_t> members) {
  Bitset b(universe);
  for (uint32_t m : members) b.add(m);
  return b;
}

}  // namespace

TEST_CASE("bitset basics") {
  Bitset a = make_set(70, {0, 3, 64, 69});
  CHECK(a.count() == 4);
  CHECK(a.contains(64));
  CHECK(!a.contains(1));
  Bitset b = make_set(70, {3, 69});
  CHECK(b.subset_of(a));
  CHECK(!a.subset_of(b));
  CHECK((a - b) == make_set(70, {0, 64}));
  CHECK((a & b) == b);
  CHECK((a | b) == a);
  Bitset c = make_set(70, {});
  CHECK(c.empty());
  CHECK(c.complement().count() == 70);
  CHECK(a.members() == std::vector<uint32_t>{0, 3, 64, 69});
}

TEST_CASE("fractional knapsack: stated examples") {
  // Empty item set.
  CHECK(fractional_knapsack(Bitset(4), 10.0, std::vector<double>(4, 1.0),
                            std::vector<double>(4, 1.0)) == 0.0);
  // Oracle-derived: one item fractional. LP relaxation packs item 0 whole
  // (ratio 2) and half of item 1 (ratio 1): 6 + 4/4*2 = 8.
  {
    std::vector<double> p{6, 4}, w{3, 4};
    CHECK(fractional_knapsack(make_set(2, {0, 1}), 5.0, p, w) == Catch::Approx(8.0));
  }
  // Item 0 dropped for nonpositive profit; item 1 half included.
  {
    std::vector<double> p{0, 5}, w{1, 2};
    CHECK(fractional_knapsack(make_set(2, {0, 1}), 1.0, p, w) == Catch::Approx(2.5));
  }
}

TEST_CASE("fractional knapsack: edge rules") {
  std::vector<double> p{3, 7}, w{2, 0};
  // Zero-weight positive-profit items are packed unconditionally.
  CHECK(fractional_knapsack(make_set(2, {0, 1}), 1.0, p, w) == Catch::Approx(7.0 + 1.5));
  // Nonpositive capacity yields 0.
  CHECK(fractional_knapsack(make_set(2, {0, 1}), 0.0, p, w) == 0.0);
  CHECK(fractional_knapsack(make_set(2, {0, 1}), -3.0, p, w) == 0.0);
  // Short lists are rejected.
  std::vector<double> shortp{1.0};
  CHECK_THROWS_AS(fractional_knapsack(make_set(2, {1}), 1.0, shortp, shortp),
                  LengthMismatchError);
}

TEST_CASE("fractional knapsack: admissibility and monotonicity on random data") {
  std::mt19937_64 rng(20240817);
  for (int trial = 0; trial < 1000; ++trial) {
    uint32_t n = 1 + static_cast<uint32_t>(rng() % 12);
    std::vector<double> profits(n), weights(n);
    std::vector<uint32_t> items;
    Bitset set(n);
    for (uint32_t i = 0; i < n; ++i) {
      profits[i] = static_cast<double>(rng() % 51);
      weights[i] = static_cast<double>(1 + rng() % 20);
      set.add(i);
      items.push_back(i);
    }
    double cap = static_cast<double>(1 + rng() % 60);
    double bound = fractional_knapsack(set, cap, profits, weights);
    double exact = exact_knapsack(items, cap, profits, weights);
    CHECK(bound >= exact - 1e-9);

    // Equality whenever the greedy prefix fills the capacity exactly.
    std::vector<uint32_t> order;
    for (uint32_t i = 0; i < n; ++i)
      if (profits[i] > 0) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
      double ra = profits[a] * weights[b], rb = profits[b] * weights[a];
      if (ra != rb) return ra > rb;
      return a < b;
    });
    double used = 0.0;
    bool fills = false;
    for (uint32_t i : order) {
      if (used + weights[i] > cap) break;
      used += weights[i];
      if (used == cap) fills = true;
    }
    if (fills && used == cap) CHECK(bound == Catch::Approx(exact));

    // Monotone in capacity and in any single profit.
    CHECK(fractional_knapsack(set, cap + 5.0, profits, weights) >= bound - 1e-12);
    uint32_t bump = static_cast<uint32_t>(rng() % n);
    auto profits2 = profits;
    profits2[bump] += 3.0;
    CHECK(fractional_knapsack(set, cap, profits2, weights) >= bound - 1e-12);
  }
}

TEST_CASE("expression evaluation over a state") {
  ModelBuilder b;
  auto q = b.numeric_var("q", Pref::None, 4.0);
  auto r = b.set_var("R", 8, Pref::None, make_set(8, {1, 2, 5}));
  auto i = b.element_var("i", 8, Pref::None, 2);
  int lw = b.numeric_table("l", {0, 1, 3, 9, 5, 6, 7, 8}, {8});
  int small = b.numeric_table("small", {0, 1}, {2});
  Model m = b.build();
  EvalCtx ctx = make_ctx(m, m.target);

  SECTION("numeric arithmetic with a table lookup: q + l_j, j = 2") {
    NumericExpr e = q.expr() + b.num_at(lw, elem_const(2));
    CHECK(e.eval(ctx) == 7.0);
  }
  SECTION("set difference: R \\ {j}, j = 5") {
    SetExpr e = set_remove(r, elem_const(5));
    CHECK(e.eval(ctx) == make_set(8, {1, 2}));
  }
  SECTION("filter with a state-independent predicate keeps x >= 2") {
    SetExpr src = set_const(make_set(8, {1, 2, 3}));
    SetExpr e = set_filter(src, cmp_elem(nodes::CmpOp::Le, elem_const(2), elem_param()));
    CHECK(e.eval(ctx) == make_set(8, {2, 3}));
  }
  SECTION("filter predicate may read the state") {
    // keep k with l_k <= q
    SetExpr e = set_filter(r, b.num_at(lw, elem_param()) <= q.expr());
    CHECK(e.eval(ctx) == make_set(8, {1, 2}));
  }
  SECTION("conditions") {
    CHECK(member(elem_const(2), r).eval(ctx));
    CHECK(!member(elem_const(4), r).eval(ctx));
    CHECK((q.expr() <= 4.0).eval(ctx));
    CHECK(!(q.expr() < 4.0).eval(ctx));
    CHECK((i.expr() == elem_const(2)).eval(ctx));
    CHECK(is_empty(set_const(Bitset(8))).eval(ctx));
    CHECK((cond_const(false) || cond_const(true)).eval(ctx));
    CHECK(!(cond_const(false) && cond_const(true)).eval(ctx));
  }
  SECTION("division by zero and range errors are reported") {
    NumericExpr bad = q.expr() / num_const(0.0);
    CHECK_THROWS_AS(bad.eval(ctx), EvaluationError);
    NumericExpr oob = b.num_at(small, elem_const(7));
    CHECK_THROWS_AS(oob.eval(ctx), EvaluationError);
  }
  SECTION("evaluation is pure") {
    SetExpr e = set_filter(r, b.num_at(lw, elem_param()) <= q.expr());
    CHECK(e.eval(ctx) == e.eval(ctx));
  }
  SECTION("set sum over members") {
    NumericExpr e = set_sum(r, {0, -2, 1, 0, 0, -3, 0, 0});
    CHECK(e.eval(ctx) == Catch::Approx(-4.0));
  }
  SECTION("if-then-else and min/max/floor") {
    NumericExpr e = num_ite(q.expr() <= 4.0, num_const(1), num_const(2));
    CHECK(e.eval(ctx) == 1.0);
    CHECK(num_min(q.expr(), num_const(3)).eval(ctx) == 3.0);
    CHECK(num_max(q.expr(), num_const(9)).eval(ctx) == 9.0);
    CHECK(num_floor(q.expr() / num_const(3)).eval(ctx) == 1.0);
  }
}

TEST_CASE("filter equals per-element scan on random sets and predicates") {
  std::mt19937_64 rng(7);
  ModelBuilder b;
  auto q = b.numeric_var("q", Pref::None, 10.0);
  std::vector<double> vals(32);
  for (auto& v : vals) v = static_cast<double>(rng() % 20);
  int tab = b.numeric_table("v", vals, {32});
  Model m = b.build();
  EvalCtx ctx = make_ctx(m, m.target);
  for (int trial = 0; trial < 200; ++trial) {
    Bitset s(32);
    for (uint32_t e = 0; e < 32; ++e)
      if (rng() % 2) s.add(e);
    double cut = static_cast<double>(rng() % 20);
    SetExpr f = set_filter(set_const(s), b.num_at(tab, elem_param()) <= num_const(cut));
    Bitset got = f.eval(ctx);
    Bitset want(32);
    s.for_each([&](uint32_t e) {
      if (vals[e] <= cut) want.add(e);
    });
    REQUIRE(got == want);
  }
}
