// Vehicle routing with time windows, plain and cumulative-cost variants:
// Solomon parsing, arc preprocessing, the elementary and 2-cycle-free
// non-elementary pricing models, and most-fractional-arc branching.
#pragma once

#include <sstream>

#include "bpkit/problems/common.hpp"

namespace bpkit::problems {

struct RoutingInstance {
  int n = 0;  // customers; nodes 0 (depot), 1..n, n+1 (end depot)
  bool cumulative = false;
  double capacity = 0.0;
  int fleet_limit = 0;
  std::vector<double> load, ready, due, service;  // per node
  std::vector<double> dist;                       // (n+2)^2, integer-scaled
  std::vector<uint8_t> arcs;                      // adjacency after preprocessing
  std::vector<double> dstar;                      // node-weighted shortest times
  std::vector<double> din, dout;                  // min arc distance in/out per node

  int nodes() const { return n + 2; }
  double d(int i, int j) const {
    return dist[static_cast<size_t>(i) * static_cast<size_t>(nodes()) + static_cast<size_t>(j)];
  }
  bool arc(int i, int j) const {
    return arcs[static_cast<size_t>(i) * static_cast<size_t>(nodes()) + static_cast<size_t>(j)] != 0;
  }
};

// Window-infeasible arcs go first; the shortest-time matrix then satisfies
// dstar[j][k] <= min over m of dstar[j][m] + s_m + dstar[m][k], making
// t'(j) + s_j + dstar[j][k] <= b_k a valid reachability test.
inline void preprocess_routing(RoutingInstance& inst) {
  int nn = inst.nodes();
  auto idx = [nn](int i, int j) {
    return static_cast<size_t>(i) * static_cast<size_t>(nn) + static_cast<size_t>(j);
  };
  inst.arcs.assign(static_cast<size_t>(nn) * static_cast<size_t>(nn), 0);
  for (int i = 0; i <= inst.n; ++i)
    for (int j = 1; j <= inst.n + 1; ++j) {
      if (i == j) continue;
      if (inst.ready[static_cast<size_t>(i)] + inst.service[static_cast<size_t>(i)] +
              inst.d(i, j) >
          inst.due[static_cast<size_t>(j)])
        continue;
      inst.arcs[idx(i, j)] = 1;
    }
  inst.dstar.assign(static_cast<size_t>(nn) * static_cast<size_t>(nn), kInf);
  for (int i = 0; i < nn; ++i) inst.dstar[idx(i, i)] = 0.0;
  for (int i = 0; i < nn; ++i)
    for (int j = 0; j < nn; ++j)
      if (i != j && inst.arcs[idx(i, j)]) inst.dstar[idx(i, j)] = inst.d(i, j);
  for (int m = 0; m < nn; ++m)
    for (int i = 0; i < nn; ++i) {
      if (inst.dstar[idx(i, m)] == kInf) continue;
      for (int j = 0; j < nn; ++j) {
        double via = inst.dstar[idx(i, m)] + inst.service[static_cast<size_t>(m)] +
                     inst.dstar[idx(m, j)];
        if (via < inst.dstar[idx(i, j)]) inst.dstar[idx(i, j)] = via;
      }
    }
  inst.din.assign(static_cast<size_t>(nn), kInf);
  inst.dout.assign(static_cast<size_t>(nn), kInf);
  for (int i = 0; i < nn; ++i)
    for (int j = 0; j < nn; ++j)
      if (i != j && inst.arcs[idx(i, j)]) {
        inst.din[static_cast<size_t>(j)] = std::min(inst.din[static_cast<size_t>(j)], inst.d(i, j));
        inst.dout[static_cast<size_t>(i)] = std::min(inst.dout[static_cast<size_t>(i)], inst.d(i, j));
      }
}

namespace detail_routing {
inline void fill_distances(RoutingInstance& inst, const std::vector<double>& x,
                           const std::vector<double>& y) {
  int nn = inst.nodes();
  inst.dist.assign(static_cast<size_t>(nn) * static_cast<size_t>(nn), 0.0);
  for (int i = 0; i < nn; ++i)
    for (int j = 0; j < nn; ++j)
      inst.dist[static_cast<size_t>(i) * static_cast<size_t>(nn) + static_cast<size_t>(j)] =
          scaled_distance(x[static_cast<size_t>(i)], y[static_cast<size_t>(i)],
                          x[static_cast<size_t>(j)], y[static_cast<size_t>(j)]);
}
}  // namespace detail_routing

// Solomon layout: a two-number vehicle line (count, capacity), then
// seven-number customer rows (id x y demand ready due service); row id 0 is
// the depot. Times scale by ten to integers, matching the distances.
inline RoutingInstance parse_solomon(const std::string& text, bool cumulative,
                                     int max_customers = -1) {
  std::istringstream in(text);
  std::string line;
  bool have_vehicle = false;
  double fleet = 0, cap = 0;
  std::vector<std::array<double, 7>> rows;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> nums;
    double v;
    while (ls >> v) nums.push_back(v);
    if (!ls.eof()) continue;  // a non-numeric token: a header line
    if (nums.size() == 2 && !have_vehicle) {
      fleet = nums[0];
      cap = nums[1];
      have_vehicle = true;
    } else if (nums.size() == 7) {
      rows.push_back({nums[0], nums[1], nums[2], nums[3], nums[4], nums[5], nums[6]});
    }
  }
  if (!have_vehicle) throw ParseError("solomon: missing vehicle count/capacity line");
  if (rows.empty()) throw ParseError("solomon: no customer rows");
  if (max_customers >= 0 && static_cast<int>(rows.size()) > max_customers + 1)
    rows.resize(static_cast<size_t>(max_customers) + 1);

  RoutingInstance inst;
  inst.cumulative = cumulative;
  inst.capacity = cap;
  inst.fleet_limit = static_cast<int>(fleet);
  inst.n = static_cast<int>(rows.size()) - 1;
  int nn = inst.nodes();
  std::vector<double> x(static_cast<size_t>(nn)), y(static_cast<size_t>(nn));
  inst.load.assign(static_cast<size_t>(nn), 0.0);
  inst.ready.assign(static_cast<size_t>(nn), 0.0);
  inst.due.assign(static_cast<size_t>(nn), 0.0);
  inst.service.assign(static_cast<size_t>(nn), 0.0);
  for (int k = 0; k <= inst.n; ++k) {
    const auto& r = rows[static_cast<size_t>(k)];
    x[static_cast<size_t>(k)] = r[1];
    y[static_cast<size_t>(k)] = r[2];
    inst.load[static_cast<size_t>(k)] = r[3];
    inst.ready[static_cast<size_t>(k)] = r[4] * 10.0;
    inst.due[static_cast<size_t>(k)] = r[5] * 10.0;
    inst.service[static_cast<size_t>(k)] = r[6] * 10.0;
    if (r[4] > r[5]) throw SemanticError("solomon: window opens after it closes");
  }
  x[static_cast<size_t>(inst.n + 1)] = x[0];
  y[static_cast<size_t>(inst.n + 1)] = y[0];
  inst.ready[static_cast<size_t>(inst.n + 1)] = inst.ready[0];
  inst.due[static_cast<size_t>(inst.n + 1)] = inst.due[0];
  detail_routing::fill_distances(inst, x, y);
  preprocess_routing(inst);
  return inst;
}

inline RoutingInstance generate_routing(int n, uint64_t seed, bool cumulative) {
  Rng rng(seed ^ 0x7e157e15ull);
  RoutingInstance inst;
  inst.cumulative = cumulative;
  inst.n = n;
  inst.capacity = 25.0;
  inst.fleet_limit = n;
  int nn = inst.nodes();
  std::vector<double> x(static_cast<size_t>(nn)), y(static_cast<size_t>(nn));
  std::vector<std::pair<int, int>> used;
  for (int k = 0; k <= n; ++k) {
    int px, py;
    do {
      px = rng.irange(0, 40);
      py = rng.irange(0, 40);
    } while (std::find(used.begin(), used.end(), std::make_pair(px, py)) != used.end());
    used.push_back({px, py});
    x[static_cast<size_t>(k)] = px;
    y[static_cast<size_t>(k)] = py;
  }
  x[static_cast<size_t>(n + 1)] = x[0];
  y[static_cast<size_t>(n + 1)] = y[0];
  inst.load.assign(static_cast<size_t>(nn), 0.0);
  inst.ready.assign(static_cast<size_t>(nn), 0.0);
  inst.due.assign(static_cast<size_t>(nn), 0.0);
  inst.service.assign(static_cast<size_t>(nn), 0.0);
  detail_routing::fill_distances(inst, x, y);
  double horizon = 0.0;
  for (int j = 1; j <= n; ++j) {
    inst.load[static_cast<size_t>(j)] = rng.irange(1, 10);
    inst.service[static_cast<size_t>(j)] = rng.irange(10, 50);
    double open = rng.irange(0, 1200);
    double arrive = inst.d(0, j);
    inst.ready[static_cast<size_t>(j)] = open;
    inst.due[static_cast<size_t>(j)] = std::max(open, arrive) + rng.irange(200, 600);
    double back = std::max(arrive, open) + inst.service[static_cast<size_t>(j)] + inst.d(j, n + 1);
    horizon = std::max(horizon, back + 100.0);
    horizon = std::max(horizon, inst.due[static_cast<size_t>(j)] +
                                    inst.service[static_cast<size_t>(j)] + inst.d(j, n + 1));
  }
  inst.due[0] = horizon;
  inst.due[static_cast<size_t>(n + 1)] = horizon;
  preprocess_routing(inst);
  return inst;
}

class RoutingFamily : public ProblemFamily {
 public:
  explicit RoutingFamily(RoutingInstance inst) : inst_(std::move(inst)) {}
  const RoutingInstance& instance() const { return inst_; }

  ProblemKind kind() const override {
    return inst_.cumulative ? ProblemKind::CumVrptw : ProblemKind::Vrptw;
  }
  int fleet_row() const { return inst_.cumulative ? inst_.n : -1; }

  // The true master cost of a route given as a node sequence.
  double route_cost(const std::vector<int>& seq) const {
    double cost = 0.0, q = 0.0;
    for (size_t k = 0; k + 1 < seq.size(); ++k) {
      q += inst_.load[static_cast<size_t>(seq[k])];
      double leg = inst_.d(seq[k], seq[k + 1]);
      cost += inst_.cumulative ? q * leg : leg;
    }
    return cost;
  }

  Column make_route_column(const std::vector<int>& seq) const {
    Column c;
    c.seq = seq;
    c.cost = route_cost(seq);
    std::vector<int> count(static_cast<size_t>(inst_.n) + 1, 0);
    for (int node : seq)
      if (node >= 1 && node <= inst_.n) ++count[static_cast<size_t>(node)];
    for (int j = 1; j <= inst_.n; ++j)
      if (count[static_cast<size_t>(j)] > 0) c.rows.push_back({j - 1, count[static_cast<size_t>(j)]});
    if (fleet_row() >= 0) c.rows.push_back({fleet_row(), 1});
    std::sort(c.rows.begin(), c.rows.end());
    return c;
  }

  MasterProblem build_master() const override {
    MasterProblem master;
    for (int j = 1; j <= inst_.n; ++j) master.lp().add_row(RowSense::Ge, 1.0);
    if (inst_.cumulative)
      master.lp().add_row(RowSense::Le, static_cast<double>(inst_.fleet_limit));
    for (int j = 1; j <= inst_.n; ++j) {
      if (!single_customer_feasible(j)) continue;
      master.add(make_route_column({0, j, inst_.n + 1}));
    }
    for (int j = 0; j < inst_.n; ++j) master.add_artificial(j);
    return master;
  }

  bool single_customer_feasible(int j) const {
    if (!inst_.arc(0, j) || !inst_.arc(j, inst_.n + 1)) return false;
    if (inst_.load[static_cast<size_t>(j)] > inst_.capacity) return false;
    double arrive = std::max(inst_.d(0, j), inst_.ready[static_cast<size_t>(j)]);
    double back = arrive + inst_.service[static_cast<size_t>(j)] + inst_.d(j, inst_.n + 1);
    return back <= inst_.due[static_cast<size_t>(inst_.n + 1)];
  }

  // Arc deletions implied by a decision. Forcing (a, b) removes the other
  // arcs out of a and into b, except around the depots: many routes leave
  // node 0 and enter node n+1.
  bool arc_deleted(const BranchingDecision& d, int x, int y) const {
    if (d.kind == DecisionKind::ForbidArc) return x == d.a && y == d.b;
    if (d.kind != DecisionKind::ForceArc) return false;
    if (x == d.a && y != d.b && d.a != 0) return true;
    if (y == d.b && x != d.a && d.b != inst_.n + 1) return true;
    return false;
  }

  std::vector<uint8_t> edited_arcs(const std::vector<BranchingDecision>& decisions,
                                   bool allow_empty_route) const {
    std::vector<uint8_t> arcs = inst_.arcs;
    int nn = inst_.nodes();
    for (int x = 0; x < nn; ++x)
      for (int y = 0; y < nn; ++y) {
        size_t at = static_cast<size_t>(x) * static_cast<size_t>(nn) + static_cast<size_t>(y);
        if (!arcs[at]) continue;
        for (const auto& d : decisions)
          if (arc_deleted(d, x, y)) {
            arcs[at] = 0;
            break;
          }
      }
    if (!allow_empty_route)
      arcs[static_cast<size_t>(0) * static_cast<size_t>(nn) + static_cast<size_t>(inst_.n + 1)] = 0;
    return arcs;
  }

  std::unique_ptr<PricingAdapter> make_pricer(const std::vector<BranchingDecision>& decisions,
                                              bool elementary) const override;

  bool column_compatible(const Column& c, const BranchingDecision& d) const override {
    if (d.kind != DecisionKind::ForbidArc && d.kind != DecisionKind::ForceArc) return true;
    for (size_t k = 0; k + 1 < c.seq.size(); ++k)
      if (arc_deleted(d, c.seq[k], c.seq[k + 1])) return false;
    return true;
  }

  bool column_elementary(const Column& c) const override {
    std::vector<char> seen(static_cast<size_t>(inst_.n) + 2, 0);
    for (int node : c.seq) {
      if (node < 1 || node > inst_.n) continue;
      if (seen[static_cast<size_t>(node)]) return false;
      seen[static_cast<size_t>(node)] = 1;
    }
    return true;
  }

  BranchingOutcome select_branching(const std::vector<std::pair<const Column*, double>>& active,
                                    const std::vector<BranchingDecision>& path) const override {
    auto arc = pick_fractional_arc(active, path);
    if (!arc)
      throw NoBranchingCandidate("routing: fractional master without a fractional arc");
    BranchingOutcome out;
    out.branch = {{DecisionKind::ForbidArc, arc->first, arc->second, 0},
                  {DecisionKind::ForceArc, arc->first, arc->second, 0}};
    return out;
  }

  std::optional<std::pair<BranchingDecision, BranchingDecision>> branch_on_cycle(
      const Column& c, const std::vector<BranchingDecision>& path) const override {
    std::vector<int> first_pos(static_cast<size_t>(inst_.n) + 2, -1);
    for (size_t k = 0; k < c.seq.size(); ++k) {
      int node = c.seq[k];
      if (node < 1 || node > inst_.n) continue;
      if (first_pos[static_cast<size_t>(node)] >= 0) {
        size_t start = static_cast<size_t>(first_pos[static_cast<size_t>(node)]);
        for (size_t x = start; x < k; ++x) {
          BranchingDecision probe{DecisionKind::ForbidArc, c.seq[x], c.seq[x + 1], 0};
          bool fresh = true;
          for (const auto& d : path)
            if ((d.kind == DecisionKind::ForbidArc || d.kind == DecisionKind::ForceArc) &&
                d.a == probe.a && d.b == probe.b)
              fresh = false;
          if (fresh)
            return {{probe, {DecisionKind::ForceArc, probe.a, probe.b, 0}}};
        }
      } else {
        first_pos[static_cast<size_t>(node)] = static_cast<int>(k);
      }
    }
    return std::nullopt;
  }

 private:
  std::optional<std::pair<int, int>> pick_fractional_arc(
      const std::vector<std::pair<const Column*, double>>& active,
      const std::vector<BranchingDecision>& path) const {
    int nn = inst_.nodes();
    std::vector<double> flow(static_cast<size_t>(nn) * static_cast<size_t>(nn), 0.0);
    for (const auto& [col, lambda] : active)
      for (size_t k = 0; k + 1 < col->seq.size(); ++k)
        flow[static_cast<size_t>(col->seq[k]) * static_cast<size_t>(nn) +
             static_cast<size_t>(col->seq[k + 1])] += lambda;
    std::optional<std::pair<int, int>> best;
    double best_score = kInf;
    for (int x = 0; x < nn; ++x)
      for (int y = 0; y < nn; ++y) {
        double v = flow[static_cast<size_t>(x) * static_cast<size_t>(nn) + static_cast<size_t>(y)];
        double frac = v - std::floor(v);
        if (frac < 1e-6 || frac > 1.0 - 1e-6) continue;
        bool fresh = true;
        for (const auto& d : path)
          if ((d.kind == DecisionKind::ForbidArc || d.kind == DecisionKind::ForceArc) &&
              d.a == x && d.b == y)
            fresh = false;
        if (!fresh) continue;
        double score = std::abs(frac - 0.5);
        if (score < best_score - 1e-12) {
          best_score = score;
          best = {{x, y}};
        }
      }
    return best;
  }

 public:
  class Pricer : public PricingAdapter {
   public:
    Pricer(const RoutingFamily& family, std::vector<uint8_t> arcs, bool elementary)
        : family_(&family), arcs_(std::move(arcs)), elementary_(elementary) {}

    Model rebuild(const std::vector<double>& duals) override {
      const RoutingInstance& inst = family_->instance();
      uint32_t nn = static_cast<uint32_t>(inst.nodes());
      uint32_t n = static_cast<uint32_t>(inst.n);
      ModelBuilder b;

      std::vector<double> pi(nn, 0.0);
      for (uint32_t j = 1; j <= n; ++j) pi[j] = duals[j - 1];

      auto q = b.numeric_var("q", Pref::Less, 0.0);
      auto t = b.numeric_var("t", Pref::Less, 0.0);
      SetVar R{-1, 0};
      ElementVar pred{-1};
      if (elementary_) {
        Bitset init(nn);
        for (uint32_t j = 1; j <= n; ++j) init.add(j);
        R = b.set_var("R", nn, Pref::Greater, std::move(init));
      } else {
        pred = b.element_var("p", nn - 1, Pref::None, 0);
      }
      auto at = b.element_var("i", nn - 1, Pref::None, 0);

      int dt = b.numeric_table("d", inst.dist, {nn, nn});
      int ds = b.numeric_table("dstar", inst.dstar, {nn, nn});
      int lt = b.numeric_table("l", inst.load, {nn});
      int atab = b.numeric_table("a", inst.ready, {nn});
      int bt = b.numeric_table("b", inst.due, {nn});
      int st = b.numeric_table("s", inst.service, {nn});
      int arct = b.bool_table("arc", arcs_, {nn, nn});
      int pit = b.numeric_table("pi", pi, {nn});

      for (uint32_t j = 1; j <= n + 1; ++j) {
        bool is_return = j == n + 1;
        NumericExpr arrive = t.expr() + b.num_at(st, at) + b.num_at(dt, at, elem_const(j));
        NumericExpr tp = num_max(arrive, num_const(inst.ready[j]));

        Transition& tr = b.transition(is_return ? "return" : "visit", static_cast<int>(j));
        if (elementary_) {
          if (!is_return) tr.preconditions.push_back(member(elem_const(j), R));
        } else {
          tr.preconditions.push_back(cmp_elem(nodes::CmpOp::Ne, pred, elem_const(j)));
        }
        tr.preconditions.push_back(b.bool_at(arct, at, elem_const(j)));
        tr.preconditions.push_back(q.expr() + num_const(inst.load[j]) <= num_const(inst.capacity));
        tr.preconditions.push_back(arrive <= num_const(inst.due[j]));

        if (elementary_ && !is_return) {
          Condition keep =
              tp + num_const(inst.service[j]) + b.num_at(ds, elem_const(j), elem_param()) <=
                  b.num_at(bt, elem_param()) &&
              q.expr() + num_const(inst.load[j]) + b.num_at(lt, elem_param()) <=
                  num_const(inst.capacity);
          tr.set_effects.push_back({R.slot, set_filter(set_remove(R, elem_const(j)), keep)});
        }
        if (!elementary_) tr.elem_effects.push_back({pred.slot, at});
        tr.elem_effects.push_back({at.slot, elem_const(j)});
        tr.num_effects.push_back({q.slot, q.expr() + num_const(inst.load[j])});
        tr.num_effects.push_back({t.slot, tp});
        NumericExpr leg = b.num_at(dt, at, elem_const(j));
        if (inst.cumulative) leg = q.expr() * leg;
        tr.weight = leg - num_const(pi[j]);
      }

      b.base_case({cmp_elem(nodes::CmpOp::Eq, at, elem_const(n + 1))}, num_const(0.0));

      // Dual bounds: exact zero at the end depot, then knapsack relaxations
      // over remaining load and remaining time, on both arc endpoints.
      b.dual_bound(num_ite(cmp_elem(nodes::CmpOp::Eq, at, elem_const(n + 1)), num_const(0.0),
                           num_const(-kInf)));
      auto profit = [&](uint32_t j, double dmin) -> NumericExpr {
        if (inst.cumulative) return num_const(pi[j]) - q.expr() * num_const(dmin);
        return num_const(pi[j] - dmin);
      };
      if (elementary_) {
        std::vector<NumericExpr> pin(nn), pout(nn), wl(nn), win(nn), wout(nn);
        for (uint32_t j = 0; j < nn; ++j) {
          double dj_in = inst.din[j] == kInf ? 1e12 : inst.din[j];
          double dj_out = inst.dout[j] == kInf ? 1e12 : inst.dout[j];
          pin[j] = profit(j, dj_in);
          pout[j] = profit(j, dj_out);
          wl[j] = num_const(inst.load[j]);
          win[j] = num_const(dj_in + inst.service[j]);
          wout[j] = num_const(inst.service[j] + dj_out);
        }
        NumericExpr cap_load = num_const(inst.capacity) - q.expr();
        double dn1_in = inst.din[static_cast<size_t>(inst.n + 1)];
        NumericExpr cap_time =
            num_const(inst.due[static_cast<size_t>(inst.n + 1)] -
                      (dn1_in == kInf ? 0.0 : dn1_in)) -
            t.expr();
        NumericExpr cap_time_out = num_const(inst.due[static_cast<size_t>(inst.n + 1)]) - t.expr();
        b.dual_bound(-knapsack_bound(R, cap_load, pin, wl));
        b.dual_bound(-knapsack_bound(R, cap_time, pin, win));
        b.dual_bound(-knapsack_bound(R, cap_load, pout, wl));
        b.dual_bound(-knapsack_bound(R, cap_time_out, pout, wout));
      } else {
        // Reachable customers and per-customer visit caps, recomputed per state.
        Bitset customers(nn);
        for (uint32_t j = 1; j <= n; ++j) customers.add(j);
        SetExpr rhat = set_filter(
            set_remove(set_remove(set_const(customers), pred), at),
            t.expr() + b.num_at(st, at) + b.num_at(ds, at, elem_param()) <=
                    b.num_at(bt, elem_param()) &&
                q.expr() + b.num_at(lt, elem_param()) <= num_const(inst.capacity));
        std::vector<NumericExpr> pin(nn), wl(nn), win(nn);
        for (uint32_t j = 0; j < nn; ++j) {
          if (j < 1 || j > n) {
            pin[j] = num_const(0.0);
            wl[j] = num_const(0.0);
            win[j] = num_const(0.0);
            continue;
          }
          double min_approach = kInf;
          for (uint32_t k = 0; k < nn; ++k)
            if (k != j && arcs_[static_cast<size_t>(k) * nn + j])
              min_approach = std::min(min_approach, inst.service[k] + inst.d(static_cast<int>(k),
                                                                             static_cast<int>(j)));
          double dj_out = inst.dout[j] == kInf ? 1e12 : inst.dout[j];
          double denom = std::max(1.0, (min_approach == kInf ? 1e12 : min_approach) +
                                           inst.service[j] + dj_out);
          double numer_const = inst.due[j] + inst.service[j] + dj_out;
          NumericExpr mj = num_max(
              num_const(0.0), num_floor((num_const(numer_const) - t.expr()) / num_const(denom)));
          double dj_in = inst.din[j] == kInf ? 1e12 : inst.din[j];
          pin[j] = mj * profit(j, dj_in);
          wl[j] = mj * num_const(inst.load[j]);
          win[j] = mj * num_const(dj_in + inst.service[j]);
        }
        NumericExpr cap_load = num_const(inst.capacity) - q.expr();
        double dn1_in = inst.din[static_cast<size_t>(inst.n + 1)];
        NumericExpr cap_time =
            num_const(inst.due[static_cast<size_t>(inst.n + 1)] -
                      (dn1_in == kInf ? 0.0 : dn1_in)) -
            t.expr();
        b.dual_bound(-knapsack_bound(rhat, cap_load, pin, wl));
        b.dual_bound(-knapsack_bound(rhat, cap_time, pin, win));
      }
      return b.build();
    }

    Column extract(const Model& model, const std::vector<int>& path) const override {
      std::vector<int> seq = {0};
      for (int ti : path) seq.push_back(model.transitions[static_cast<size_t>(ti)].param);
      return family_->make_route_column(seq);
    }

    double offset(const std::vector<double>& duals) const override {
      return family_->fleet_row() >= 0 ? -duals[static_cast<size_t>(family_->fleet_row())] : 0.0;
    }

   private:
    const RoutingFamily* family_;
    std::vector<uint8_t> arcs_;
    bool elementary_;
  };

 private:
  RoutingInstance inst_;
};

inline std::unique_ptr<PricingAdapter> RoutingFamily::make_pricer(
    const std::vector<BranchingDecision>& decisions, bool elementary) const {
  return std::make_unique<Pricer>(*this, edited_arcs(decisions, elementary), elementary);
}

}  // namespace bpkit::problems
