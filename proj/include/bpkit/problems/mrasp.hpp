// Multi-runway aircraft scheduling: plans of separated takeoff/landing
// operations priced by a sequencing DP whose time updates respect the
// class-operation pairs that violate the triangle inequality.
#pragma once

#include <sstream>

#include "bpkit/problems/common.hpp"

namespace bpkit::problems {

struct MraspInstance {
  int runways = 0;
  int classes = 0;
  int n = 0;  // aircraft
  std::vector<int> cls, op;                  // per aircraft; op in {0, 1}
  std::vector<double> release, due, cost;    // u_a, v_a, c_a
  // Separation over class-operation pair indices e = 2*class + op, extended
  // with an all-zero dummy row/column for the virtual start.
  std::vector<double> sep;  // (2G+1)^2
  int pairs = 0;            // 2G
  std::vector<int> go;      // aircraft (plus dummy at index n) -> pair index
  std::vector<int> q_pairs;  // pair indices violating the triangle inequality

  double sep_at(int e1, int e2) const {
    return sep[static_cast<size_t>(e1) * static_cast<size_t>(pairs + 1) + static_cast<size_t>(e2)];
  }
};

inline void finalize_mrasp(MraspInstance& inst) {
  inst.pairs = 2 * inst.classes;
  inst.go.resize(static_cast<size_t>(inst.n) + 1);
  for (int a = 0; a < inst.n; ++a)
    inst.go[static_cast<size_t>(a)] = 2 * inst.cls[static_cast<size_t>(a)] + inst.op[static_cast<size_t>(a)];
  inst.go[static_cast<size_t>(inst.n)] = inst.pairs;  // dummy start
  // Pairs (g, o) for which some two-step separation undercuts the direct one.
  inst.q_pairs.clear();
  for (int e = 0; e < inst.pairs; ++e) {
    bool violated = false;
    for (int e1 = 0; e1 < inst.pairs && !violated; ++e1)
      for (int e2 = 0; e2 < inst.pairs && !violated; ++e2)
        if (inst.sep_at(e1, e2) + inst.sep_at(e2, e) < inst.sep_at(e1, e))
          violated = true;
    if (violated) inst.q_pairs.push_back(e);
  }
}

// Native text: "R G A", a (2G)x(2G) separation block, then one
// "class op u v c" line per aircraft.
inline MraspInstance parse_mrasp(const std::string& text) {
  std::istringstream in(text);
  MraspInstance inst;
  int a_count = 0;
  if (!(in >> inst.runways >> inst.classes >> a_count) || inst.runways <= 0 ||
      inst.classes <= 0 || a_count <= 0)
    throw ParseError("mrasp: bad header");
  inst.n = a_count;
  int p = 2 * inst.classes;
  inst.sep.assign(static_cast<size_t>(p + 1) * static_cast<size_t>(p + 1), 0.0);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      double v;
      if (!(in >> v)) throw ParseError("mrasp: separation table too short");
      if (v < 0) throw SemanticError("mrasp: negative separation");
      inst.sep[static_cast<size_t>(i) * static_cast<size_t>(p + 1) + static_cast<size_t>(j)] = v;
    }
  inst.cls.resize(static_cast<size_t>(inst.n));
  inst.op.resize(static_cast<size_t>(inst.n));
  inst.release.resize(static_cast<size_t>(inst.n));
  inst.due.resize(static_cast<size_t>(inst.n));
  inst.cost.resize(static_cast<size_t>(inst.n));
  for (int a = 0; a < inst.n; ++a) {
    if (!(in >> inst.cls[static_cast<size_t>(a)] >> inst.op[static_cast<size_t>(a)] >>
          inst.release[static_cast<size_t>(a)] >> inst.due[static_cast<size_t>(a)] >>
          inst.cost[static_cast<size_t>(a)]))
      throw ParseError("mrasp: expected class op u v c for aircraft " + std::to_string(a));
    if (inst.cls[static_cast<size_t>(a)] < 0 || inst.cls[static_cast<size_t>(a)] >= inst.classes)
      throw SemanticError("mrasp: class out of range");
    if (inst.op[static_cast<size_t>(a)] != 0 && inst.op[static_cast<size_t>(a)] != 1)
      throw SemanticError("mrasp: operation must be 0 or 1");
    if (inst.due[static_cast<size_t>(a)] < inst.release[static_cast<size_t>(a)])
      throw SemanticError("mrasp: due before release");
  }
  finalize_mrasp(inst);
  return inst;
}

// Random instances with regulation-style separations; a few entries are
// inflated so triangle-inequality violations actually occur.
inline MraspInstance generate_mrasp(int n, int runways, uint64_t seed) {
  Rng rng(seed ^ 0xa1c4a7a9ull);
  MraspInstance inst;
  inst.runways = runways;
  inst.classes = 2;
  inst.n = n;
  int p = 2 * inst.classes;
  inst.sep.assign(static_cast<size_t>(p + 1) * static_cast<size_t>(p + 1), 0.0);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      inst.sep[static_cast<size_t>(i) * static_cast<size_t>(p + 1) + static_cast<size_t>(j)] =
          static_cast<double>(rng.irange(3, 8));
  // Heavy-behind-light style entry that beats its two-step alternatives.
  inst.sep[0 * static_cast<size_t>(p + 1) + static_cast<size_t>(p - 1)] = 20.0;
  inst.cls.resize(static_cast<size_t>(n));
  inst.op.resize(static_cast<size_t>(n));
  inst.release.resize(static_cast<size_t>(n));
  inst.due.resize(static_cast<size_t>(n));
  inst.cost.resize(static_cast<size_t>(n));
  for (int a = 0; a < n; ++a) {
    inst.cls[static_cast<size_t>(a)] = rng.irange(0, inst.classes - 1);
    inst.op[static_cast<size_t>(a)] = rng.irange(0, 1);
    inst.release[static_cast<size_t>(a)] = rng.irange(0, 30);
    inst.due[static_cast<size_t>(a)] =
        inst.release[static_cast<size_t>(a)] + rng.irange(15, 45);
    inst.cost[static_cast<size_t>(a)] = rng.irange(1, 5);
  }
  finalize_mrasp(inst);
  return inst;
}

class MraspFamily : public ProblemFamily {
 public:
  explicit MraspFamily(MraspInstance inst) : inst_(std::move(inst)) {}
  const MraspInstance& instance() const { return inst_; }

  ProblemKind kind() const override { return ProblemKind::Mrasp; }
  static constexpr int kFleetRow = 0;

  MasterProblem build_master() const override {
    MasterProblem master;
    master.lp().add_row(RowSense::Le, static_cast<double>(inst_.runways));
    for (int a = 0; a < inst_.n; ++a) master.lp().add_row(RowSense::Ge, 1.0);
    for (int a = 0; a < inst_.n; ++a) {
      Column c;  // one aircraft alone, scheduled at its release time
      c.cost = inst_.release[static_cast<size_t>(a)] * inst_.cost[static_cast<size_t>(a)];
      c.rows = {{kFleetRow, 1}, {1 + a, 1}};
      c.seq = {a};
      master.add(std::move(c));
    }
    for (int a = 0; a < inst_.n; ++a) master.add_artificial(1 + a);
    return master;
  }

  // Allowed-successor matrix over aircraft plus the virtual start (index n).
  std::vector<uint8_t> successor_matrix(const std::vector<BranchingDecision>& decisions) const {
    int n1 = inst_.n + 1;
    std::vector<uint8_t> s(static_cast<size_t>(n1) * static_cast<size_t>(n1), 1);
    auto at = [&](int i, int j) -> uint8_t& {
      return s[static_cast<size_t>(i) * static_cast<size_t>(n1) + static_cast<size_t>(j)];
    };
    for (int i = 0; i < n1; ++i) at(i, i) = 0;
    for (const auto& d : decisions) {
      if (d.kind == DecisionKind::ForbidSuccession) {
        at(d.a, d.b) = 0;
      } else if (d.kind == DecisionKind::ForceSuccession) {
        for (int k = 0; k < inst_.n; ++k)
          if (k != d.b) at(d.a, k) = 0;
        for (int k = 0; k < n1; ++k)
          if (k != d.a) at(k, d.b) = 0;
      }
    }
    for (const auto& d : decisions)
      if (d.kind == DecisionKind::ForceSuccession && at(d.a, d.b) == 0)
        throw InfeasibleNodeError("mrasp: contradictory succession decisions");
    return s;
  }

  std::unique_ptr<PricingAdapter> make_pricer(const std::vector<BranchingDecision>& decisions,
                                              bool) const override {
    return std::make_unique<Pricer>(inst_, successor_matrix(decisions));
  }

  bool column_compatible(const Column& c, const BranchingDecision& d) const override {
    if (d.kind == DecisionKind::ForbidSuccession) {
      for (size_t k = 0; k + 1 < c.seq.size(); ++k)
        if (c.seq[k] == d.a && c.seq[k + 1] == d.b) return false;
      return true;
    }
    if (d.kind == DecisionKind::ForceSuccession) {
      if (!c.seq.empty() && c.seq.front() == d.b) return false;  // predecessor is the start
      for (size_t k = 0; k < c.seq.size(); ++k) {
        if (c.seq[k] == d.a && (k + 1 >= c.seq.size() || c.seq[k + 1] != d.b)) {
          // a may only end the plan or be followed by b.
          if (k + 1 < c.seq.size()) return false;
        }
        if (c.seq[k] == d.b && (k == 0 || c.seq[k - 1] != d.a)) return false;
      }
      return true;
    }
    return true;
  }

  BranchingOutcome select_branching(const std::vector<std::pair<const Column*, double>>& active,
                                    const std::vector<BranchingDecision>& path) const override {
    std::vector<std::vector<double>> flow(
        static_cast<size_t>(inst_.n), std::vector<double>(static_cast<size_t>(inst_.n), 0.0));
    for (const auto& [col, lambda] : active)
      for (size_t k = 0; k + 1 < col->seq.size(); ++k)
        flow[static_cast<size_t>(col->seq[k])][static_cast<size_t>(col->seq[k + 1])] += lambda;
    auto decided = [&](int a, int b) {
      for (const auto& d : path)
        if ((d.kind == DecisionKind::ForbidSuccession || d.kind == DecisionKind::ForceSuccession) &&
            d.a == a && d.b == b)
          return true;
      return false;
    };
    std::optional<std::pair<int, int>> best;
    double best_score = kInf;
    for (int a = 0; a < inst_.n; ++a)
      for (int b = 0; b < inst_.n; ++b) {
        if (a == b || decided(a, b)) continue;
        double v = flow[static_cast<size_t>(a)][static_cast<size_t>(b)];
        double frac = v - std::floor(v);
        if (frac < 1e-6 || frac > 1.0 - 1e-6) continue;
        double score = std::abs(frac - 0.5);
        if (score < best_score - 1e-12) {
          best_score = score;
          best = {{a, b}};
        }
      }
    if (!best)
      throw NoBranchingCandidate("mrasp: fractional master without a fractional succession");
    BranchingOutcome out;
    out.branch = {{DecisionKind::ForbidSuccession, best->first, best->second, 0},
                  {DecisionKind::ForceSuccession, best->first, best->second, 0}};
    return out;
  }

  // Sequencing DP: reachable set M, current aircraft i (dummy start n),
  // current time t, and one earliest-feasible-time variable per
  // triangle-violating class-operation pair.
  class Pricer : public PricingAdapter {
   public:
    Pricer(const MraspInstance& inst, std::vector<uint8_t> successors)
        : inst_(&inst), successors_(std::move(successors)) {}

    Model rebuild(const std::vector<double>& duals) override {
      uint32_t n = static_cast<uint32_t>(inst_->n);
      uint32_t pairs1 = static_cast<uint32_t>(inst_->pairs + 1);
      ModelBuilder b;
      auto M = b.set_var("M", n, Pref::Greater, Bitset::full(n));
      auto at = b.element_var("i", n, Pref::None, n);  // dummy start
      auto t = b.numeric_var("t", Pref::Less, 0.0);
      std::vector<NumericVar> e_vars;
      std::vector<int> e_index(static_cast<size_t>(inst_->pairs), -1);
      for (size_t qi = 0; qi < inst_->q_pairs.size(); ++qi) {
        int e = inst_->q_pairs[qi];
        e_index[static_cast<size_t>(e)] = static_cast<int>(qi);
        e_vars.push_back(b.numeric_var("e" + std::to_string(e), Pref::Less, 0.0));
      }
      auto f = b.element_var("f", 1, Pref::None, 0);

      int sep = b.numeric_table("sep", inst_->sep, {pairs1, pairs1});
      std::vector<uint32_t> go_u(inst_->go.begin(), inst_->go.end());
      int go = b.element_table("go", go_u);
      int due = b.numeric_table("v", inst_->due, {n});
      int succ = b.bool_table(
          "S", successors_, {static_cast<uint32_t>(inst_->n + 1), static_cast<uint32_t>(inst_->n + 1)});

      Transition& fin = b.transition("finish");
      fin.preconditions.push_back(cmp_elem(nodes::CmpOp::Eq, f, elem_const(0)));
      fin.elem_effects.push_back({f.slot, elem_const(1)});
      fin.weight = num_const(0.0);

      for (uint32_t j = 0; j < n; ++j) {
        int ej = inst_->go[j];
        NumericExpr arrive =
            t.expr() + b.num_at(sep, b.elem_at(go, at), elem_const(static_cast<uint32_t>(ej)));
        NumericExpr tp = num_max(arrive, num_const(inst_->release[j]));
        if (e_index[static_cast<size_t>(ej)] >= 0)
          tp = num_max(tp, e_vars[static_cast<size_t>(e_index[static_cast<size_t>(ej)])].expr());

        Transition& tr = b.transition("schedule", static_cast<int>(j));
        tr.preconditions.push_back(cmp_elem(nodes::CmpOp::Eq, f, elem_const(0)));
        tr.preconditions.push_back(member(elem_const(j), M));
        tr.preconditions.push_back(b.bool_at(succ, at, elem_const(j)));
        tr.preconditions.push_back(tp <= num_const(inst_->due[j]));
        tr.elem_effects.push_back({at.slot, elem_const(j)});
        tr.num_effects.push_back({t.slot, tp});
        for (size_t qi = 0; qi < inst_->q_pairs.size(); ++qi) {
          int e = inst_->q_pairs[qi];
          tr.num_effects.push_back(
              {e_vars[qi].slot,
               num_max(e_vars[qi].expr(),
                       tp + num_const(inst_->sep_at(ej, e)))});
        }
        tr.set_effects.push_back(
            {M.slot,
             set_filter(set_remove(M, elem_const(j)),
                        tp + b.num_at(sep, elem_const(static_cast<uint32_t>(ej)),
                                      b.elem_at(go, elem_param())) <=
                            b.num_at(due, elem_param()))});
        tr.weight = tp * num_const(inst_->cost[j]) - num_const(duals[static_cast<size_t>(1 + j)]);
      }

      b.base_case({cmp_elem(nodes::CmpOp::Eq, f, elem_const(1))}, num_const(0.0));
      std::vector<double> clamped(n);
      for (uint32_t j = 0; j < n; ++j)
        clamped[j] = std::min(
            inst_->release[j] * inst_->cost[j] - duals[static_cast<size_t>(1 + j)], 0.0);
      b.dual_bound(set_sum(M, std::move(clamped)));
      return b.build();
    }

    Column extract(const Model& model, const std::vector<int>& path) const override {
      Column c;
      c.rows.push_back({kFleetRow, 1});
      c.cost = 0.0;
      auto states = replay(model, path);
      for (size_t k = 0; k < path.size(); ++k) {
        const Transition& tr = model.transitions[static_cast<size_t>(path[k])];
        if (tr.name != "schedule") continue;
        int a = tr.param;
        double when = states[k + 1].nums[0];
        c.rows.push_back({1 + a, 1});
        c.seq.push_back(a);
        c.cost += when * inst_->cost[static_cast<size_t>(a)];
      }
      std::sort(c.rows.begin(), c.rows.end());
      return c;
    }

    double offset(const std::vector<double>& duals) const override {
      return -duals[kFleetRow];
    }

   private:
    const MraspInstance* inst_;
    std::vector<uint8_t> successors_;
  };

 private:
  MraspInstance inst_;
};

}  // namespace bpkit::problems
