// Bin packing: BPPLIB parsing, the set-covering master, and the knapsack-style
// include/exclude pricing over Ryan-Foster item groups.
#pragma once

#include <sstream>

#include "bpkit/problems/common.hpp"

namespace bpkit::problems {

struct BppInstance {
  int n = 0;
  double capacity = 0.0;
  std::vector<double> weights;
};

// BPPLIB text: item count, capacity, then one weight per line.
inline BppInstance parse_bpp(const std::string& text) {
  std::istringstream in(text);
  BppInstance inst;
  if (!(in >> inst.n) || inst.n <= 0) throw ParseError("bpp: bad item count");
  if (!(in >> inst.capacity) || inst.capacity <= 0) throw ParseError("bpp: bad capacity");
  inst.weights.resize(static_cast<size_t>(inst.n));
  for (int i = 0; i < inst.n; ++i) {
    if (!(in >> inst.weights[static_cast<size_t>(i)]))
      throw ParseError("bpp: expected " + std::to_string(inst.n) + " weights");
    if (inst.weights[static_cast<size_t>(i)] < 0) throw SemanticError("bpp: negative weight");
    if (inst.weights[static_cast<size_t>(i)] > inst.capacity)
      throw SemanticError("bpp: item " + std::to_string(i) + " exceeds the bin capacity");
  }
  return inst;
}

inline BppInstance generate_bpp(int n, uint64_t seed) {
  Rng rng(seed ^ 0xb1b1b1b1ull);
  BppInstance inst;
  inst.n = n;
  inst.capacity = 100.0;
  inst.weights.resize(static_cast<size_t>(n));
  for (auto& w : inst.weights) w = static_cast<double>(rng.irange(20, 100));
  return inst;
}

class BppFamily : public ProblemFamily {
 public:
  explicit BppFamily(BppInstance inst) : inst_(std::move(inst)) {}
  const BppInstance& instance() const { return inst_; }

  ProblemKind kind() const override { return ProblemKind::Bpp; }

  MasterProblem build_master() const override {
    MasterProblem master;
    for (int i = 0; i < inst_.n; ++i) master.lp().add_row(RowSense::Ge, 1.0);
    for (int i = 0; i < inst_.n; ++i) {
      Column c;
      c.cost = 1.0;
      c.rows = {{i, 1}};
      c.seq = {i};
      master.add(std::move(c));
    }
    for (int i = 0; i < inst_.n; ++i) master.add_artificial(i);
    return master;
  }

  std::unique_ptr<PricingAdapter> make_pricer(const std::vector<BranchingDecision>& decisions,
                                              bool) const override {
    return std::make_unique<Pricer>(inst_, build_rf_groups(inst_.n, decisions, {}));
  }

  bool column_compatible(const Column& c, const BranchingDecision& d) const override {
    bool has_a = std::binary_search(c.seq.begin(), c.seq.end(), d.a);
    bool has_b = std::binary_search(c.seq.begin(), c.seq.end(), d.b);
    if (d.kind == DecisionKind::PairItems) return has_a == has_b;
    if (d.kind == DecisionKind::ConflictItems) return !(has_a && has_b);
    return true;
  }

  BranchingOutcome select_branching(const std::vector<std::pair<const Column*, double>>& active,
                                    const std::vector<BranchingDecision>& path) const override {
    RfGroups g = build_rf_groups(inst_.n, path, {});
    auto pair = most_fractional_pair(inst_.n, active, g);
    if (!pair) throw NoBranchingCandidate("bpp: fractional master without a fractional pair");
    BranchingOutcome out;
    out.branch = {{DecisionKind::PairItems, pair->first, pair->second, 0},
                  {DecisionKind::ConflictItems, pair->first, pair->second, 0}};
    return out;
  }

  // The include/exclude pricing over item groups: remaining capacity q and
  // reachable-group set R; including g prunes conflicting and overweight
  // groups from R.
  class Pricer : public PricingAdapter {
   public:
    Pricer(const BppInstance& inst, RfGroups groups) : inst_(&inst), groups_(std::move(groups)) {
      gw_.resize(static_cast<size_t>(groups_.count), 0.0);
      for (int g = 0; g < groups_.count; ++g)
        for (int i : groups_.members[static_cast<size_t>(g)])
          gw_[static_cast<size_t>(g)] += inst_->weights[static_cast<size_t>(i)];
    }

    Model rebuild(const std::vector<double>& duals) override {
      uint32_t G = static_cast<uint32_t>(groups_.count);
      std::vector<double> gpi(G, 0.0);
      for (int g = 0; g < groups_.count; ++g)
        for (int i : groups_.members[static_cast<size_t>(g)])
          gpi[static_cast<size_t>(g)] += duals[static_cast<size_t>(i)];

      ModelBuilder b;
      Bitset init(G);
      for (uint32_t g = 0; g < G; ++g)
        if (gw_[g] <= inst_->capacity) init.add(g);
      auto g = b.element_var("g", G, Pref::None, 0);
      auto q = b.numeric_var("q", Pref::Greater, inst_->capacity);
      auto R = b.set_var("R", G, Pref::Greater, std::move(init));
      int wt = b.numeric_table("w", gw_, {G});
      std::vector<double> negpi(G);
      for (uint32_t x = 0; x < G; ++x) negpi[x] = -gpi[x];
      int npi = b.numeric_table("npi", negpi, {G});
      int conf = b.set_table("H", groups_.conflicts);

      Transition& inc = b.transition("include");
      inc.preconditions.push_back(member(g, R));
      inc.preconditions.push_back(b.num_at(wt, g) <= q.expr());
      inc.elem_effects.push_back({g.slot, elem_add(g, 1)});
      inc.num_effects.push_back({q.slot, q.expr() - b.num_at(wt, g)});
      inc.set_effects.push_back(
          {R.slot, set_filter(R.expr() - b.set_at(conf, g, G),
                              b.num_at(wt, elem_param()) <= q.expr() - b.num_at(wt, g))});
      inc.weight = b.num_at(npi, g);

      Transition& exc = b.transition("exclude");
      exc.preconditions.push_back(cmp_elem(nodes::CmpOp::Lt, g, elem_const(G)));
      exc.elem_effects.push_back({g.slot, elem_add(g, 1)});
      exc.set_effects.push_back({R.slot, set_remove(R, g)});
      exc.weight = num_const(0.0);

      b.base_case({cmp_elem(nodes::CmpOp::Eq, g, elem_const(G))}, num_const(0.0));
      std::vector<NumericExpr> profits, ws;
      for (uint32_t x = 0; x < G; ++x) {
        profits.push_back(num_const(gpi[x]));
        ws.push_back(num_const(gw_[x]));
      }
      b.dual_bound(-knapsack_bound(R, q.expr(), std::move(profits), std::move(ws)));
      return b.build();
    }

    Column extract(const Model& model, const std::vector<int>& path) const override {
      Column c;
      c.cost = 1.0;
      auto states = replay(model, path);
      for (size_t k = 0; k < path.size(); ++k) {
        if (model.transitions[static_cast<size_t>(path[k])].name != "include") continue;
        int g = static_cast<int>(states[k].elems[0]);
        for (int item : groups_.members[static_cast<size_t>(g)]) {
          c.rows.push_back({item, 1});
          c.seq.push_back(item);
        }
      }
      std::sort(c.rows.begin(), c.rows.end());
      std::sort(c.seq.begin(), c.seq.end());
      return c;
    }

    double offset(const std::vector<double>&) const override { return 1.0; }

   private:
    const BppInstance* inst_;
    RfGroups groups_;
    std::vector<double> gw_;
  };

 private:
  BppInstance inst_;
};

}  // namespace bpkit::problems
