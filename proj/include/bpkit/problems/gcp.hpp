// Graph coloring: DIMACS parsing, the set-partitioning master, and the
// maximum-weight-independent-set pricing over Ryan-Foster vertex groups.
#pragma once

#include <sstream>

#include "bpkit/problems/common.hpp"

namespace bpkit::problems {

struct GcpInstance {
  int n = 0;  // vertices
  std::vector<std::pair<int, int>> edges;
};

// DIMACS .col: "p edge V E" then "e u v" lines (1-based vertices).
inline GcpInstance parse_gcp(const std::string& text) {
  std::istringstream in(text);
  GcpInstance inst;
  std::string line;
  bool header = false;
  std::vector<std::vector<char>> seen;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "c") continue;
    if (tag == "p") {
      std::string fmt;
      int e = 0;
      if (!(ls >> fmt >> inst.n >> e) || fmt != "edge" || inst.n <= 0)
        throw ParseError("gcp: bad problem line");
      header = true;
      seen.assign(static_cast<size_t>(inst.n), std::vector<char>(static_cast<size_t>(inst.n), 0));
    } else if (tag == "e") {
      if (!header) throw ParseError("gcp: edge before problem line");
      int u = 0, v = 0;
      if (!(ls >> u >> v) || u < 1 || v < 1 || u > inst.n || v > inst.n)
        throw ParseError("gcp: bad edge line");
      if (u == v) throw SemanticError("gcp: self-loop");
      int a = std::min(u, v) - 1, b = std::max(u, v) - 1;
      if (!seen[static_cast<size_t>(a)][static_cast<size_t>(b)]) {
        seen[static_cast<size_t>(a)][static_cast<size_t>(b)] = 1;
        inst.edges.push_back({a, b});
      }
    }
  }
  if (!header) throw ParseError("gcp: missing problem line");
  return inst;
}

inline GcpInstance generate_gcp(int n, uint64_t seed, double density = 0.4) {
  Rng rng(seed ^ 0x6c6c6c6cull);
  GcpInstance inst;
  inst.n = n;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.chance() < density) inst.edges.push_back({u, v});
  return inst;
}

class GcpFamily : public ProblemFamily {
 public:
  explicit GcpFamily(GcpInstance inst) : inst_(std::move(inst)) {}
  const GcpInstance& instance() const { return inst_; }

  ProblemKind kind() const override { return ProblemKind::Gcp; }

  MasterProblem build_master() const override {
    MasterProblem master;
    for (int i = 0; i < inst_.n; ++i) master.lp().add_row(RowSense::Eq, 1.0);
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
    return std::make_unique<Pricer>(build_rf_groups(inst_.n, decisions, inst_.edges));
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
    RfGroups g = build_rf_groups(inst_.n, path, inst_.edges);
    auto pair = most_fractional_pair(inst_.n, active, g);
    if (!pair) throw NoBranchingCandidate("gcp: fractional master without a fractional pair");
    BranchingOutcome out;
    out.branch = {{DecisionKind::PairItems, pair->first, pair->second, 0},
                  {DecisionKind::ConflictItems, pair->first, pair->second, 0}};
    return out;
  }

  // Independent-set pricing: like the bin-packing DP without the capacity,
  // with conflicting groups pruned from R on inclusion.
  class Pricer : public PricingAdapter {
   public:
    explicit Pricer(RfGroups groups) : groups_(std::move(groups)) {}

    Model rebuild(const std::vector<double>& duals) override {
      uint32_t G = static_cast<uint32_t>(groups_.count);
      std::vector<double> gpi(G, 0.0);
      for (int g = 0; g < groups_.count; ++g)
        for (int i : groups_.members[static_cast<size_t>(g)])
          gpi[static_cast<size_t>(g)] += duals[static_cast<size_t>(i)];

      ModelBuilder b;
      auto g = b.element_var("g", G, Pref::None, 0);
      auto R = b.set_var("R", G, Pref::Greater, Bitset::full(G));
      std::vector<double> negpi(G);
      for (uint32_t x = 0; x < G; ++x) negpi[x] = -gpi[x];
      int npi = b.numeric_table("npi", negpi, {G});
      int conf = b.set_table("H", groups_.conflicts);

      Transition& inc = b.transition("include");
      inc.preconditions.push_back(member(g, R));
      inc.elem_effects.push_back({g.slot, elem_add(g, 1)});
      inc.set_effects.push_back({R.slot, R.expr() - b.set_at(conf, g, G)});
      inc.weight = b.num_at(npi, g);

      Transition& exc = b.transition("exclude");
      exc.preconditions.push_back(cmp_elem(nodes::CmpOp::Lt, g, elem_const(G)));
      exc.elem_effects.push_back({g.slot, elem_add(g, 1)});
      exc.set_effects.push_back({R.slot, set_remove(R, g)});
      exc.weight = num_const(0.0);

      b.base_case({cmp_elem(nodes::CmpOp::Eq, g, elem_const(G))}, num_const(0.0));
      std::vector<double> clamped(G);
      for (uint32_t x = 0; x < G; ++x) clamped[x] = std::min(-gpi[x], 0.0);
      b.dual_bound(set_sum(R, std::move(clamped)));
      return b.build();
    }

    Column extract(const Model& model, const std::vector<int>& path) const override {
      Column c;
      c.cost = 1.0;
      auto states = replay(model, path);
      for (size_t k = 0; k < path.size(); ++k) {
        if (model.transitions[static_cast<size_t>(path[k])].name != "include") continue;
        int g = static_cast<int>(states[k].elems[0]);
        for (int v : groups_.members[static_cast<size_t>(g)]) {
          c.rows.push_back({v, 1});
          c.seq.push_back(v);
        }
      }
      std::sort(c.rows.begin(), c.rows.end());
      std::sort(c.seq.begin(), c.seq.end());
      return c;
    }

    double offset(const std::vector<double>&) const override { return 1.0; }

   private:
    RfGroups groups_;
  };

 private:
  GcpInstance inst_;
};

}  // namespace bpkit::problems
