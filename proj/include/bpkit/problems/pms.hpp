// Identical parallel machines, total weighted completion time. Single-machine
// schedules are priced by an include/skip DP over jobs in Smith order; the
// branching rule splits a job's completion-time window.
#pragma once

#include <sstream>

#include "bpkit/problems/common.hpp"

namespace bpkit::problems {

struct PmsInstance {
  int n = 0;
  int machines = 0;
  // Jobs sorted by nonincreasing w/p (ties by original index), so the DP's
  // inclusion order is the per-machine execution order.
  std::vector<double> p, w;
  std::vector<int> original_id;
  std::vector<double> release, deadline;  // defaults 0 and the horizon
  double horizon = 0.0;
};

inline void finalize_pms(PmsInstance& inst) {
  std::vector<int> order(static_cast<size_t>(inst.n));
  for (int i = 0; i < inst.n; ++i) order[static_cast<size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double ra = inst.w[static_cast<size_t>(a)] * inst.p[static_cast<size_t>(b)];
    double rb = inst.w[static_cast<size_t>(b)] * inst.p[static_cast<size_t>(a)];
    if (ra != rb) return ra > rb;
    return a < b;
  });
  PmsInstance out = inst;
  double sum_p = 0.0, max_p = 0.0;
  for (int i = 0; i < inst.n; ++i) {
    sum_p += inst.p[static_cast<size_t>(i)];
    max_p = std::max(max_p, inst.p[static_cast<size_t>(i)]);
  }
  out.horizon = sum_p / inst.machines + (inst.machines - 1) * max_p / inst.machines;
  for (int i = 0; i < inst.n; ++i) {
    int from = order[static_cast<size_t>(i)];
    out.p[static_cast<size_t>(i)] = inst.p[static_cast<size_t>(from)];
    out.w[static_cast<size_t>(i)] = inst.w[static_cast<size_t>(from)];
    out.original_id[static_cast<size_t>(i)] =
        inst.original_id.empty() ? from : inst.original_id[static_cast<size_t>(from)];
    out.release[static_cast<size_t>(i)] =
        inst.release.empty() ? 0.0 : inst.release[static_cast<size_t>(from)];
    double d = inst.deadline.empty() ? out.horizon : inst.deadline[static_cast<size_t>(from)];
    out.deadline[static_cast<size_t>(i)] = std::min(d, out.horizon);
  }
  inst = std::move(out);
}

// Native text: "n m", then one "p w r d" line per job.
inline PmsInstance parse_pms(const std::string& text) {
  std::istringstream in(text);
  PmsInstance inst;
  if (!(in >> inst.n >> inst.machines) || inst.n <= 0 || inst.machines <= 0)
    throw ParseError("pms: bad header");
  inst.p.resize(static_cast<size_t>(inst.n));
  inst.w.resize(static_cast<size_t>(inst.n));
  inst.release.resize(static_cast<size_t>(inst.n));
  inst.deadline.resize(static_cast<size_t>(inst.n));
  inst.original_id.resize(static_cast<size_t>(inst.n));
  for (int i = 0; i < inst.n; ++i) {
    inst.original_id[static_cast<size_t>(i)] = i;
    if (!(in >> inst.p[static_cast<size_t>(i)] >> inst.w[static_cast<size_t>(i)] >>
          inst.release[static_cast<size_t>(i)] >> inst.deadline[static_cast<size_t>(i)]))
      throw ParseError("pms: expected p w r d for job " + std::to_string(i));
    if (inst.p[static_cast<size_t>(i)] <= 0) throw SemanticError("pms: nonpositive processing time");
    if (inst.w[static_cast<size_t>(i)] < 0) throw SemanticError("pms: negative weight");
  }
  finalize_pms(inst);
  return inst;
}

// The three benchmark distributions: 1: p in [1,10], w in [10,100];
// 2: p, w in [1,100]; 3: p, w in [10,20].
inline PmsInstance generate_pms(int n, int m, int config, uint64_t seed) {
  if (config < 1 || config > 3) throw SemanticError("pms: config must be 1, 2, or 3");
  Rng rng(seed ^ 0x9d39247e33776d41ull);
  PmsInstance inst;
  inst.n = n;
  inst.machines = m;
  inst.p.resize(static_cast<size_t>(n));
  inst.w.resize(static_cast<size_t>(n));
  inst.release.assign(static_cast<size_t>(n), 0.0);
  inst.deadline.assign(static_cast<size_t>(n), 0.0);
  inst.original_id.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    inst.original_id[static_cast<size_t>(i)] = i;
    switch (config) {
      case 1:
        inst.p[static_cast<size_t>(i)] = rng.irange(1, 10);
        inst.w[static_cast<size_t>(i)] = rng.irange(10, 100);
        break;
      case 2:
        inst.p[static_cast<size_t>(i)] = rng.irange(1, 100);
        inst.w[static_cast<size_t>(i)] = rng.irange(1, 100);
        break;
      default:
        inst.p[static_cast<size_t>(i)] = rng.irange(10, 20);
        inst.w[static_cast<size_t>(i)] = rng.irange(10, 20);
        break;
    }
  }
  std::fill(inst.deadline.begin(), inst.deadline.end(), kInf);  // clamped to H below
  finalize_pms(inst);
  return inst;
}

class PmsFamily : public ProblemFamily {
 public:
  explicit PmsFamily(PmsInstance inst) : inst_(std::move(inst)) {}
  const PmsInstance& instance() const { return inst_; }

  ProblemKind kind() const override { return ProblemKind::Pms; }
  int convexity_row() const { return inst_.n; }

  MasterProblem build_master() const override {
    MasterProblem master;
    for (int i = 0; i < inst_.n; ++i) master.lp().add_row(RowSense::Eq, 1.0);
    master.lp().add_row(RowSense::Eq, static_cast<double>(inst_.machines));
    {
      Column empty;  // idle machine
      empty.cost = 0.0;
      empty.rows = {{convexity_row(), 1}};
      master.add(std::move(empty));
    }
    for (int j = 0; j < inst_.n; ++j) {
      if (inst_.release[static_cast<size_t>(j)] > 0) continue;
      Column c;
      c.cost = inst_.w[static_cast<size_t>(j)] * inst_.p[static_cast<size_t>(j)];
      c.rows = {{j, 1}, {convexity_row(), 1}};
      c.seq = {j};
      master.add(std::move(c));
    }
    for (int i = 0; i <= inst_.n; ++i) master.add_artificial(i);
    return master;
  }

  // Release/deadline tables with the path's window edits applied.
  std::pair<std::vector<double>, std::vector<double>> edited_windows(
      const std::vector<BranchingDecision>& decisions) const {
    std::vector<double> r = inst_.release, d = inst_.deadline;
    for (const auto& dec : decisions) {
      if (dec.kind == DecisionKind::JobDeadline)
        d[static_cast<size_t>(dec.a)] =
            std::min(d[static_cast<size_t>(dec.a)], static_cast<double>(dec.threshold));
      else if (dec.kind == DecisionKind::JobRelease)
        r[static_cast<size_t>(dec.a)] =
            std::max(r[static_cast<size_t>(dec.a)], static_cast<double>(dec.threshold));
    }
    for (int j = 0; j < inst_.n; ++j)
      if (r[static_cast<size_t>(j)] + inst_.p[static_cast<size_t>(j)] > d[static_cast<size_t>(j)])
        throw InfeasibleNodeError("pms: empty completion window for job " + std::to_string(j));
    return {std::move(r), std::move(d)};
  }

  std::unique_ptr<PricingAdapter> make_pricer(const std::vector<BranchingDecision>& decisions,
                                              bool) const override {
    auto [r, d] = edited_windows(decisions);
    return std::make_unique<Pricer>(inst_, std::move(r), std::move(d), convexity_row());
  }

  // Completion times of a schedule column: jobs pack with no idling from 0.
  static std::vector<double> completions(const PmsInstance& inst, const std::vector<int>& seq) {
    std::vector<double> c;
    double t = 0.0;
    for (int j : seq) {
      t += inst.p[static_cast<size_t>(j)];
      c.push_back(t);
    }
    return c;
  }

  bool column_compatible(const Column& c, const BranchingDecision& d) const override {
    if (d.kind != DecisionKind::JobDeadline && d.kind != DecisionKind::JobRelease) return true;
    auto comps = completions(inst_, c.seq);
    for (size_t k = 0; k < c.seq.size(); ++k) {
      if (c.seq[k] != d.a) continue;
      double completion = comps[k];
      if (d.kind == DecisionKind::JobDeadline && completion > d.threshold + 1e-9) return false;
      double start = completion - inst_.p[static_cast<size_t>(d.a)];
      if (d.kind == DecisionKind::JobRelease && start < d.threshold - 1e-9) return false;
    }
    return true;
  }

  BranchingOutcome select_branching(const std::vector<std::pair<const Column*, double>>& active,
                                    const std::vector<BranchingDecision>&) const override {
    // Per-job lambda-weighted completion profiles.
    struct Profile {
      double min_c = kInf, max_c = -kInf, mean = 0.0, weight = 0.0;
    };
    std::vector<Profile> prof(static_cast<size_t>(inst_.n));
    for (const auto& [col, lambda] : active) {
      auto comps = completions(inst_, col->seq);
      for (size_t k = 0; k < col->seq.size(); ++k) {
        Profile& pr = prof[static_cast<size_t>(col->seq[k])];
        pr.min_c = std::min(pr.min_c, comps[k]);
        pr.max_c = std::max(pr.max_c, comps[k]);
        pr.mean += lambda * comps[k];
        pr.weight += lambda;
      }
    }
    for (int j = 0; j < inst_.n; ++j) {
      const Profile& pr = prof[static_cast<size_t>(j)];
      if (pr.weight <= 1e-9 || pr.max_c - pr.min_c <= 1e-9) continue;
      double t_raw = pr.mean / pr.weight;
      int threshold = static_cast<int>(std::llround(t_raw));
      threshold = std::max(threshold, static_cast<int>(pr.min_c));
      threshold = std::min(threshold, static_cast<int>(pr.max_c) - 1);
      BranchingOutcome out;
      out.branch = {{DecisionKind::JobDeadline, j, 0, threshold},
                    {DecisionKind::JobRelease, j, 0,
                     threshold + 1 - static_cast<int>(inst_.p[static_cast<size_t>(j)])}};
      return out;
    }
    // Every covered job has a consistent completion time: chain the jobs
    // into machines directly; the result costs exactly the node bound.
    return assemble_consistent(active);
  }

 private:
  BranchingOutcome assemble_consistent(
      const std::vector<std::pair<const Column*, double>>& active) const {
    std::vector<double> completion(static_cast<size_t>(inst_.n), -1.0);
    for (const auto& [col, lambda] : active) {
      auto comps = completions(inst_, col->seq);
      for (size_t k = 0; k < col->seq.size(); ++k)
        completion[static_cast<size_t>(col->seq[k])] = comps[k];
    }
    std::vector<int> jobs;
    for (int j = 0; j < inst_.n; ++j) {
      if (completion[static_cast<size_t>(j)] < 0)
        throw NoBranchingCandidate("pms: job uncovered at a fractional node");
      jobs.push_back(j);
    }
    std::sort(jobs.begin(), jobs.end(), [&](int a, int b) {
      double sa = completion[static_cast<size_t>(a)] - inst_.p[static_cast<size_t>(a)];
      double sb = completion[static_cast<size_t>(b)] - inst_.p[static_cast<size_t>(b)];
      if (sa != sb) return sa < sb;
      return a < b;
    });
    std::vector<std::vector<int>> chains;
    std::vector<double> makespan;
    for (int j : jobs) {
      double start = completion[static_cast<size_t>(j)] - inst_.p[static_cast<size_t>(j)];
      bool placed = false;
      for (size_t c = 0; c < chains.size() && !placed; ++c) {
        if (std::abs(makespan[c] - start) <= 1e-9) {
          chains[c].push_back(j);
          makespan[c] = completion[static_cast<size_t>(j)];
          placed = true;
        }
      }
      if (!placed) {
        if (std::abs(start) > 1e-9)
          throw NoBranchingCandidate("pms: consistent completions do not chain");
        chains.push_back({j});
        makespan.push_back(completion[static_cast<size_t>(j)]);
      }
    }
    if (static_cast<int>(chains.size()) > inst_.machines)
      throw NoBranchingCandidate("pms: consistent completions exceed the machine count");
    BranchingOutcome out;
    out.incumbent = std::vector<std::pair<Column, int>>{};
    for (const auto& chain : chains) {
      Column c;
      c.seq = chain;
      c.rows.push_back({inst_.n, 1});
      for (int j : chain) c.rows.push_back({j, 1});
      std::sort(c.rows.begin(), c.rows.end());
      c.cost = 0.0;
      for (int j : chain)
        c.cost += inst_.w[static_cast<size_t>(j)] * completion[static_cast<size_t>(j)];
      out.incumbent->push_back({std::move(c), 1});
    }
    for (int pad = static_cast<int>(chains.size()); pad < inst_.machines; ++pad) {
      Column empty;
      empty.cost = 0.0;
      empty.rows = {{inst_.n, 1}};
      out.incumbent->push_back({std::move(empty), 1});
    }
    return out;
  }

 public:
  // Include/skip DP over jobs in Smith order; t is the schedule makespan so
  // far, and including job j at time t completes it at t + p_j.
  class Pricer : public PricingAdapter {
   public:
    Pricer(const PmsInstance& inst, std::vector<double> release, std::vector<double> deadline,
           int convexity_row)
        : inst_(&inst),
          release_(std::move(release)),
          deadline_(std::move(deadline)),
          convexity_row_(convexity_row) {}

    Model rebuild(const std::vector<double>& duals) override {
      uint32_t n = static_cast<uint32_t>(inst_->n);
      ModelBuilder b;
      auto j = b.element_var("j", n, Pref::None, 0);
      auto t = b.numeric_var("t", Pref::None, 0.0);
      int pt = b.numeric_table("p", inst_->p, {n});
      int wt = b.numeric_table("w", inst_->w, {n});
      int rt = b.numeric_table("r", release_, {n});
      int dt = b.numeric_table("d", deadline_, {n});
      std::vector<double> pi(n);
      for (uint32_t x = 0; x < n; ++x) pi[x] = duals[x];
      int pit = b.numeric_table("pi", pi, {n});

      Transition& inc = b.transition("include");
      inc.preconditions.push_back(cmp_elem(nodes::CmpOp::Lt, j, elem_const(n)));
      inc.preconditions.push_back(b.num_at(rt, j) <= t.expr());
      inc.preconditions.push_back(t.expr() + b.num_at(pt, j) <= b.num_at(dt, j));
      inc.elem_effects.push_back({j.slot, elem_add(j, 1)});
      inc.num_effects.push_back({t.slot, t.expr() + b.num_at(pt, j)});
      inc.weight = b.num_at(wt, j) * (t.expr() + b.num_at(pt, j)) - b.num_at(pit, j);

      Transition& skip = b.transition("skip");
      skip.preconditions.push_back(cmp_elem(nodes::CmpOp::Lt, j, elem_const(n)));
      skip.elem_effects.push_back({j.slot, elem_add(j, 1)});
      skip.weight = num_const(0.0);

      b.base_case({cmp_elem(nodes::CmpOp::Eq, j, elem_const(n))}, num_const(0.0));

      // Knapsack bound over the not-yet-considered jobs {j..n-1}: profit of
      // scheduling k is at most pi_k - w_k (r_k + p_k); processing consumes
      // at least p_k of the remaining horizon H - t.
      std::vector<NumericExpr> profits, ws;
      for (uint32_t k = 0; k < n; ++k) {
        profits.push_back(num_const(pi[k] - inst_->w[k] * (release_[k] + inst_->p[k])));
        ws.push_back(num_const(inst_->p[k]));
      }
      SetExpr remaining =
          set_filter(set_const(Bitset::full(n)), cmp_elem(nodes::CmpOp::Le, j, elem_param()));
      b.dual_bound(-knapsack_bound(remaining, num_const(inst_->horizon) - t.expr(),
                                   std::move(profits), std::move(ws)));
      return b.build();
    }

    Column extract(const Model& model, const std::vector<int>& path) const override {
      Column c;
      c.cost = 0.0;
      c.rows.push_back({convexity_row_, 1});
      auto states = replay(model, path);
      for (size_t k = 0; k < path.size(); ++k) {
        if (model.transitions[static_cast<size_t>(path[k])].name != "include") continue;
        int job = static_cast<int>(states[k].elems[0]);
        double completion = states[k + 1].nums[0];
        c.rows.push_back({job, 1});
        c.seq.push_back(job);
        c.cost += inst_->w[static_cast<size_t>(job)] * completion;
      }
      std::sort(c.rows.begin(), c.rows.end());
      return c;
    }

    double offset(const std::vector<double>& duals) const override {
      return -duals[static_cast<size_t>(convexity_row_)];
    }

   private:
    const PmsInstance* inst_;
    std::vector<double> release_, deadline_;
    int convexity_row_;
  };

 private:
  PmsInstance inst_;
};

}  // namespace bpkit::problems
