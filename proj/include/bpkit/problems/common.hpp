// Shared problem-family machinery: branching decisions, deterministic random
// generation, Ryan-Foster grouping, and the family interface consumed by the
// branch-and-price driver and the CLI.
#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bpkit/colgen.hpp"

namespace bpkit {

struct InfeasibleNodeError : Error {
  using Error::Error;
};
struct NoBranchingCandidate : Error {
  using Error::Error;
};

enum class ProblemKind { Bpp, Gcp, Pms, Mrasp, Vrptw, CumVrptw, Pdptw };

inline const char* kind_name(ProblemKind k) {
  switch (k) {
    case ProblemKind::Bpp: return "bpp";
    case ProblemKind::Gcp: return "gcp";
    case ProblemKind::Pms: return "pms";
    case ProblemKind::Mrasp: return "mrasp";
    case ProblemKind::Vrptw: return "vrptw";
    case ProblemKind::CumVrptw: return "cumvrptw";
    case ProblemKind::Pdptw: return "pdptw";
  }
  return "?";
}

enum class DecisionKind {
  PairItems,         // Ryan-Foster: a and b share a pattern
  ConflictItems,     // Ryan-Foster: a and b in different patterns
  ForbidArc,         // routing: arc (a, b) disabled
  ForceArc,          // routing: arc (a, b) enforced
  JobDeadline,       // scheduling: job a completes by threshold
  JobRelease,        // scheduling: job a starts at or after threshold
  ForbidSuccession,  // runway plans: b never immediately after a
  ForceSuccession,   // runway plans: a's successor is b, b's predecessor is a
};

struct BranchingDecision {
  DecisionKind kind;
  int a = 0;
  int b = 0;
  int threshold = 0;

  bool operator==(const BranchingDecision& o) const {
    return kind == o.kind && a == o.a && b == o.b && threshold == o.threshold;
  }
};

// Either a left/right branching pair or a ready-made integral solution whose
// cost matches the node bound (degenerate fractional vertices in scheduling
// can be completed directly).
struct BranchingOutcome {
  std::optional<std::pair<BranchingDecision, BranchingDecision>> branch;
  std::optional<std::vector<std::pair<Column, int>>> incumbent;
};

// One problem family: master construction, decision-aware pricing, column
// compatibility, and the branching rule.
class ProblemFamily {
 public:
  virtual ~ProblemFamily() = default;
  virtual ProblemKind kind() const = 0;
  virtual MasterProblem build_master() const = 0;
  virtual std::unique_ptr<PricingAdapter> make_pricer(
      const std::vector<BranchingDecision>& decisions, bool elementary) const = 0;
  virtual bool column_compatible(const Column& c, const BranchingDecision& d) const = 0;
  virtual bool column_elementary(const Column&) const { return true; }
  // Called with the active fractional columns (index, value) pairs.
  virtual BranchingOutcome select_branching(
      const std::vector<std::pair<const Column*, double>>& active,
      const std::vector<BranchingDecision>& path) const = 0;
  // Route families branch on an arc inside a non-elementary column's cycle.
  virtual std::optional<std::pair<BranchingDecision, BranchingDecision>> branch_on_cycle(
      const Column&, const std::vector<BranchingDecision>&) const {
    return std::nullopt;
  }
};

namespace problems {

// Deterministic across platforms: raw engine output with modulo, never
// std::uniform_int_distribution (whose mapping is implementation-defined).
class Rng {
 public:
  explicit Rng(uint64_t seed) : g_(seed) {}
  uint64_t next(uint64_t bound) { return g_() % bound; }
  int irange(int lo, int hi) { return lo + static_cast<int>(next(static_cast<uint64_t>(hi - lo + 1))); }
  double chance() { return static_cast<double>(g_() % 1000000) / 1000000.0; }

 private:
  std::mt19937_64 g_;
};

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<size_t>(n)) {
    for (int i = 0; i < n; ++i) parent_[static_cast<size_t>(i)] = i;
  }
  int find(int x) {
    while (parent_[static_cast<size_t>(x)] != x) {
      parent_[static_cast<size_t>(x)] = parent_[static_cast<size_t>(parent_[static_cast<size_t>(x)])];
      x = parent_[static_cast<size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent_[static_cast<size_t>(find(a))] = find(b); }

 private:
  std::vector<int> parent_;
};

// Items partitioned into groups by the pair decisions; conflicts propagate to
// whole groups. Group ids are ordered by smallest member for determinism.
struct RfGroups {
  int count = 0;
  std::vector<int> group_of;              // item -> group
  std::vector<std::vector<int>> members;  // group -> sorted items
  std::vector<Bitset> conflicts;          // H_g over the group universe
};

inline RfGroups build_rf_groups(int n_items, const std::vector<BranchingDecision>& decisions,
                                const std::vector<std::pair<int, int>>& base_conflicts) {
  UnionFind uf(n_items);
  for (const auto& d : decisions)
    if (d.kind == DecisionKind::PairItems) uf.unite(d.a, d.b);

  RfGroups g;
  g.group_of.assign(static_cast<size_t>(n_items), -1);
  for (int i = 0; i < n_items; ++i) {
    int root = uf.find(i);
    if (g.group_of[static_cast<size_t>(root)] < 0) {
      g.group_of[static_cast<size_t>(root)] = g.count++;
      g.members.push_back({});
    }
    g.group_of[static_cast<size_t>(i)] = g.group_of[static_cast<size_t>(root)];
    g.members[static_cast<size_t>(g.group_of[static_cast<size_t>(i)])].push_back(i);
  }
  g.conflicts.assign(static_cast<size_t>(g.count), Bitset(static_cast<uint32_t>(g.count)));
  auto add_conflict = [&](int i, int k, const char* what) {
    int gi = g.group_of[static_cast<size_t>(i)], gk = g.group_of[static_cast<size_t>(k)];
    if (gi == gk) throw InfeasibleNodeError(std::string("conflicting items forced together: ") + what);
    g.conflicts[static_cast<size_t>(gi)].add(static_cast<uint32_t>(gk));
    g.conflicts[static_cast<size_t>(gk)].add(static_cast<uint32_t>(gi));
  };
  for (const auto& [u, v] : base_conflicts) add_conflict(u, v, "instance conflict");
  for (const auto& d : decisions)
    if (d.kind == DecisionKind::ConflictItems) add_conflict(d.a, d.b, "branching conflict");
  return g;
}

// Ryan-Foster candidate: the undecided, non-co-grouped, non-conflicting item
// pair whose co-occurrence value is closest to 1/2.
inline std::optional<std::pair<int, int>> most_fractional_pair(
    int n_items, const std::vector<std::pair<const Column*, double>>& active, const RfGroups& g) {
  std::vector<std::vector<double>> co(static_cast<size_t>(n_items),
                                      std::vector<double>(static_cast<size_t>(n_items), 0.0));
  for (const auto& [col, lambda] : active)
    for (size_t x = 0; x < col->seq.size(); ++x)
      for (size_t y = x + 1; y < col->seq.size(); ++y) {
        int i = std::min(col->seq[x], col->seq[y]);
        int k = std::max(col->seq[x], col->seq[y]);
        co[static_cast<size_t>(i)][static_cast<size_t>(k)] += lambda;
      }
  std::optional<std::pair<int, int>> best;
  double best_score = kInf;
  for (int i = 0; i < n_items; ++i)
    for (int k = i + 1; k < n_items; ++k) {
      double v = co[static_cast<size_t>(i)][static_cast<size_t>(k)];
      double frac = v - std::floor(v);
      if (frac < 1e-6 || frac > 1.0 - 1e-6) continue;
      int gi = g.group_of[static_cast<size_t>(i)], gk = g.group_of[static_cast<size_t>(k)];
      if (gi == gk) continue;
      if (g.conflicts[static_cast<size_t>(gi)].contains(static_cast<uint32_t>(gk))) continue;
      double score = std::abs(frac - 0.5);
      if (score < best_score - 1e-12) {
        best_score = score;
        best = {{i, k}};
      }
    }
  return best;
}

// Truncated one-decimal Euclidean distance scaled to integers, the routing
// benchmark convention.
inline double scaled_distance(double x1, double y1, double x2, double y2) {
  double d = std::sqrt((x1 - x2) * (x1 - x2) + (y1 - y2) * (y1 - y2));
  return std::floor(d * 10.0);
}

}  // namespace problems
}  // namespace bpkit
