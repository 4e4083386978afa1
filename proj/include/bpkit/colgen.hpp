// The column-generation loop: solve the restricted master, extract duals,
// rebuild the pricing model, collect negative-reduced-cost columns, and stop
// with a convergence certificate once pricing proves none remain.
#pragma once

#include <functional>
#include <iostream>
#include <unordered_map>
#include <vector>

#include "bpkit/search.hpp"
#include "bpkit/simplex.hpp"

namespace bpkit {

inline constexpr double kRcEps = 1e-6;          // reduced-cost convergence tolerance
inline constexpr double kArtificialCost = 1e6;  // feasibility columns in the master

// A priced combinatorial object: master cost, integer row coefficients, the
// transition sequence that produced it, and a problem-specific payload
// (item/vertex set, job or aircraft order, route location sequence).
struct Column {
  double cost = 0.0;
  std::vector<std::pair<int, int>> rows;  // (row index, coefficient), sorted
  std::vector<int> seq;
  std::vector<int> path;
  bool artificial = false;

  size_t hash() const {
    size_t h = hash_double(cost);
    for (auto [r, c] : rows) {
      hash_combine(h, std::hash<int>{}(r));
      hash_combine(h, std::hash<int>{}(c));
    }
    return h;
  }
  bool same_entries(const Column& o) const { return cost == o.cost && rows == o.rows; }
};

// c_p minus the dual-weighted row coefficients, over all master rows.
inline double reduced_cost(const Column& column, const std::vector<double>& duals) {
  double rc = column.cost;
  for (auto [row, coeff] : column.rows) {
    if (row < 0 || row >= static_cast<int>(duals.size()))
      throw DimensionMismatchError("reduced_cost: row index outside dual vector");
    rc -= coeff * duals[static_cast<size_t>(row)];
  }
  return rc;
}

// The restricted master problem plus the payloads of its columns.
class MasterProblem {
 public:
  LinearProgram& lp() { return lp_; }
  const LinearProgram& lp() const { return lp_; }
  const std::vector<Column>& columns() const { return columns_; }
  const Column& column(int j) const { return columns_[static_cast<size_t>(j)]; }
  int num_columns() const { return static_cast<int>(columns_.size()); }

  bool contains(const Column& c) const {
    auto range = index_.equal_range(c.hash());
    for (auto it = range.first; it != range.second; ++it)
      if (columns_[static_cast<size_t>(it->second)].same_entries(c)) return true;
    return false;
  }

  int add(Column c) {
    std::sort(c.rows.begin(), c.rows.end());
    std::vector<std::pair<int, double>> coeffs;
    coeffs.reserve(c.rows.size());
    for (auto [r, v] : c.rows) coeffs.push_back({r, static_cast<double>(v)});
    int j = lp_.add_column(c.cost, coeffs);
    index_.emplace(c.hash(), j);
    columns_.push_back(std::move(c));
    return j;
  }

  int add_artificial(int row, double cost = kArtificialCost) {
    Column c;
    c.cost = cost;
    c.rows = {{row, 1}};
    c.artificial = true;
    return add(std::move(c));
  }

 private:
  LinearProgram lp_;
  std::vector<Column> columns_;
  std::unordered_multimap<size_t, int> index_;
};

// Injects duals into the pricing model, converts pricing solutions back into
// master columns, and supplies the constant that turns a pricing objective
// value into a true reduced cost.
class PricingAdapter {
 public:
  virtual ~PricingAdapter() = default;
  virtual Model rebuild(const std::vector<double>& duals) = 0;
  virtual Column extract(const Model& model, const std::vector<int>& path) const = 0;
  virtual double offset(const std::vector<double>& duals) const = 0;
};

struct ColgenConfig {
  Pricer pricer = Pricer::Labeling;
  int max_columns_per_iter = 200;
  long max_iterations = 1000000;
  double time_limit = kInf;
  double eps_rc = kRcEps;
  int verbosity = 0;
  std::ostream* diag = nullptr;
  SearchLimits search;  // pruning toggles and per-solve limits
  // Invoked after every pricing solve (dual-bound audits and similar).
  std::function<void(const Model&, const SearchResult&)> on_pricing_done;
};

enum class ColgenStatus { Converged, IterationLimit, TimeLimit };

struct ColgenResult {
  ColgenStatus status = ColgenStatus::IterationLimit;
  double lp_value = kInf;
  std::vector<double> duals;
  long iterations = 0;
  long columns_added = 0;
  double min_reduced_cost_at_exit = 0.0;
  LpSolution last_lp;
  Basis basis;
  SearchStats pricing_stats;  // aggregated over all pricing solves
  long pricing_solves = 0;
};

inline ColgenResult run_column_generation(MasterProblem& master, PricingAdapter& adapter,
                                          const ColgenConfig& config, const Basis* warm = nullptr) {
  StopWatch watch;
  ColgenResult out;
  Basis basis = warm ? *warm : Basis{};

  for (out.iterations = 1;; ++out.iterations) {
    auto [sol, next_basis] = solve_lp(master.lp(), basis.empty() ? nullptr : &basis);
    basis = std::move(next_basis);
    if (sol.status != LpStatus::Optimal)
      throw Error("column generation: master LP not optimal (missing artificial seeds?)");
    out.lp_value = sol.objective;
    out.duals = sol.duals;
    out.last_lp = sol;

    Model model = adapter.rebuild(sol.duals);
    double off = adapter.offset(sol.duals);

    SearchLimits limits = config.search;
    limits.cost_cutoff = -off - config.eps_rc;
    limits.collect_all_improving = config.pricer == Pricer::Labeling;
    double elapsed = watch.seconds();
    if (config.time_limit < kInf)
      limits.time_limit = std::max(0.0, config.time_limit - elapsed);

    SearchResult priced = solve(model, config.pricer, limits);
    ++out.pricing_solves;
    out.pricing_stats.expanded += priced.stats.expanded;
    out.pricing_stats.generated += priced.stats.generated;
    out.pricing_stats.pruned_by_bound += priced.stats.pruned_by_bound;
    out.pricing_stats.pruned_by_dominance += priced.stats.pruned_by_dominance;
    out.pricing_stats.wall_time += priced.stats.wall_time;
    if (config.on_pricing_done) config.on_pricing_done(model, priced);

    if (priced.status == SearchStatus::LimitReached) {
      out.status = ColgenStatus::TimeLimit;
      out.min_reduced_cost_at_exit = -kInf;  // no proof this round
      out.basis = std::move(basis);
      return out;
    }

    if (priced.solutions.empty()) {
      // Pricing proved there is no column with reduced cost < -eps_rc.
      out.status = ColgenStatus::Converged;
      out.min_reduced_cost_at_exit =
          priced.status == SearchStatus::Infeasible ? kInf : priced.best_bound + off;
      if (config.verbosity > 0 && config.diag)
        *config.diag << "colgen it=" << out.iterations << " lp=" << out.lp_value
                     << " converged min_rc=" << out.min_reduced_cost_at_exit << "\n";
      out.basis = std::move(basis);
      return out;
    }

    out.min_reduced_cost_at_exit = priced.best().cost + off;

    // Best solutions last; admit up to the per-iteration cap, best first.
    int admitted = 0;
    for (auto it = priced.solutions.rbegin();
         it != priced.solutions.rend() && admitted < config.max_columns_per_iter; ++it) {
      Column col = adapter.extract(model, it->path);
      col.path = it->path;
      double direct = reduced_cost(col, sol.duals);
      double via_dp = it->cost + off;
      if (std::abs(direct - via_dp) > 1e-6 * (1.0 + std::abs(direct)))
        throw PricerFailure("adapter inconsistency: extracted column reduced cost " +
                            std::to_string(direct) + " vs pricing value " +
                            std::to_string(via_dp));
      if (master.contains(col)) continue;
      master.add(std::move(col));
      ++admitted;
    }
    out.columns_added += admitted;
    if (config.verbosity > 0 && config.diag)
      *config.diag << "colgen it=" << out.iterations << " lp=" << out.lp_value
                   << " cols+=" << admitted << " min_rc=" << out.min_reduced_cost_at_exit
                   << "\n";
    if (admitted == 0)
      throw PricerFailure("pricing found improving columns but all duplicate the master");

    if (out.iterations >= config.max_iterations) {
      out.status = ColgenStatus::IterationLimit;
      out.basis = std::move(basis);
      return out;
    }
    if (watch.seconds() > config.time_limit) {
      out.status = ColgenStatus::TimeLimit;
      out.basis = std::move(basis);
      return out;
    }
  }
}

}  // namespace bpkit
