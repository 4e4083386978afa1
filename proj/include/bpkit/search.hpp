// State-space solvers over a model: exhaustive memoized Bellman evaluation,
// best-first search on g + eta, complete anytime beam search with doubling
// widths, and the labeling solver ordered lexicographically by resources.
#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <memory>
#include <queue>
#include <unordered_map>
#include <vector>

#include "bpkit/model.hpp"

namespace bpkit {

// New incumbents must beat the current best by this margin, and states are
// pruned once g + eta reaches the incumbent minus the same margin.
inline constexpr double kImproveEps = 1e-9;

struct SearchLimits {
  double time_limit = kInf;        // seconds
  uint64_t node_limit = UINT64_MAX;  // expansions
  double cost_cutoff = kInf;       // initial incumbent (gamma bar 0)
  bool collect_all_improving = true;
  bool use_dominance = true;
  bool use_dual_bounds = true;
  bool collect_visited = false;  // record every expanded state (audits)
};

enum class SearchStatus { Optimal, Feasible, Infeasible, LimitReached };

struct Solution {
  double cost;
  std::vector<int> path;  // transition indices from the target state
};

struct SearchStats {
  uint64_t expanded = 0;
  uint64_t generated = 0;
  uint64_t pruned_by_bound = 0;
  uint64_t pruned_by_dominance = 0;
  double wall_time = 0.0;
};

struct SearchResult {
  SearchStatus status = SearchStatus::Infeasible;
  // Strictly improving solutions, best last (the set Sigma).
  std::vector<Solution> solutions;
  double best_bound = kInf;
  SearchStats stats;
  std::vector<State> visited;  // filled only when collect_visited

  bool optimal() const { return status == SearchStatus::Optimal; }
  const Solution& best() const { return solutions.back(); }
};

class Deadline {
 public:
  explicit Deadline(double seconds) {
    if (seconds < kInf)
      end_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                std::chrono::duration<double>(seconds));
    else
      unlimited_ = true;
  }
  bool expired() const { return !unlimited_ && Clock::now() >= end_; }

 private:
  using Clock = std::chrono::steady_clock;
  bool unlimited_ = false;
  Clock::time_point end_{};
};

class StopWatch {
 public:
  StopWatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

namespace detail {

// Hash table keyed by the non-resource variables; each bucket keeps states
// that are pairwise non-dominated once their g-values are considered.
class DominanceFrontier {
 public:
  explicit DominanceFrontier(const Model& m) : model_(&m) {}

  struct Entry {
    State state;
    double g;
    int node;  // owning search node, -1 if unused
  };

  // Line 15 of the labeling scheme: is some stored state preferred to s with
  // a better-or-equal g?
  bool covered(const State& s, double g) const {
    auto it = buckets_.find(hash_nonresource(*model_, s));
    if (it == buckets_.end()) return false;
    for (const Entry& e : it->second)
      if (e.g <= g && dominates(*model_, e.state, s)) return true;
    return false;
  }

  // Line 16: drop stored states that s dominates with a better-or-equal g.
  // Returns the search nodes owning the evicted entries.
  template <typename OnEvict>
  void evict_dominated(const State& s, double g, OnEvict&& on_evict) {
    auto it = buckets_.find(hash_nonresource(*model_, s));
    if (it == buckets_.end()) return;
    auto& vec = it->second;
    for (size_t i = 0; i < vec.size();) {
      if (g <= vec[i].g && dominates(*model_, s, vec[i].state)) {
        on_evict(vec[i].node);
        vec[i] = std::move(vec.back());
        vec.pop_back();
      } else {
        ++i;
      }
    }
  }

  void insert(State s, double g, int node) {
    buckets_[hash_nonresource(*model_, s)].push_back({std::move(s), g, node});
  }

  // Invariant check used by tests: no stored pair violates the frontier rule.
  bool invariant_holds() const {
    for (const auto& [key, vec] : buckets_) {
      for (size_t i = 0; i < vec.size(); ++i)
        for (size_t j = 0; j < vec.size(); ++j) {
          if (i == j) continue;
          if (vec[i].g <= vec[j].g && dominates(*model_, vec[i].state, vec[j].state)) return false;
        }
    }
    return true;
  }

 private:
  const Model* model_;
  std::unordered_map<size_t, std::vector<Entry>> buckets_;
};

struct Node {
  State state;
  double g;
  double eta;
  int parent;
  int via;  // transition index
  bool retired = false;
};

inline std::vector<int> trace_path(const std::vector<Node>& pool, int node) {
  std::vector<int> path;
  for (int i = node; pool[static_cast<size_t>(i)].via >= 0; i = pool[static_cast<size_t>(i)].parent)
    path.push_back(pool[static_cast<size_t>(i)].via);
  std::reverse(path.begin(), path.end());
  return path;
}

inline void record_solution(SearchResult& res, double cost, std::vector<int> path, double& gamma) {
  gamma = cost;
  res.solutions.push_back({cost, std::move(path)});
}

inline void finalize_solutions(SearchResult& res, const SearchLimits& limits) {
  if (!limits.collect_all_improving && res.solutions.size() > 1)
    res.solutions.erase(res.solutions.begin(), res.solutions.end() - 1);
}

}  // namespace detail

// Exact evaluation of the Bellman recursion by memoized depth-first descent.
// Serves as the oracle the other solvers are audited against. Requires the
// reachable state graph to be acyclic.
class ExhaustiveEvaluator {
 public:
  explicit ExhaustiveEvaluator(const Model& m) : model_(&m) {}

  // Value of the recursion from s; +inf when infeasible. best_transition
  // records the argmin for path reconstruction.
  double value(const State& s) {
    size_t h = hash_full(s);
    auto range = memo_.equal_range(h);
    for (auto it = range.first; it != range.second; ++it)
      if (it->second.state == s) {
        if (it->second.on_stack) throw CycleDetectedError("cycle in the reachable state graph");
        return it->second.value;
      }
    auto it = memo_.emplace(h, Rec{s, 0.0, -1, true});
    double v;
    int best = -1;
    if (!check_state_constraints(*model_, s)) {
      v = kInf;
    } else if (auto base = is_base(*model_, s)) {
      v = *base;
    } else {
      v = kInf;
      for (int ti : applicable_transitions(*model_, s)) {
        const Transition& t = model_->transitions[static_cast<size_t>(ti)];
        double w = transition_weight(*model_, t, s);
        double sub = value(apply(*model_, t, s));
        if (w + sub < v) {
          v = w + sub;
          best = ti;
        }
        ++expansions_;
      }
    }
    // The recursive call may rehash; find our record again.
    auto range2 = memo_.equal_range(h);
    for (auto it2 = range2.first; it2 != range2.second; ++it2)
      if (it2->second.state == s) {
        it2->second.value = v;
        it2->second.best_transition = best;
        it2->second.on_stack = false;
        break;
      }
    (void)it;
    return v;
  }

  std::vector<int> extract_path(const State& from) const {
    std::vector<int> path;
    State s = from;
    while (true) {
      const Rec* r = find(s);
      if (!r || r->best_transition < 0) break;
      path.push_back(r->best_transition);
      s = apply(*model_, model_->transitions[static_cast<size_t>(r->best_transition)], s);
    }
    return path;
  }

  uint64_t expansions() const { return expansions_; }

 private:
  struct Rec {
    State state;
    double value;
    int best_transition;
    bool on_stack;
  };
  const Rec* find(const State& s) const {
    auto range = memo_.equal_range(hash_full(s));
    for (auto it = range.first; it != range.second; ++it)
      if (it->second.state == s) return &it->second;
    return nullptr;
  }
  const Model* model_;
  std::unordered_multimap<size_t, Rec> memo_;
  uint64_t expansions_ = 0;
};

inline SearchResult solve_exhaustive(const Model& model, const SearchLimits& limits = {}) {
  StopWatch watch;
  SearchResult res;
  ExhaustiveEvaluator eval(model);
  double v = eval.value(model.target);
  res.stats.expanded = eval.expansions();
  if (v == kInf) {
    res.status = SearchStatus::Infeasible;
    res.best_bound = kInf;
  } else {
    res.status = SearchStatus::Optimal;
    res.best_bound = v;
    if (v < limits.cost_cutoff - kImproveEps)
      res.solutions.push_back({v, eval.extract_path(model.target)});
    else
      res.best_bound = std::max(v, limits.cost_cutoff);
  }
  res.stats.wall_time = watch.seconds();
  return res;
}

// Best-first search on f = g + eta with dominance pruning. Because transition
// weights may be negative, the first base state popped is not necessarily
// optimal; the search runs until the open list empties or its minimum f-value
// reaches the incumbent, and re-expands states reached with strictly better g.
inline SearchResult solve_best_first(const Model& model, const SearchLimits& limits = {}) {
  StopWatch watch;
  Deadline deadline(limits.time_limit);
  SearchResult res;
  if (!check_state_constraints(model, model.target)) {
    res.status = SearchStatus::Infeasible;
    res.stats.wall_time = watch.seconds();
    return res;
  }

  std::vector<detail::Node> pool;
  detail::DominanceFrontier frontier(model);
  double gamma = limits.cost_cutoff;

  struct HeapItem {
    double f;
    double g;
    uint64_t seq;
    int node;
  };
  auto heap_after = [](const HeapItem& a, const HeapItem& b) {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g > b.g;
    return a.seq > b.seq;
  };
  std::priority_queue<HeapItem, std::vector<HeapItem>, decltype(heap_after)> open(heap_after);
  uint64_t seq = 0;

  double eta0 = limits.use_dual_bounds ? eval_dual_bound(model, model.target) : -kInf;
  pool.push_back({model.target, 0.0, eta0, -1, -1});
  frontier.insert(model.target, 0.0, 0);
  open.push({std::max(eta0, -kInf), 0.0, seq++, 0});
  res.stats.generated = 1;

  bool limit_hit = false;
  double frontier_f = kInf;  // min f still open when a limit stops the search
  while (!open.empty()) {
    HeapItem item = open.top();
    if (item.f >= gamma - kImproveEps) break;  // nothing left can improve
    open.pop();
    detail::Node& node = pool[static_cast<size_t>(item.node)];
    if (node.retired || item.g != node.g) continue;  // lazy deletion
    if (res.stats.expanded >= limits.node_limit ||
        (res.stats.expanded % 1024 == 0 && deadline.expired())) {
      limit_hit = true;
      frontier_f = item.f;
      break;
    }
    ++res.stats.expanded;
    if (limits.collect_visited) res.visited.push_back(node.state);

    if (auto base = is_base(model, node.state)) {
      double cost = node.g + *base;
      if (cost < gamma - kImproveEps)
        detail::record_solution(res, cost, detail::trace_path(pool, item.node), gamma);
      continue;  // base states are terminal
    }

    State snapshot = node.state;
    double g_here = node.g;
    int parent_id = item.node;
    for (int ti : applicable_transitions(model, snapshot)) {
      const Transition& t = model.transitions[static_cast<size_t>(ti)];
      double g_next = g_here + transition_weight(model, t, snapshot);
      State next = apply(model, t, snapshot);
      if (!check_state_constraints(model, next)) continue;
      ++res.stats.generated;
      if (limits.use_dominance) {
        if (frontier.covered(next, g_next)) {
          ++res.stats.pruned_by_dominance;
          continue;
        }
        frontier.evict_dominated(next, g_next, [&](int evicted) {
          if (evicted >= 0) pool[static_cast<size_t>(evicted)].retired = true;
        });
      }
      double eta = limits.use_dual_bounds ? eval_dual_bound(model, next) : -kInf;
      if (g_next + eta >= gamma - kImproveEps) {
        ++res.stats.pruned_by_bound;
        continue;
      }
      pool.push_back({std::move(next), g_next, eta, parent_id, ti});
      int id = static_cast<int>(pool.size()) - 1;
      if (limits.use_dominance) frontier.insert(pool.back().state, g_next, id);
      open.push({g_next + std::max(eta, -kInf), g_next, seq++, id});
    }
  }

  res.stats.wall_time = watch.seconds();
  detail::finalize_solutions(res, limits);
  if (limit_hit) {
    res.status = SearchStatus::LimitReached;
    res.best_bound = std::min(gamma, frontier_f);
    return res;
  }
  if (!res.solutions.empty()) {
    res.status = SearchStatus::Optimal;
    res.best_bound = res.solutions.back().cost;
  } else if (limits.cost_cutoff < kInf) {
    res.status = SearchStatus::Optimal;  // proved nothing beats the cutoff
    res.best_bound = limits.cost_cutoff;
  } else {
    res.status = SearchStatus::Infeasible;
    res.best_bound = kInf;
  }
  return res;
}

// Complete anytime beam search: breadth-wise beam search by transition depth,
// keeping the k lowest-f non-dominated states per layer, restarted with
// doubled width until an inner run never drops a state for width.
inline SearchResult solve_cabs(const Model& model, const SearchLimits& limits = {}) {
  StopWatch watch;
  Deadline deadline(limits.time_limit);
  SearchResult res;
  if (!check_state_constraints(model, model.target)) {
    res.status = SearchStatus::Infeasible;
    res.stats.wall_time = watch.seconds();
    return res;
  }

  double gamma = limits.cost_cutoff;
  bool proved = false;
  bool limit_hit = false;

  for (uint64_t width = 1; !proved && !limit_hit; width *= 2) {
    std::vector<detail::Node> pool;
    detail::DominanceFrontier frontier(model);
    bool overflowed = false;

    double eta0 = limits.use_dual_bounds ? eval_dual_bound(model, model.target) : -kInf;
    pool.push_back({model.target, 0.0, eta0, -1, -1});
    frontier.insert(model.target, 0.0, 0);
    std::vector<int> layer = {0};
    ++res.stats.generated;

    while (!layer.empty()) {
      std::vector<int> candidates;
      for (int id : layer) {
        if (pool[static_cast<size_t>(id)].retired) continue;
        if (res.stats.expanded >= limits.node_limit ||
            (res.stats.expanded % 1024 == 0 && deadline.expired())) {
          limit_hit = true;
          break;
        }
        ++res.stats.expanded;
        if (limits.collect_visited) res.visited.push_back(pool[static_cast<size_t>(id)].state);
        State snapshot = pool[static_cast<size_t>(id)].state;
        double g_here = pool[static_cast<size_t>(id)].g;

        if (auto base = is_base(model, snapshot)) {
          double cost = g_here + *base;
          if (cost < gamma - kImproveEps)
            detail::record_solution(res, cost, detail::trace_path(pool, id), gamma);
          continue;
        }
        for (int ti : applicable_transitions(model, snapshot)) {
          const Transition& t = model.transitions[static_cast<size_t>(ti)];
          double g_next = g_here + transition_weight(model, t, snapshot);
          State next = apply(model, t, snapshot);
          if (!check_state_constraints(model, next)) continue;
          ++res.stats.generated;
          if (limits.use_dominance) {
            if (frontier.covered(next, g_next)) {
              ++res.stats.pruned_by_dominance;
              continue;
            }
            frontier.evict_dominated(next, g_next, [&](int evicted) {
              if (evicted >= 0) pool[static_cast<size_t>(evicted)].retired = true;
            });
          }
          double eta = limits.use_dual_bounds ? eval_dual_bound(model, next) : -kInf;
          if (g_next + eta >= gamma - kImproveEps) {
            ++res.stats.pruned_by_bound;
            continue;
          }
          pool.push_back({std::move(next), g_next, eta, id, ti});
          int nid = static_cast<int>(pool.size()) - 1;
          if (limits.use_dominance) frontier.insert(pool.back().state, g_next, nid);
          candidates.push_back(nid);
        }
      }
      if (limit_hit) break;
      // Prune retired candidates, then keep the beam.
      std::vector<int> alive;
      for (int id : candidates)
        if (!pool[static_cast<size_t>(id)].retired) alive.push_back(id);
      if (alive.size() > width) {
        std::stable_sort(alive.begin(), alive.end(), [&](int a, int b) {
          const auto& na = pool[static_cast<size_t>(a)];
          const auto& nb = pool[static_cast<size_t>(b)];
          double fa = na.g + std::max(na.eta, -kInf), fb = nb.g + std::max(nb.eta, -kInf);
          if (fa != fb) return fa < fb;
          if (na.g != nb.g) return na.g < nb.g;
          return a < b;
        });
        alive.resize(width);
        overflowed = true;
      }
      layer = std::move(alive);
    }
    if (!limit_hit && !overflowed) proved = true;
  }

  res.stats.wall_time = watch.seconds();
  detail::finalize_solutions(res, limits);
  if (limit_hit) {
    res.status = SearchStatus::LimitReached;
    res.best_bound = -kInf;  // no lower bound proven
    return res;
  }
  if (!res.solutions.empty()) {
    res.status = SearchStatus::Optimal;
    res.best_bound = res.solutions.back().cost;
  } else if (limits.cost_cutoff < kInf) {
    res.status = SearchStatus::Optimal;
    res.best_bound = limits.cost_cutoff;
  } else {
    res.status = SearchStatus::Infeasible;
    res.best_bound = kInf;
  }
  return res;
}

// The labeling solver: expands the lexicographically minimum state first
// (ties by g, then dual bound, then insertion order), keeps a dominance
// frontier over all generated states, prunes the open list against the
// incumbent on every improvement, and returns every improving solution.
inline SearchResult solve_labeling(const Model& model, const SearchLimits& limits = {}) {
  StopWatch watch;
  Deadline deadline(limits.time_limit);
  SearchResult res;
  if (!check_state_constraints(model, model.target)) {
    res.status = SearchStatus::Infeasible;
    res.stats.wall_time = watch.seconds();
    return res;
  }

  std::vector<detail::Node> pool;
  detail::DominanceFrontier frontier(model);
  double gamma = limits.cost_cutoff;

  struct HeapItem {
    int node;
    uint64_t seq;
  };
  // priority_queue pops the largest element; order the comparator so the
  // lexicographically smallest state comes out first.
  auto heap_after = [&](const HeapItem& a, const HeapItem& b) {
    const detail::Node& na = pool[static_cast<size_t>(a.node)];
    const detail::Node& nb = pool[static_cast<size_t>(b.node)];
    switch (lex_compare(model, na.state, nb.state)) {
      case Ordering::Less: return false;
      case Ordering::Greater: return true;
      case Ordering::Equal: break;
    }
    if (na.g != nb.g) return na.g > nb.g;
    if (na.eta != nb.eta) return na.eta > nb.eta;
    return a.seq > b.seq;
  };
  std::priority_queue<HeapItem, std::vector<HeapItem>, decltype(heap_after)> open(heap_after);
  uint64_t seq = 0;

  double eta0 = limits.use_dual_bounds ? eval_dual_bound(model, model.target) : -kInf;
  pool.push_back({model.target, 0.0, eta0, -1, -1});
  frontier.insert(model.target, 0.0, 0);
  open.push({0, seq++});
  ++res.stats.generated;

  bool limit_hit = false;
  while (!open.empty()) {
    HeapItem item = open.top();
    open.pop();
    detail::Node& node = pool[static_cast<size_t>(item.node)];
    if (node.retired) continue;
    // Lazy form of the open-list pruning on incumbent updates.
    if (node.g + std::max(node.eta, -kInf) >= gamma - kImproveEps) {
      ++res.stats.pruned_by_bound;
      continue;
    }
    if (res.stats.expanded >= limits.node_limit ||
        (res.stats.expanded % 1024 == 0 && deadline.expired())) {
      limit_hit = true;
      break;
    }
    ++res.stats.expanded;
    if (limits.collect_visited) res.visited.push_back(node.state);

    if (auto base = is_base(model, node.state)) {
      double cost = node.g + *base;
      if (cost < gamma - kImproveEps)
        detail::record_solution(res, cost, detail::trace_path(pool, item.node), gamma);
      continue;
    }

    State snapshot = node.state;
    double g_here = node.g;
    int parent_id = item.node;
    for (int ti : applicable_transitions(model, snapshot)) {
      const Transition& t = model.transitions[static_cast<size_t>(ti)];
      double g_next = g_here + transition_weight(model, t, snapshot);
      State next = apply(model, t, snapshot);
      if (!check_state_constraints(model, next)) continue;
      ++res.stats.generated;
      if (limits.use_dominance) {
        if (frontier.covered(next, g_next)) {
          ++res.stats.pruned_by_dominance;
          continue;
        }
        frontier.evict_dominated(next, g_next, [&](int evicted) {
          if (evicted >= 0) pool[static_cast<size_t>(evicted)].retired = true;
        });
      }
      double eta = limits.use_dual_bounds ? eval_dual_bound(model, next) : -kInf;
      if (g_next + eta >= gamma - kImproveEps) {
        ++res.stats.pruned_by_bound;
        continue;
      }
      pool.push_back({std::move(next), g_next, eta, parent_id, ti});
      int id = static_cast<int>(pool.size()) - 1;
      if (limits.use_dominance) frontier.insert(pool.back().state, g_next, id);
      open.push({id, seq++});
    }
  }

  res.stats.wall_time = watch.seconds();
  detail::finalize_solutions(res, limits);
  if (limit_hit) {
    res.status = SearchStatus::LimitReached;
    res.best_bound = -kInf;  // no lower bound proven
    return res;
  }
  if (!res.solutions.empty()) {
    res.status = SearchStatus::Optimal;
    res.best_bound = res.solutions.back().cost;
  } else if (limits.cost_cutoff < kInf) {
    res.status = SearchStatus::Optimal;
    res.best_bound = limits.cost_cutoff;
  } else {
    res.status = SearchStatus::Infeasible;
    res.best_bound = kInf;
  }
  return res;
}

enum class Pricer { Labeling, BestFirst, Cabs, Exhaustive };

inline SearchResult solve(const Model& model, Pricer pricer, const SearchLimits& limits = {}) {
  switch (pricer) {
    case Pricer::Labeling: return solve_labeling(model, limits);
    case Pricer::BestFirst: return solve_best_first(model, limits);
    case Pricer::Cabs: return solve_cabs(model, limits);
    case Pricer::Exhaustive: return solve_exhaustive(model, limits);
  }
  throw Error("unknown pricer");
}

}  // namespace bpkit
