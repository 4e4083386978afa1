// The declarative dynamic-programming model: state-variable schema, target
// state, transitions, base cases, state constraints, and dual bound
// expressions, plus the state operations the solvers rely on (applicability,
// application, dominance, lexicographic resource order, dual bounds).
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bpkit/expr.hpp"

namespace bpkit {

enum class VarKind { Numeric, Element, Set };
enum class Pref { None, Less, Greater };

struct VarDef {
  std::string name;
  VarKind kind;
  // Element values lie in [0, universe]; set members in [0, universe).
  uint32_t universe = 0;
  Pref pref = Pref::None;
  int slot = 0;
};

// Typed handles returned by ModelBuilder; convertible to expressions.
struct NumericVar {
  int slot;
  operator NumericExpr() const { return NumericExpr(std::make_shared<nodes::NumVar>(slot)); }
  NumericExpr expr() const { return *this; }
};
struct ElementVar {
  int slot;
  operator ElementExpr() const { return ElementExpr(std::make_shared<nodes::ElemVar>(slot)); }
  ElementExpr expr() const { return *this; }
};
struct SetVar {
  int slot;
  uint32_t universe;
  operator SetExpr() const {
    auto n = std::make_shared<nodes::SetVar>();
    n->slot = slot;
    n->universe = universe;
    return SetExpr(n);
  }
  SetExpr expr() const { return *this; }
};

struct Transition {
  std::string name;
  // Bound element parameter for transition families like "visit j"; -1 if none.
  int param = -1;
  std::vector<Condition> preconditions;
  std::vector<std::pair<int, NumericExpr>> num_effects;   // slot -> expression
  std::vector<std::pair<int, ElementExpr>> elem_effects;  // slot -> expression
  std::vector<std::pair<int, SetExpr>> set_effects;       // slot -> expression
  NumericExpr weight;
};

struct BaseCase {
  std::vector<Condition> conditions;
  NumericExpr value;
};

struct Model {
  std::vector<VarDef> vars;
  ConstantTables tables;
  State target;
  std::vector<Transition> transitions;
  std::vector<BaseCase> base_cases;
  std::vector<Condition> state_constraints;
  std::vector<NumericExpr> dual_bounds;

  // Resource variable indices in declaration order, grouped by kind; the
  // lexicographic order compares element, then numeric, then set resources.
  std::vector<int> elem_resources, num_resources, set_resources;
  std::vector<int> nonresource_vars;

  const VarDef& var(int i) const { return vars[static_cast<size_t>(i)]; }
};

class ModelBuilder {
 public:
  NumericVar numeric_var(std::string name, Pref pref, double initial) {
    int slot = static_cast<int>(target_.nums.size());
    target_.nums.push_back(initial);
    vars_.push_back({std::move(name), VarKind::Numeric, 0, pref, slot});
    return {slot};
  }
  ElementVar element_var(std::string name, uint32_t universe, Pref pref, uint32_t initial) {
    if (initial > universe) throw ModelBuildError("element initial value outside universe");
    int slot = static_cast<int>(target_.elems.size());
    target_.elems.push_back(initial);
    vars_.push_back({std::move(name), VarKind::Element, universe, pref, slot});
    return {slot};
  }
  SetVar set_var(std::string name, uint32_t universe, Pref pref, Bitset initial) {
    if (universe > kMaxUniverse) throw ModelBuildError("set universe exceeds " + std::to_string(kMaxUniverse));
    if (initial.universe() != universe) throw ModelBuildError("set initial value has wrong universe");
    int slot = static_cast<int>(target_.sets.size());
    target_.sets.push_back(std::move(initial));
    vars_.push_back({std::move(name), VarKind::Set, universe, pref, slot});
    return {slot, universe};
  }

  int numeric_table(std::string name, std::vector<double> data, std::vector<uint32_t> dims) {
    return tables_.add_numeric(std::move(name), std::move(data), std::move(dims));
  }
  int bool_table(std::string name, std::vector<uint8_t> data, std::vector<uint32_t> dims) {
    return tables_.add_bool(std::move(name), std::move(data), std::move(dims));
  }
  int element_table(std::string name, std::vector<uint32_t> data) {
    return tables_.add_element(std::move(name), std::move(data));
  }
  int set_table(std::string name, std::vector<Bitset> data) {
    return tables_.add_set(std::move(name), std::move(data));
  }

  NumericExpr num_at(int table, ElementExpr i) {
    auto n = std::make_shared<nodes::NumTableRef>();
    n->table = table;
    n->args = {std::move(i)};
    return NumericExpr(n);
  }
  NumericExpr num_at(int table, ElementExpr i, ElementExpr j) {
    auto n = std::make_shared<nodes::NumTableRef>();
    n->table = table;
    n->args = {std::move(i), std::move(j)};
    return NumericExpr(n);
  }
  Condition bool_at(int table, ElementExpr i, ElementExpr j) {
    auto n = std::make_shared<nodes::CondTableRef>();
    n->table = table;
    n->args = {std::move(i), std::move(j)};
    return Condition(n);
  }
  ElementExpr elem_at(int table, ElementExpr i) {
    auto n = std::make_shared<nodes::ElemTableRef>();
    n->table = table;
    n->arg = std::move(i);
    return ElementExpr(n);
  }
  SetExpr set_at(int table, ElementExpr i, uint32_t universe) {
    auto n = std::make_shared<nodes::SetTableRef>();
    n->table = table;
    n->arg = std::move(i);
    n->universe = universe;
    return SetExpr(n);
  }

  Transition& transition(std::string name, int param = -1) {
    transitions_.push_back({});
    transitions_.back().name = std::move(name);
    transitions_.back().param = param;
    return transitions_.back();
  }
  void base_case(std::vector<Condition> conds, NumericExpr value) {
    base_cases_.push_back({std::move(conds), std::move(value)});
  }
  void state_constraint(Condition c) { state_constraints_.push_back(std::move(c)); }
  void dual_bound(NumericExpr e) { dual_bounds_.push_back(std::move(e)); }

  Model build() {
    Model m;
    m.vars = std::move(vars_);
    m.tables = std::move(tables_);
    m.target = std::move(target_);
    m.transitions = std::move(transitions_);
    m.base_cases = std::move(base_cases_);
    m.state_constraints = std::move(state_constraints_);
    m.dual_bounds = std::move(dual_bounds_);
    for (size_t i = 0; i < m.vars.size(); ++i) {
      const VarDef& v = m.vars[i];
      if (v.pref == Pref::None) {
        m.nonresource_vars.push_back(static_cast<int>(i));
      } else if (v.kind == VarKind::Element) {
        m.elem_resources.push_back(static_cast<int>(i));
      } else if (v.kind == VarKind::Numeric) {
        m.num_resources.push_back(static_cast<int>(i));
      } else {
        m.set_resources.push_back(static_cast<int>(i));
      }
    }
    for (const Transition& t : m.transitions) {
      if (!t.weight.valid()) throw ModelBuildError("transition '" + t.name + "' has no weight");
    }
    for (const BaseCase& b : m.base_cases) {
      if (!b.value.valid()) throw ModelBuildError("base case has no value expression");
    }
    return m;
  }

 private:
  std::vector<VarDef> vars_;
  ConstantTables tables_;
  State target_;
  std::vector<Transition> transitions_;
  std::vector<BaseCase> base_cases_;
  std::vector<Condition> state_constraints_;
  std::vector<NumericExpr> dual_bounds_;
};

inline EvalCtx make_ctx(const Model& m, const State& s) { return {&s, &m.tables, 0, false}; }

inline bool is_applicable(const Model& m, const Transition& t, const State& s) {
  EvalCtx ctx = make_ctx(m, s);
  for (const Condition& c : t.preconditions)
    if (!c.eval(ctx)) return false;
  return true;
}

// Indices of the transitions applicable in s, in definition order.
inline std::vector<int> applicable_transitions(const Model& m, const State& s) {
  std::vector<int> out;
  for (size_t i = 0; i < m.transitions.size(); ++i)
    if (is_applicable(m, m.transitions[i], s)) out.push_back(static_cast<int>(i));
  return out;
}

// Applies a transition. Every effect is evaluated on the original state, so
// updates are simultaneous regardless of effect order.
inline State apply(const Model& m, const Transition& t, const State& s) {
  EvalCtx ctx = make_ctx(m, s);
  State next = s;
  for (const auto& [slot, e] : t.num_effects) next.nums[static_cast<size_t>(slot)] = e.eval(ctx);
  for (const auto& [slot, e] : t.elem_effects) next.elems[static_cast<size_t>(slot)] = e.eval(ctx);
  for (const auto& [slot, e] : t.set_effects) next.sets[static_cast<size_t>(slot)] = e.eval(ctx);
  return next;
}

inline State apply_checked(const Model& m, const Transition& t, const State& s) {
  if (!is_applicable(m, t, s))
    throw NotApplicableError("transition '" + t.name + "' not applicable");
  return apply(m, t, s);
}

inline double transition_weight(const Model& m, const Transition& t, const State& s) {
  EvalCtx ctx = make_ctx(m, s);
  return t.weight.eval(ctx);
}

// Value of the first satisfied base case (definition order), if any.
inline std::optional<double> is_base(const Model& m, const State& s) {
  EvalCtx ctx = make_ctx(m, s);
  for (const BaseCase& b : m.base_cases) {
    bool ok = true;
    for (const Condition& c : b.conditions)
      if (!c.eval(ctx)) {
        ok = false;
        break;
      }
    if (ok) return b.value.eval(ctx);
  }
  return std::nullopt;
}

inline bool check_state_constraints(const Model& m, const State& s) {
  EvalCtx ctx = make_ctx(m, s);
  for (const Condition& c : m.state_constraints)
    if (!c.eval(ctx)) return false;
  return true;
}

// Pointwise maximum of the declared dual bounds; -inf when none declared.
inline double eval_dual_bound(const Model& m, const State& s) {
  if (m.dual_bounds.empty()) return -kInf;
  EvalCtx ctx = make_ctx(m, s);
  double best = -kInf;
  for (const NumericExpr& e : m.dual_bounds) best = std::max(best, e.eval(ctx));
  return best;
}

inline bool equal_nonresource(const Model& m, const State& a, const State& b) {
  for (int vi : m.nonresource_vars) {
    const VarDef& v = m.var(vi);
    size_t slot = static_cast<size_t>(v.slot);
    switch (v.kind) {
      case VarKind::Numeric:
        if (a.nums[slot] != b.nums[slot]) return false;
        break;
      case VarKind::Element:
        if (a.elems[slot] != b.elems[slot]) return false;
        break;
      case VarKind::Set:
        if (a.sets[slot] != b.sets[slot]) return false;
        break;
    }
  }
  return true;
}

inline size_t hash_nonresource(const Model& m, const State& s) {
  size_t h = 0;
  for (int vi : m.nonresource_vars) {
    const VarDef& v = m.var(vi);
    size_t slot = static_cast<size_t>(v.slot);
    switch (v.kind) {
      case VarKind::Numeric: hash_combine(h, hash_double(s.nums[slot])); break;
      case VarKind::Element: hash_combine(h, std::hash<uint32_t>{}(s.elems[slot])); break;
      case VarKind::Set: hash_combine(h, s.sets[slot].hash()); break;
    }
  }
  return h;
}

inline size_t hash_full(const State& s) {
  size_t h = 0;
  for (double d : s.nums) hash_combine(h, hash_double(d));
  for (uint32_t e : s.elems) hash_combine(h, std::hash<uint32_t>{}(e));
  for (const Bitset& b : s.sets) hash_combine(h, b.hash());
  return h;
}

// True iff s1 and s2 agree on all non-resource variables and s1 is weakly
// preferred on every resource variable (subset/superset for set resources).
inline bool dominates(const Model& m, const State& s1, const State& s2) {
  if (!equal_nonresource(m, s1, s2)) return false;
  for (int vi : m.elem_resources) {
    const VarDef& v = m.var(vi);
    uint32_t a = s1.elems[static_cast<size_t>(v.slot)], b = s2.elems[static_cast<size_t>(v.slot)];
    if (v.pref == Pref::Less ? a > b : a < b) return false;
  }
  for (int vi : m.num_resources) {
    const VarDef& v = m.var(vi);
    double a = s1.nums[static_cast<size_t>(v.slot)], b = s2.nums[static_cast<size_t>(v.slot)];
    if (v.pref == Pref::Less ? a > b : a < b) return false;
  }
  for (int vi : m.set_resources) {
    const VarDef& v = m.var(vi);
    const Bitset& a = s1.sets[static_cast<size_t>(v.slot)];
    const Bitset& b = s2.sets[static_cast<size_t>(v.slot)];
    if (v.pref == Pref::Less ? !a.subset_of(b) : !b.subset_of(a)) return false;
  }
  return true;
}

enum class Ordering { Less, Equal, Greater };

// Lexicographic comparison over resource variables: element resources first,
// then numeric, then set, each in declaration order and by its preference
// direction. Incomparable sets fall back to population count in the
// preference direction; full ties report Equal for the caller to break.
inline Ordering lex_compare(const Model& m, const State& s1, const State& s2) {
  for (int vi : m.elem_resources) {
    const VarDef& v = m.var(vi);
    uint32_t a = s1.elems[static_cast<size_t>(v.slot)], b = s2.elems[static_cast<size_t>(v.slot)];
    if (a != b) {
      bool first_preferred = v.pref == Pref::Less ? a < b : a > b;
      return first_preferred ? Ordering::Less : Ordering::Greater;
    }
  }
  for (int vi : m.num_resources) {
    const VarDef& v = m.var(vi);
    double a = s1.nums[static_cast<size_t>(v.slot)], b = s2.nums[static_cast<size_t>(v.slot)];
    if (a != b) {
      bool first_preferred = v.pref == Pref::Less ? a < b : a > b;
      return first_preferred ? Ordering::Less : Ordering::Greater;
    }
  }
  for (int vi : m.set_resources) {
    const VarDef& v = m.var(vi);
    const Bitset& a = s1.sets[static_cast<size_t>(v.slot)];
    const Bitset& b = s2.sets[static_cast<size_t>(v.slot)];
    if (a == b) continue;
    if (a.subset_of(b)) return v.pref == Pref::Less ? Ordering::Less : Ordering::Greater;
    if (b.subset_of(a)) return v.pref == Pref::Less ? Ordering::Greater : Ordering::Less;
    uint32_t ca = a.count(), cb = b.count();
    if (ca == cb) continue;
    bool first_preferred = v.pref == Pref::Less ? ca < cb : ca > cb;
    return first_preferred ? Ordering::Less : Ordering::Greater;
  }
  return Ordering::Equal;
}

// Reconstructs the state sequence along a transition path from the target.
inline std::vector<State> replay(const Model& m, const std::vector<int>& path) {
  std::vector<State> states;
  states.reserve(path.size() + 1);
  states.push_back(m.target);
  for (int ti : path)
    states.push_back(apply(m, m.transitions[static_cast<size_t>(ti)], states.back()));
  return states;
}

inline double path_cost(const Model& m, const std::vector<int>& path) {
  State s = m.target;
  double g = 0.0;
  for (int ti : path) {
    const Transition& t = m.transitions[static_cast<size_t>(ti)];
    g += transition_weight(m, t, s);
    s = apply(m, t, s);
  }
  if (auto v = is_base(m, s)) return g + *v;
  return g;
}

}  // namespace bpkit
