// Expression trees evaluated against a state: numeric, element, set, and
// condition expressions, the filter operation, and the fractional knapsack
// expression. Trees are immutable once built and freely shared across models.
#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <span>
#include <vector>

#include "bpkit/core.hpp"

namespace bpkit {

// The Dantzig bound of the 0-1 knapsack over the given items. Items with
// nonpositive profit are dropped before sorting; zero-weight items with
// positive profit are packed unconditionally. Ratio ties break on the
// smaller item index. Returns 0 when capacity <= 0 or nothing profitable
// remains. The result is an upper bound on the exact 0-1 optimum.
inline double fractional_knapsack(const Bitset& items, double capacity,
                                  std::span<const double> profits,
                                  std::span<const double> weights) {
  if (profits.size() != weights.size())
    throw LengthMismatchError("fractional_knapsack: profit/weight lists differ in length");
  double value = 0.0;
  std::vector<uint32_t> picked;
  items.for_each([&](uint32_t j) {
    if (j >= profits.size())
      throw LengthMismatchError("fractional_knapsack: item index exceeds list length");
    if (profits[j] <= 0.0) return;
    if (weights[j] <= 0.0)
      value += profits[j];
    else
      picked.push_back(j);
  });
  if (capacity <= 0.0) return 0.0;
  std::sort(picked.begin(), picked.end(), [&](uint32_t a, uint32_t b) {
    double ra = profits[a] * weights[b], rb = profits[b] * weights[a];
    if (ra != rb) return ra > rb;
    return a < b;
  });
  double remaining = capacity;
  for (uint32_t j : picked) {
    if (weights[j] <= remaining) {
      value += profits[j];
      remaining -= weights[j];
    } else {
      value += profits[j] / weights[j] * remaining;
      break;
    }
  }
  return value;
}

// Evaluation context: a state, the model's tables, and (inside a filter
// predicate) the bound element parameter.
struct EvalCtx {
  const State* state;
  const ConstantTables* tables;
  uint32_t param = 0;
  bool has_param = false;
};

struct NumericNode;
struct ElementNode;
struct SetNode;
struct ConditionNode;

using NumericPtr = std::shared_ptr<const NumericNode>;
using ElementPtr = std::shared_ptr<const ElementNode>;
using SetPtr = std::shared_ptr<const SetNode>;
using ConditionPtr = std::shared_ptr<const ConditionNode>;

struct NumericNode {
  virtual ~NumericNode() = default;
  virtual double eval(const EvalCtx& ctx) const = 0;
};
struct ElementNode {
  virtual ~ElementNode() = default;
  virtual uint32_t eval(const EvalCtx& ctx) const = 0;
};
struct SetNode {
  virtual ~SetNode() = default;
  virtual Bitset eval(const EvalCtx& ctx) const = 0;
  uint32_t universe = 0;
};
struct ConditionNode {
  virtual ~ConditionNode() = default;
  virtual bool eval(const EvalCtx& ctx) const = 0;
};

class NumericExpr;
class ElementExpr;
class SetExpr;
class Condition;

class ElementExpr {
 public:
  ElementExpr() = default;
  explicit ElementExpr(ElementPtr n) : node_(std::move(n)) {}
  uint32_t eval(const EvalCtx& ctx) const { return node_->eval(ctx); }
  bool valid() const { return node_ != nullptr; }
  const ElementPtr& node() const { return node_; }

 private:
  ElementPtr node_;
};

class NumericExpr {
 public:
  NumericExpr() = default;
  explicit NumericExpr(NumericPtr n) : node_(std::move(n)) {}
  double eval(const EvalCtx& ctx) const { return node_->eval(ctx); }
  bool valid() const { return node_ != nullptr; }

 private:
  NumericPtr node_;
};

class SetExpr {
 public:
  SetExpr() = default;
  explicit SetExpr(SetPtr n) : node_(std::move(n)) {}
  Bitset eval(const EvalCtx& ctx) const { return node_->eval(ctx); }
  uint32_t universe() const { return node_->universe; }
  bool valid() const { return node_ != nullptr; }

 private:
  SetPtr node_;
};

class Condition {
 public:
  Condition() = default;
  explicit Condition(ConditionPtr n) : node_(std::move(n)) {}
  bool eval(const EvalCtx& ctx) const { return node_->eval(ctx); }
  bool valid() const { return node_ != nullptr; }

 private:
  ConditionPtr node_;
};

namespace nodes {

struct NumConst : NumericNode {
  double v;
  explicit NumConst(double v) : v(v) {}
  double eval(const EvalCtx&) const override { return v; }
};
struct NumVar : NumericNode {
  int slot;
  explicit NumVar(int s) : slot(s) {}
  double eval(const EvalCtx& ctx) const override {
    return ctx.state->nums[static_cast<size_t>(slot)];
  }
};
struct NumTableRef : NumericNode {
  int table;
  std::vector<ElementExpr> args;
  double eval(const EvalCtx& ctx) const override {
    uint32_t idx[3] = {0, 0, 0};
    for (size_t i = 0; i < args.size(); ++i) idx[i] = args[i].eval(ctx);
    return ctx.tables->numeric(table, idx[0], idx[1], idx[2]);
  }
};
enum class NumOp { Add, Sub, Mul, Div, Min, Max };
struct NumBinary : NumericNode {
  NumOp op;
  NumericExpr a, b;
  double eval(const EvalCtx& ctx) const override {
    double x = a.eval(ctx), y = b.eval(ctx);
    switch (op) {
      case NumOp::Add: return x + y;
      case NumOp::Sub: return x - y;
      case NumOp::Mul: return x * y;
      case NumOp::Div:
        if (y == 0.0) throw EvaluationError("division by zero");
        return x / y;
      case NumOp::Min: return std::min(x, y);
      case NumOp::Max: return std::max(x, y);
    }
    return 0.0;
  }
};
struct NumNeg : NumericNode {
  NumericExpr a;
  double eval(const EvalCtx& ctx) const override { return -a.eval(ctx); }
};
struct NumFloor : NumericNode {
  NumericExpr a;
  double eval(const EvalCtx& ctx) const override { return std::floor(a.eval(ctx)); }
};
struct NumIte : NumericNode {
  Condition c;
  NumericExpr a, b;
  double eval(const EvalCtx& ctx) const override {
    return c.eval(ctx) ? a.eval(ctx) : b.eval(ctx);
  }
};
// Sum over the members of a set of a per-element constant.
struct NumSetSum : NumericNode {
  SetExpr set;
  std::vector<double> values;
  double eval(const EvalCtx& ctx) const override {
    Bitset s = set.eval(ctx);
    double total = 0.0;
    s.for_each([&](uint32_t e) {
      if (e >= values.size()) throw LengthMismatchError("set_sum: value list too short");
      total += values[e];
    });
    return total;
  }
};
struct NumKnapsack : NumericNode {
  SetExpr items;
  NumericExpr capacity;
  std::vector<NumericExpr> profits, weights;
  double eval(const EvalCtx& ctx) const override {
    Bitset s = items.eval(ctx);
    double cap = capacity.eval(ctx);
    if (cap <= 0.0 || s.empty()) return 0.0;
    std::vector<double> p(profits.size()), w(weights.size());
    s.for_each([&](uint32_t j) {
      p[j] = profits[j].eval(ctx);
      w[j] = weights[j].eval(ctx);
    });
    return fractional_knapsack(s, cap, p, w);
  }
};

struct ElemConst : ElementNode {
  uint32_t v;
  explicit ElemConst(uint32_t v) : v(v) {}
  uint32_t eval(const EvalCtx&) const override { return v; }
};
struct ElemVar : ElementNode {
  int slot;
  explicit ElemVar(int s) : slot(s) {}
  uint32_t eval(const EvalCtx& ctx) const override {
    return ctx.state->elems[static_cast<size_t>(slot)];
  }
};
// The free parameter of a filter predicate.
struct ElemParam : ElementNode {
  uint32_t eval(const EvalCtx& ctx) const override {
    if (!ctx.has_param) throw EvaluationError("free element parameter outside a filter");
    return ctx.param;
  }
};
struct ElemAdd : ElementNode {
  ElementExpr a;
  uint32_t offset;
  uint32_t eval(const EvalCtx& ctx) const override { return a.eval(ctx) + offset; }
};
struct ElemTableRef : ElementNode {
  int table;
  ElementExpr arg;
  uint32_t eval(const EvalCtx& ctx) const override {
    return ctx.tables->element(table, arg.eval(ctx));
  }
};

struct SetConst : SetNode {
  Bitset v;
  Bitset eval(const EvalCtx&) const override { return v; }
};
struct SetVar : SetNode {
  int slot;
  Bitset eval(const EvalCtx& ctx) const override {
    return ctx.state->sets[static_cast<size_t>(slot)];
  }
};
struct SetTableRef : SetNode {
  int table;
  ElementExpr arg;
  Bitset eval(const EvalCtx& ctx) const override {
    return ctx.tables->set(table, arg.eval(ctx));
  }
};
enum class SetOp { Union, Inter, Diff };
struct SetBinary : SetNode {
  SetOp op;
  SetExpr a, b;
  Bitset eval(const EvalCtx& ctx) const override {
    Bitset x = a.eval(ctx), y = b.eval(ctx);
    switch (op) {
      case SetOp::Union: return x | y;
      case SetOp::Inter: return x & y;
      case SetOp::Diff: return x - y;
    }
    return x;
  }
};
struct SetAddElem : SetNode {
  SetExpr a;
  ElementExpr e;
  Bitset eval(const EvalCtx& ctx) const override {
    Bitset x = a.eval(ctx);
    uint32_t v = e.eval(ctx);
    if (v >= x.universe()) throw EvaluationError("set add: element outside universe");
    x.add(v);
    return x;
  }
};
struct SetRemoveElem : SetNode {
  SetExpr a;
  ElementExpr e;
  Bitset eval(const EvalCtx& ctx) const override {
    Bitset x = a.eval(ctx);
    x.remove(e.eval(ctx));
    return x;
  }
};
struct SetComplement : SetNode {
  SetExpr a;
  Bitset eval(const EvalCtx& ctx) const override { return a.eval(ctx).complement(); }
};
// {x in source : predicate(x)} with x bound to the free element parameter.
struct SetFilter : SetNode {
  SetExpr source;
  Condition predicate;
  Bitset eval(const EvalCtx& ctx) const override {
    Bitset s = source.eval(ctx);
    EvalCtx inner = ctx;
    inner.has_param = true;
    Bitset out(s.universe());
    s.for_each([&](uint32_t e) {
      inner.param = e;
      if (predicate.eval(inner)) out.add(e);
    });
    return out;
  }
};

struct CondConst : ConditionNode {
  bool v;
  explicit CondConst(bool v) : v(v) {}
  bool eval(const EvalCtx&) const override { return v; }
};
enum class CmpOp { Le, Lt, Eq, Ne };
struct CondCmpNum : ConditionNode {
  CmpOp op;
  NumericExpr a, b;
  bool eval(const EvalCtx& ctx) const override {
    double x = a.eval(ctx), y = b.eval(ctx);
    switch (op) {
      case CmpOp::Le: return x <= y;
      case CmpOp::Lt: return x < y;
      case CmpOp::Eq: return x == y;
      case CmpOp::Ne: return x != y;
    }
    return false;
  }
};
struct CondCmpElem : ConditionNode {
  CmpOp op;
  ElementExpr a, b;
  bool eval(const EvalCtx& ctx) const override {
    uint32_t x = a.eval(ctx), y = b.eval(ctx);
    switch (op) {
      case CmpOp::Le: return x <= y;
      case CmpOp::Lt: return x < y;
      case CmpOp::Eq: return x == y;
      case CmpOp::Ne: return x != y;
    }
    return false;
  }
};
struct CondMember : ConditionNode {
  ElementExpr e;
  SetExpr s;
  bool eval(const EvalCtx& ctx) const override { return s.eval(ctx).contains(e.eval(ctx)); }
};
struct CondSubset : ConditionNode {
  SetExpr a, b;
  bool eval(const EvalCtx& ctx) const override { return a.eval(ctx).subset_of(b.eval(ctx)); }
};
struct CondIsEmpty : ConditionNode {
  SetExpr s;
  bool eval(const EvalCtx& ctx) const override { return s.eval(ctx).empty(); }
};
struct CondNot : ConditionNode {
  Condition a;
  bool eval(const EvalCtx& ctx) const override { return !a.eval(ctx); }
};
struct CondAnd : ConditionNode {
  Condition a, b;
  bool eval(const EvalCtx& ctx) const override { return a.eval(ctx) && b.eval(ctx); }
};
struct CondOr : ConditionNode {
  Condition a, b;
  bool eval(const EvalCtx& ctx) const override { return a.eval(ctx) || b.eval(ctx); }
};
struct CondTableRef : ConditionNode {
  int table;
  std::vector<ElementExpr> args;
  bool eval(const EvalCtx& ctx) const override {
    uint32_t idx[3] = {0, 0, 0};
    for (size_t i = 0; i < args.size(); ++i) idx[i] = args[i].eval(ctx);
    return ctx.tables->boolean(table, idx[0], idx[1], idx[2]);
  }
};

}  // namespace nodes

// ---- builder helpers ----

inline NumericExpr num_const(double v) {
  return NumericExpr(std::make_shared<nodes::NumConst>(v));
}
inline ElementExpr elem_const(uint32_t v) {
  return ElementExpr(std::make_shared<nodes::ElemConst>(v));
}
inline ElementExpr elem_param() { return ElementExpr(std::make_shared<nodes::ElemParam>()); }
inline ElementExpr elem_add(ElementExpr a, uint32_t offset) {
  auto n = std::make_shared<nodes::ElemAdd>();
  n->a = std::move(a);
  n->offset = offset;
  return ElementExpr(n);
}
inline SetExpr set_const(Bitset v) {
  auto n = std::make_shared<nodes::SetConst>();
  n->universe = v.universe();
  n->v = std::move(v);
  return SetExpr(n);
}

inline NumericExpr num_binary(nodes::NumOp op, NumericExpr a, NumericExpr b) {
  auto n = std::make_shared<nodes::NumBinary>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return NumericExpr(n);
}
inline NumericExpr operator+(NumericExpr a, NumericExpr b) {
  return num_binary(nodes::NumOp::Add, std::move(a), std::move(b));
}
inline NumericExpr operator-(NumericExpr a, NumericExpr b) {
  return num_binary(nodes::NumOp::Sub, std::move(a), std::move(b));
}
inline NumericExpr operator*(NumericExpr a, NumericExpr b) {
  return num_binary(nodes::NumOp::Mul, std::move(a), std::move(b));
}
inline NumericExpr operator/(NumericExpr a, NumericExpr b) {
  return num_binary(nodes::NumOp::Div, std::move(a), std::move(b));
}
inline NumericExpr operator+(NumericExpr a, double b) { return std::move(a) + num_const(b); }
inline NumericExpr operator-(NumericExpr a, double b) { return std::move(a) - num_const(b); }
inline NumericExpr operator*(NumericExpr a, double b) { return std::move(a) * num_const(b); }
inline NumericExpr operator+(double a, NumericExpr b) { return num_const(a) + std::move(b); }
inline NumericExpr operator-(double a, NumericExpr b) { return num_const(a) - std::move(b); }
inline NumericExpr operator*(double a, NumericExpr b) { return num_const(a) * std::move(b); }
inline NumericExpr operator-(NumericExpr a) {
  auto n = std::make_shared<nodes::NumNeg>();
  n->a = std::move(a);
  return NumericExpr(n);
}
inline NumericExpr num_min(NumericExpr a, NumericExpr b) {
  return num_binary(nodes::NumOp::Min, std::move(a), std::move(b));
}
inline NumericExpr num_max(NumericExpr a, NumericExpr b) {
  return num_binary(nodes::NumOp::Max, std::move(a), std::move(b));
}
inline NumericExpr num_floor(NumericExpr a) {
  auto n = std::make_shared<nodes::NumFloor>();
  n->a = std::move(a);
  return NumericExpr(n);
}
inline NumericExpr num_ite(Condition c, NumericExpr a, NumericExpr b) {
  auto n = std::make_shared<nodes::NumIte>();
  n->c = std::move(c);
  n->a = std::move(a);
  n->b = std::move(b);
  return NumericExpr(n);
}
inline NumericExpr set_sum(SetExpr s, std::vector<double> values) {
  if (values.size() < s.universe())
    throw LengthMismatchError("set_sum: value list shorter than set universe");
  auto n = std::make_shared<nodes::NumSetSum>();
  n->set = std::move(s);
  n->values = std::move(values);
  return NumericExpr(n);
}
inline NumericExpr knapsack_bound(SetExpr items, NumericExpr capacity,
                                  std::vector<NumericExpr> profits,
                                  std::vector<NumericExpr> weights) {
  if (profits.size() < items.universe() || weights.size() < items.universe())
    throw LengthMismatchError("fractional knapsack expression: lists shorter than universe");
  auto n = std::make_shared<nodes::NumKnapsack>();
  n->items = std::move(items);
  n->capacity = std::move(capacity);
  n->profits = std::move(profits);
  n->weights = std::move(weights);
  return NumericExpr(n);
}

inline uint32_t common_universe(const SetExpr& a, const SetExpr& b) {
  if (a.universe() != b.universe())
    throw KindMismatchError("set operands declared over different universes");
  return a.universe();
}
inline SetExpr set_binary(nodes::SetOp op, SetExpr a, SetExpr b) {
  auto n = std::make_shared<nodes::SetBinary>();
  n->universe = common_universe(a, b);
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return SetExpr(n);
}
inline SetExpr operator|(SetExpr a, SetExpr b) {
  return set_binary(nodes::SetOp::Union, std::move(a), std::move(b));
}
inline SetExpr operator&(SetExpr a, SetExpr b) {
  return set_binary(nodes::SetOp::Inter, std::move(a), std::move(b));
}
inline SetExpr operator-(SetExpr a, SetExpr b) {
  return set_binary(nodes::SetOp::Diff, std::move(a), std::move(b));
}
inline SetExpr set_add(SetExpr a, ElementExpr e) {
  auto n = std::make_shared<nodes::SetAddElem>();
  n->universe = a.universe();
  n->a = std::move(a);
  n->e = std::move(e);
  return SetExpr(n);
}
inline SetExpr set_remove(SetExpr a, ElementExpr e) {
  auto n = std::make_shared<nodes::SetRemoveElem>();
  n->universe = a.universe();
  n->a = std::move(a);
  n->e = std::move(e);
  return SetExpr(n);
}
inline SetExpr set_complement(SetExpr a) {
  auto n = std::make_shared<nodes::SetComplement>();
  n->universe = a.universe();
  n->a = std::move(a);
  return SetExpr(n);
}
inline SetExpr set_filter(SetExpr source, Condition predicate) {
  auto n = std::make_shared<nodes::SetFilter>();
  n->universe = source.universe();
  n->source = std::move(source);
  n->predicate = std::move(predicate);
  return SetExpr(n);
}

inline Condition cond_const(bool v) { return Condition(std::make_shared<nodes::CondConst>(v)); }
inline Condition cmp_num(nodes::CmpOp op, NumericExpr a, NumericExpr b) {
  auto n = std::make_shared<nodes::CondCmpNum>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return Condition(n);
}
inline Condition operator<=(NumericExpr a, NumericExpr b) {
  return cmp_num(nodes::CmpOp::Le, std::move(a), std::move(b));
}
inline Condition operator<(NumericExpr a, NumericExpr b) {
  return cmp_num(nodes::CmpOp::Lt, std::move(a), std::move(b));
}
inline Condition operator==(NumericExpr a, NumericExpr b) {
  return cmp_num(nodes::CmpOp::Eq, std::move(a), std::move(b));
}
inline Condition operator!=(NumericExpr a, NumericExpr b) {
  return cmp_num(nodes::CmpOp::Ne, std::move(a), std::move(b));
}
inline Condition operator<=(NumericExpr a, double b) { return std::move(a) <= num_const(b); }
inline Condition operator<(NumericExpr a, double b) { return std::move(a) < num_const(b); }
inline Condition operator==(NumericExpr a, double b) { return std::move(a) == num_const(b); }
inline Condition cmp_elem(nodes::CmpOp op, ElementExpr a, ElementExpr b) {
  auto n = std::make_shared<nodes::CondCmpElem>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return Condition(n);
}
inline Condition operator==(ElementExpr a, ElementExpr b) {
  return cmp_elem(nodes::CmpOp::Eq, std::move(a), std::move(b));
}
inline Condition operator!=(ElementExpr a, ElementExpr b) {
  return cmp_elem(nodes::CmpOp::Ne, std::move(a), std::move(b));
}
inline Condition operator<(ElementExpr a, ElementExpr b) {
  return cmp_elem(nodes::CmpOp::Lt, std::move(a), std::move(b));
}
inline Condition operator<=(ElementExpr a, ElementExpr b) {
  return cmp_elem(nodes::CmpOp::Le, std::move(a), std::move(b));
}
inline Condition member(ElementExpr e, SetExpr s) {
  auto n = std::make_shared<nodes::CondMember>();
  n->e = std::move(e);
  n->s = std::move(s);
  return Condition(n);
}
inline Condition subset(SetExpr a, SetExpr b) {
  auto n = std::make_shared<nodes::CondSubset>();
  common_universe(a, b);
  n->a = std::move(a);
  n->b = std::move(b);
  return Condition(n);
}
inline Condition is_empty(SetExpr s) {
  auto n = std::make_shared<nodes::CondIsEmpty>();
  n->s = std::move(s);
  return Condition(n);
}
inline Condition operator!(Condition a) {
  auto n = std::make_shared<nodes::CondNot>();
  n->a = std::move(a);
  return Condition(n);
}
inline Condition operator&&(Condition a, Condition b) {
  auto n = std::make_shared<nodes::CondAnd>();
  n->a = std::move(a);
  n->b = std::move(b);
  return Condition(n);
}
inline Condition operator||(Condition a, Condition b) {
  auto n = std::make_shared<nodes::CondOr>();
  n->a = std::move(a);
  n->b = std::move(b);
  return Condition(n);
}

}  // namespace bpkit
