// Core value types shared by the whole toolkit: error hierarchy, fixed-width
// bitsets, states, and the read-only constant tables that hold instance data.
#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace bpkit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct KindMismatchError : Error {
  using Error::Error;
};
struct EvaluationError : Error {
  using Error::Error;
};
struct ModelBuildError : Error {
  using Error::Error;
};
struct LengthMismatchError : Error {
  using Error::Error;
};
struct NotApplicableError : Error {
  using Error::Error;
};
struct CycleDetectedError : Error {
  using Error::Error;
};
struct NumericalFailure : Error {
  using Error::Error;
};
struct DimensionMismatchError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct SemanticError : Error {
  using Error::Error;
};
struct InfeasibleInstanceError : Error {
  using Error::Error;
};
struct PricerFailure : Error {
  using Error::Error;
};

// Set variables are fixed-width bitsets sized by a declared universe.
// Universes above kMaxUniverse are rejected at model build time.
inline constexpr uint32_t kMaxUniverse = 1024;

class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(uint32_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

  static Bitset full(uint32_t universe) {
    Bitset b(universe);
    for (uint32_t i = 0; i < universe; ++i) b.add(i);
    return b;
  }

  uint32_t universe() const { return universe_; }

  bool contains(uint32_t e) const {
    return e < universe_ && (words_[e >> 6] >> (e & 63)) & 1u;
  }
  void add(uint32_t e) { words_[e >> 6] |= uint64_t{1} << (e & 63); }
  void remove(uint32_t e) {
    if (e < universe_) words_[e >> 6] &= ~(uint64_t{1} << (e & 63));
  }

  uint32_t count() const {
    uint32_t c = 0;
    for (uint64_t w : words_) c += static_cast<uint32_t>(__builtin_popcountll(w));
    return c;
  }
  bool empty() const {
    for (uint64_t w : words_)
      if (w) return false;
    return true;
  }

  Bitset& operator|=(const Bitset& o) {
    for (size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  Bitset& operator&=(const Bitset& o) {
    for (size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  // Set difference.
  Bitset& operator-=(const Bitset& o) {
    for (size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
  friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
  friend Bitset operator-(Bitset a, const Bitset& b) { return a -= b; }

  Bitset complement() const {
    Bitset r(universe_);
    for (size_t i = 0; i < words_.size(); ++i) r.words_[i] = ~words_[i];
    r.trim();
    return r;
  }

  bool operator==(const Bitset& o) const { return words_ == o.words_; }
  bool operator!=(const Bitset& o) const { return !(*this == o); }

  bool subset_of(const Bitset& o) const {
    for (size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  // Visits members in increasing order.
  template <typename F>
  void for_each(F&& f) const {
    for (size_t i = 0; i < words_.size(); ++i) {
      uint64_t w = words_[i];
      while (w) {
        uint32_t b = static_cast<uint32_t>(__builtin_ctzll(w));
        f(static_cast<uint32_t>(i * 64 + b));
        w &= w - 1;
      }
    }
  }

  std::vector<uint32_t> members() const {
    std::vector<uint32_t> v;
    v.reserve(count());
    for_each([&](uint32_t e) { v.push_back(e); });
    return v;
  }

  size_t hash() const {
    size_t h = 0xcbf29ce484222325ull;
    for (uint64_t w : words_) h = (h ^ w) * 0x100000001b3ull;
    return h;
  }

 private:
  void trim() {
    if (universe_ & 63) words_.back() &= (uint64_t{1} << (universe_ & 63)) - 1;
  }
  uint32_t universe_ = 0;
  std::vector<uint64_t> words_;
};

// One full assignment to the state variables, split by kind. The schema
// (model.hpp) maps variable indices to slots in these vectors.
struct State {
  std::vector<double> nums;
  std::vector<uint32_t> elems;
  std::vector<Bitset> sets;

  bool operator==(const State& o) const {
    return nums == o.nums && elems == o.elems && sets == o.sets;
  }
};

inline void hash_combine(size_t& h, size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
}

inline size_t hash_double(double d) {
  if (d == 0.0) d = 0.0;  // merge -0.0 with +0.0
  uint64_t bits;
  static_assert(sizeof(bits) == sizeof(d));
  __builtin_memcpy(&bits, &d, sizeof(bits));
  return std::hash<uint64_t>{}(bits);
}

// Named read-only tables of instance constants, indexed by up to three
// element indices. Built once per model; never mutated afterwards.
class ConstantTables {
 public:
  struct Dims {
    std::array<uint32_t, 3> d{1, 1, 1};
    int arity = 0;
    size_t flat_size() const { return size_t{d[0]} * d[1] * d[2]; }
  };

  int add_numeric(std::string name, std::vector<double> data, std::vector<uint32_t> dims) {
    num_.push_back({std::move(name), std::move(data), make_dims(dims)});
    check_size(num_.back().data.size(), num_.back().dims, num_.back().name);
    return static_cast<int>(num_.size()) - 1;
  }
  int add_bool(std::string name, std::vector<uint8_t> data, std::vector<uint32_t> dims) {
    bools_.push_back({std::move(name), std::move(data), make_dims(dims)});
    check_size(bools_.back().data.size(), bools_.back().dims, bools_.back().name);
    return static_cast<int>(bools_.size()) - 1;
  }
  int add_element(std::string name, std::vector<uint32_t> data) {
    elems_.push_back({std::move(name), std::move(data)});
    return static_cast<int>(elems_.size()) - 1;
  }
  int add_set(std::string name, std::vector<Bitset> data) {
    sets_.push_back({std::move(name), std::move(data)});
    return static_cast<int>(sets_.size()) - 1;
  }

  double numeric(int id, uint32_t i, uint32_t j = 0, uint32_t k = 0) const {
    const auto& t = num_.at(static_cast<size_t>(id));
    return t.data[flatten(t.dims, i, j, k, t.name)];
  }
  bool boolean(int id, uint32_t i, uint32_t j = 0, uint32_t k = 0) const {
    const auto& t = bools_.at(static_cast<size_t>(id));
    return t.data[flatten(t.dims, i, j, k, t.name)] != 0;
  }
  uint32_t element(int id, uint32_t i) const {
    const auto& t = elems_.at(static_cast<size_t>(id));
    if (i >= t.data.size()) throw EvaluationError("element table '" + t.name + "': index out of range");
    return t.data[i];
  }
  const Bitset& set(int id, uint32_t i) const {
    const auto& t = sets_.at(static_cast<size_t>(id));
    if (i >= t.data.size()) throw EvaluationError("set table '" + t.name + "': index out of range");
    return t.data[i];
  }

  int numeric_arity(int id) const { return num_.at(static_cast<size_t>(id)).dims.arity; }
  int bool_arity(int id) const { return bools_.at(static_cast<size_t>(id)).dims.arity; }
  size_t numeric_count() const { return num_.size(); }
  size_t bool_count() const { return bools_.size(); }
  size_t element_count() const { return elems_.size(); }
  size_t set_count() const { return sets_.size(); }

 private:
  static Dims make_dims(const std::vector<uint32_t>& dims) {
    if (dims.empty() || dims.size() > 3) throw ModelBuildError("table arity must be 1..3");
    Dims d;
    d.arity = static_cast<int>(dims.size());
    for (size_t i = 0; i < dims.size(); ++i) d.d[i] = dims[i];
    return d;
  }
  static void check_size(size_t got, const Dims& dims, const std::string& name) {
    if (got != dims.flat_size())
      throw ModelBuildError("table '" + name + "': data size does not match dims");
  }
  static size_t flatten(const Dims& t, uint32_t i, uint32_t j, uint32_t k, const std::string& name) {
    if (i >= t.d[0] || j >= t.d[1] || k >= t.d[2])
      throw EvaluationError("table '" + name + "': index out of range");
    return (size_t{i} * t.d[1] + j) * t.d[2] + k;
  }

  struct NumTable {
    std::string name;
    std::vector<double> data;
    Dims dims;
  };
  struct BoolTable {
    std::string name;
    std::vector<uint8_t> data;
    Dims dims;
  };
  struct ElemTable {
    std::string name;
    std::vector<uint32_t> data;
  };
  struct SetTable {
    std::string name;
    std::vector<Bitset> data;
  };
  std::vector<NumTable> num_;
  std::vector<BoolTable> bools_;
  std::vector<ElemTable> elems_;
  std::vector<SetTable> sets_;
};

}  // namespace bpkit
