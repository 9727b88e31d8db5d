/// @file  truth_table.hpp
/// @brief Bit-parallel truth tables, the workhorse of the brute-force oracle

#pragma once

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "core.hpp"

namespace qlit {

/// Largest universe the oracle will enumerate. Defaults to 24 and can be
/// overridden with the QLIT_ENUM_CAP environment variable.
inline std::size_t default_enum_cap() {
  if (const char *env = std::getenv("QLIT_ENUM_CAP")) {
    char *end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 40)
      return static_cast<std::size_t>(v);
  }
  return 24;
}

/// The set of worlds of an n-variable universe, one bit per world. World
/// index bit i holds the value of variable i.
class TruthTable {
public:
  TruthTable() = default;

  explicit TruthTable(std::size_t num_vars, bool value = false)
      : _n(num_vars), _words(word_count(num_vars), value ? ~std::uint64_t{0} : 0) {
    trim();
  }

  static std::size_t word_count(std::size_t n) {
    return n <= 6 ? 1 : (std::size_t{1} << (n - 6));
  }

  /// Table of the literal `l`.
  static TruthTable literal(std::size_t n, Literal l) {
    TruthTable t(n);
    const VarId v = l.var();
    if (v < 6) {
      const std::uint64_t pat = kPattern[v];
      for (auto &w : t._words)
        w = l.positive() ? pat : ~pat;
    } else {
      for (std::size_t c = 0; c < t._words.size(); ++c) {
        const bool bit = ((c >> (v - 6)) & 1u) != 0;
        t._words[c] = bit == l.positive() ? ~std::uint64_t{0} : 0;
      }
    }
    t.trim();
    return t;
  }

  std::size_t num_vars() const noexcept { return _n; }
  std::uint64_t num_worlds() const noexcept { return std::uint64_t{1} << _n; }
  const std::vector<std::uint64_t> &words() const noexcept { return _words; }
  std::vector<std::uint64_t> &words() noexcept { return _words; }

  bool get(std::uint64_t idx) const noexcept { return (_words[idx >> 6] >> (idx & 63)) & 1u; }
  void set(std::uint64_t idx, bool v = true) noexcept {
    if (v)
      _words[idx >> 6] |= std::uint64_t{1} << (idx & 63);
    else
      _words[idx >> 6] &= ~(std::uint64_t{1} << (idx & 63));
  }

  std::uint64_t count() const noexcept {
    std::uint64_t c = 0;
    for (auto w : _words)
      c += static_cast<std::uint64_t>(std::popcount(w));
    return c;
  }
  bool none() const noexcept {
    for (auto w : _words)
      if (w)
        return false;
    return true;
  }
  bool all() const noexcept { return count() == num_worlds(); }

  /// Table of g(ω) = f(ω with variable v flipped).
  TruthTable flipped(VarId v) const {
    TruthTable t(_n);
    if (v < 6) {
      const unsigned s = 1u << v;
      const std::uint64_t hi = kPattern[v];
      for (std::size_t c = 0; c < _words.size(); ++c) {
        const std::uint64_t w = _words[c];
        t._words[c] = ((w & hi) >> s) | ((w & ~hi) << s);
      }
    } else {
      const std::size_t stride = std::size_t{1} << (v - 6);
      for (std::size_t c = 0; c < _words.size(); ++c)
        t._words[c] = _words[c ^ stride];
    }
    t.trim();
    return t;
  }

  /// Visit every set world index in ascending order.
  template <class Fn> void for_each(Fn &&fn) const {
    for (std::size_t c = 0; c < _words.size(); ++c) {
      std::uint64_t w = _words[c];
      while (w) {
        const int b = std::countr_zero(w);
        fn((std::uint64_t{c} << 6) | static_cast<std::uint64_t>(b));
        w &= w - 1;
      }
    }
  }

  std::vector<std::uint64_t> indices() const {
    std::vector<std::uint64_t> out;
    for_each([&](std::uint64_t i) { out.push_back(i); });
    return out;
  }

  TruthTable &operator&=(const TruthTable &o) {
    for (std::size_t i = 0; i < _words.size(); ++i)
      _words[i] &= o._words[i];
    return *this;
  }
  TruthTable &operator|=(const TruthTable &o) {
    for (std::size_t i = 0; i < _words.size(); ++i)
      _words[i] |= o._words[i];
    return *this;
  }
  friend TruthTable operator&(TruthTable a, const TruthTable &b) { return a &= b; }
  friend TruthTable operator|(TruthTable a, const TruthTable &b) { return a |= b; }
  friend TruthTable operator~(TruthTable a) {
    for (auto &w : a._words)
      w = ~w;
    a.trim();
    return a;
  }
  /// Set difference.
  friend TruthTable operator-(TruthTable a, const TruthTable &b) {
    for (std::size_t i = 0; i < a._words.size(); ++i)
      a._words[i] &= ~b._words[i];
    return a;
  }
  bool subset_of(const TruthTable &o) const {
    for (std::size_t i = 0; i < _words.size(); ++i)
      if (_words[i] & ~o._words[i])
        return false;
    return true;
  }

  friend bool operator==(const TruthTable &, const TruthTable &) = default;

  static constexpr std::uint64_t kPattern[6] = {
      0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
      0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};

private:
  void trim() {
    if (_n < 6 && !_words.empty())
      _words[0] &= (std::uint64_t{1} << (std::uint64_t{1} << _n)) - 1;
  }

  std::size_t _n = 0;
  std::vector<std::uint64_t> _words = std::vector<std::uint64_t>(1, 0);
};

inline void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap)
    throw CapacityError("exact enumeration over " + std::to_string(n) + " variables", cap);
}

/// Truth table of `f` over its universe. Evaluates the DAG word by word, 64
/// worlds at a time.
inline TruthTable truth_table(const Formula &f, std::size_t cap = default_enum_cap()) {
  const Universe &u = f.universe();
  const std::size_t n = u.size();
  check_cap(n, cap);

  struct Op {
    Kind kind;
    Literal lit;
    std::uint32_t first, count;
  };
  const std::vector<NodeId> order = detail::topological(u, f.id());
  std::unordered_map<NodeId, std::uint32_t> local;
  std::vector<Op> ops;
  std::vector<std::uint32_t> edges;
  ops.reserve(order.size());
  for (NodeId id : order) {
    const auto &node = u.store().node(id);
    Op op{node.kind, node.lit, static_cast<std::uint32_t>(edges.size()),
          static_cast<std::uint32_t>(node.kids.size())};
    for (NodeId c : node.kids)
      edges.push_back(local.at(c));
    local.emplace(id, static_cast<std::uint32_t>(ops.size()));
    ops.push_back(op);
  }

  TruthTable out(n);
  std::vector<std::uint64_t> val(ops.size());
  const std::size_t words = TruthTable::word_count(n);
  for (std::size_t c = 0; c < words; ++c) {
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const Op &op = ops[i];
      std::uint64_t v = 0;
      switch (op.kind) {
      case Kind::False:
        v = 0;
        break;
      case Kind::True:
        v = ~std::uint64_t{0};
        break;
      case Kind::Literal: {
        const VarId x = op.lit.var();
        if (x < 6)
          v = TruthTable::kPattern[x];
        else
          v = ((c >> (x - 6)) & 1u) ? ~std::uint64_t{0} : 0;
        if (!op.lit.positive())
          v = ~v;
        break;
      }
      case Kind::Not:
        v = ~val[edges[op.first]];
        break;
      case Kind::And:
        v = ~std::uint64_t{0};
        for (std::uint32_t k = 0; k < op.count; ++k)
          v &= val[edges[op.first + k]];
        break;
      case Kind::Or:
        v = 0;
        for (std::uint32_t k = 0; k < op.count; ++k)
          v |= val[edges[op.first + k]];
        break;
      }
      val[i] = v;
    }
    out.words()[c] = val.back();
  }
  if (n < 6)
    out.words()[0] &= (std::uint64_t{1} << (std::uint64_t{1} << n)) - 1;
  return out;
}

/// Table of a term (the worlds containing all of its literals).
inline TruthTable truth_table(const Term &t, std::size_t n) {
  TruthTable out(n, true);
  for (Literal l : t)
    out &= TruthTable::literal(n, l);
  return out;
}

inline TruthTable truth_table(const Clause &c, std::size_t n) {
  TruthTable out(n, false);
  for (Literal l : c)
    out |= TruthTable::literal(n, l);
  return out;
}

inline bool equivalent(const Formula &a, const Formula &b) {
  return truth_table(a) == truth_table(b.aligned_to(a.universe()));
}

inline bool entails(const Formula &a, const Formula &b) {
  return truth_table(a).subset_of(truth_table(b.aligned_to(a.universe())));
}

inline bool is_consistent(const Formula &f) { return !truth_table(f).none(); }
inline bool is_valid(const Formula &f) { return truth_table(f).all(); }

/// Whether term `t` implies formula `f`.
inline bool entails(const Term &t, const Formula &f) {
  return truth_table(t, f.universe().size()).subset_of(truth_table(f));
}

} // namespace qlit
