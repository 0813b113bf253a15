#pragma once

// Partitioned constituent trees, the constituent tree algebra, the yield
// algebra over string tuples, and the set-lifted M-monoid used as the
// weight algebra of the parser.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "ctaparse/automaton.hpp"
#include "ctaparse/error.hpp"
#include "ctaparse/terms.hpp"
#include "ctaparse/word_tuple.hpp"

namespace ctaparse {

/// Operator of the signature Γ: a rank-0 terminal, or a pair (a, e).
struct GammaSymbol {
  std::string terminal;
  std::optional<WordTuple> tuple;

  static GammaSymbol leaf(std::string a) { return {std::move(a), std::nullopt}; }
  static GammaSymbol pair(std::string a, WordTuple e) { return {std::move(a), std::move(e)}; }

  bool is_leaf() const noexcept { return !tuple.has_value(); }
  std::size_t arity() const noexcept { return tuple ? tuple->arity() : 0; }

  /// Leaf: (ε, 1); pair: (ℓ1⋯ℓk, n).
  Signature signature() const {
    if (!tuple) return {{}, 1};
    return {tuple->kappa(), tuple->fanout()};
  }

  std::string name() const { return tuple ? "(" + terminal + ", " + tuple->to_string() + ")" : terminal; }

  friend bool operator==(const GammaSymbol&, const GammaSymbol&) = default;
  friend bool operator<(const GammaSymbol& a, const GammaSymbol& b) {
    return std::tie(a.terminal, a.tuple) < std::tie(b.terminal, b.tuple);
  }
};

/// (t, <, (U1, …, Un)). The order is the leaf sequence; segment m is the
/// slice [bounds[m-1], bounds[m]) of it (with bounds[-1] = 0).
class Pct {
 public:
  /// Validates: order is a permutation of leaves(t); the segments are
  /// nonempty and cover the order exactly.
  Pct(Tree<std::string> tree, std::vector<Position> order, std::vector<std::size_t> bounds)
      : tree_(std::move(tree)), order_(std::move(order)), bounds_(std::move(bounds)) {
    if (auto problem = check()) throw ValidationError("invalid partitioned constituent tree: " + *problem);
  }

  /// Builds from explicit segments (concatenated in order).
  static Pct from_segments(Tree<std::string> tree, const std::vector<std::vector<Position>>& segments) {
    std::vector<Position> order;
    std::vector<std::size_t> bounds;
    for (const auto& s : segments) {
      order.insert(order.end(), s.begin(), s.end());
      bounds.push_back(order.size());
    }
    return Pct(std::move(tree), std::move(order), std::move(bounds));
  }

  const Tree<std::string>& tree() const noexcept { return tree_; }
  const std::vector<Position>& order() const noexcept { return order_; }
  const std::vector<std::size_t>& bounds() const noexcept { return bounds_; }
  std::size_t segment_count() const noexcept { return bounds_.size(); }

  std::span<const Position> segment(std::size_t m) const {
    const std::size_t begin = m == 0 ? 0 : bounds_.at(m - 1);
    return std::span<const Position>(order_).subspan(begin, bounds_.at(m) - begin);
  }

  std::vector<std::vector<Position>> segments() const {
    std::vector<std::vector<Position>> out;
    for (std::size_t m = 0; m < bounds_.size(); ++m) {
      auto s = segment(m);
      out.emplace_back(s.begin(), s.end());
    }
    return out;
  }

  friend bool operator==(const Pct&, const Pct&) = default;
  friend bool operator<(const Pct& a, const Pct& b) {
    return std::tie(a.tree_, a.order_, a.bounds_) < std::tie(b.tree_, b.order_, b.bounds_);
  }

 private:
  std::optional<std::string> check() const {
    auto lv = leaves(tree_);
    auto sorted_order = order_;
    std::sort(sorted_order.begin(), sorted_order.end());
    if (sorted_order != lv) return "order is not a permutation of the leaves";
    if (bounds_.empty()) return "no segments";
    std::size_t prev = 0;
    for (std::size_t b : bounds_) {
      if (b <= prev) return "empty segment";
      prev = b;
    }
    if (prev != order_.size()) return "segments do not cover all leaves";
    return std::nullopt;
  }

  Tree<std::string> tree_;
  std::vector<Position> order_;
  std::vector<std::size_t> bounds_;
};

/// rep(ξ): leaves ordered by index; maximal index intervals form the segments.
inline Pct rep(const ConstituentTree& xi) {
  if (auto problem = check_constituent_tree(xi)) throw ValidationError(*problem);
  std::vector<std::pair<unsigned, Position>> indexed;
  for_each_position(xi, [&](const Position& w, const ConstituentTree& n) {
    if (n.label.index) indexed.emplace_back(*n.label.index, w);
  });
  std::sort(indexed.begin(), indexed.end());
  std::vector<Position> order;
  std::vector<std::size_t> bounds;
  for (std::size_t i = 0; i < indexed.size(); ++i) {
    if (i > 0 && indexed[i - 1].first + 1 != indexed[i].first) bounds.push_back(i);
    order.push_back(indexed[i].second);
  }
  bounds.push_back(order.size());
  return Pct(strip_indices(xi), std::move(order), std::move(bounds));
}

/// Per segment, the leaf labels read in order.
inline StringTuple p_yield(const Pct& p) {
  StringTuple out;
  for (std::size_t m = 0; m < p.segment_count(); ++m) {
    Word w;
    for (const auto& pos : p.segment(m)) w.push_back(label_at(p.tree(), pos));
    out.push_back(std::move(w));
  }
  return out;
}

/// θ_Σ(g)(args) of the constituent tree algebra.
inline Pct ct_apply(const GammaSymbol& g, std::span<const Pct> args) {
  if (g.is_leaf()) {
    if (!args.empty()) throw ValidationError("leaf operator " + g.terminal + " applied to arguments");
    return Pct(Tree<std::string>(g.terminal), {Position{}}, {1});
  }
  const WordTuple& e = *g.tuple;
  if (args.size() != e.arity())
    throw ValidationError("operator " + g.name() + " applied to " + std::to_string(args.size()) + " arguments");
  for (std::size_t i = 0; i < args.size(); ++i)
    if (args[i].segment_count() != e.kappa()[i])
      throw ValidationError("operator " + g.name() + ": argument " + std::to_string(i + 1) + " has " +
                            std::to_string(args[i].segment_count()) + " segments, expected " +
                            std::to_string(e.kappa()[i]));

  Tree<std::string> t(g.terminal);
  t.children.reserve(args.size());
  for (const auto& a : args) t.children.push_back(a.tree());

  std::vector<Position> order;
  std::vector<std::size_t> bounds;
  for (const auto& comp : e.components()) {
    for (const auto& s : comp) {
      const auto& v = std::get<Variable>(s);
      for (const auto& w : args[v.child - 1].segment(v.component - 1)) order.push_back(w.prefixed(v.child));
    }
    bounds.push_back(order.size());
  }
  return Pct(std::move(t), std::move(order), std::move(bounds));
}

/// (t)_𝒞𝒯
inline Pct ct_eval(const Tree<GammaSymbol>& t) {
  std::vector<Pct> args;
  args.reserve(t.children.size());
  for (const auto& c : t.children) args.push_back(ct_eval(c));
  return ct_apply(t.label, args);
}

/// θ_Y(g)(args) of the yield algebra.
inline StringTuple y_apply(const GammaSymbol& g, std::span<const StringTuple> args) {
  if (g.is_leaf()) {
    if (!args.empty()) throw ValidationError("leaf operator " + g.terminal + " applied to arguments");
    return {{g.terminal}};
  }
  return apply_word_function(*g.tuple, args);
}

/// (t)_Y
inline StringTuple y_eval(const Tree<GammaSymbol>& t) {
  std::vector<StringTuple> args;
  args.reserve(t.children.size());
  for (const auto& c : t.children) args.push_back(y_eval(c));
  return y_apply(t.label, args);
}

/// Element of the carrier ⋃ₙ 𝒫(pC^(n)) ∪ {⊥}. The empty set has no sort.
class SetValue {
 public:
  SetValue() = default;

  /// Throws if the trees do not all share one segment count.
  explicit SetValue(std::set<Pct> trees) : trees_(std::move(trees)) {
    if (!trees_.empty()) {
      const auto n = trees_.begin()->segment_count();
      for (const auto& p : trees_)
        if (p.segment_count() != n) throw ValidationError("a sorted set mixes segment counts");
    }
  }

  static SetValue bottom() {
    SetValue v;
    v.bottom_ = true;
    return v;
  }

  bool is_bottom() const noexcept { return bottom_; }
  bool empty() const noexcept { return !bottom_ && trees_.empty(); }
  std::size_t size() const noexcept { return trees_.size(); }
  const std::set<Pct>& trees() const noexcept { return trees_; }

  std::optional<std::size_t> sort() const {
    if (bottom_ || trees_.empty()) return std::nullopt;
    return trees_.begin()->segment_count();
  }

  friend bool operator==(const SetValue&, const SetValue&) = default;

 private:
  bool bottom_ = false;
  std::set<Pct> trees_;
};

/// B1 ⊎ B2
inline SetValue mm_add(const SetValue& x, const SetValue& y) {
  if (x.is_bottom() || y.is_bottom()) return SetValue::bottom();
  if (x.empty()) return y;
  if (y.empty()) return x;
  if (x.sort() != y.sort()) return SetValue::bottom();
  std::set<Pct> u = x.trees();
  u.insert(y.trees().begin(), y.trees().end());
  return SetValue(std::move(u));
}

/// ψ(γ)(B1, …, Bk): elementwise θ_Σ(γ) over the Cartesian product, ⊥ on
/// any sort mismatch.
inline SetValue mm_apply(const GammaSymbol& g, std::span<const SetValue> args) {
  const Signature sig = g.signature();
  if (args.size() != sig.inputs.size()) return SetValue::bottom();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].is_bottom()) return SetValue::bottom();
    if (auto s = args[i].sort(); s && *s != sig.inputs[i]) return SetValue::bottom();
  }
  std::set<Pct> out;
  std::vector<std::vector<const Pct*>> pools(args.size());
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].empty()) return SetValue();
    for (const auto& p : args[i].trees()) pools[i].push_back(&p);
  }
  std::vector<std::size_t> pick(args.size(), 0);
  std::vector<Pct> chosen;
  while (true) {
    chosen.clear();
    for (std::size_t i = 0; i < args.size(); ++i) chosen.push_back(*pools[i][pick[i]]);
    out.insert(ct_apply(g, chosen));
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == pools[i].size()) pick[i++] = 0;
    if (i == pick.size()) break;
  }
  return SetValue(std::move(out));
}

}  // namespace ctaparse
