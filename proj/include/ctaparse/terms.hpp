#pragma once

// Ranked alphabets, trees with Gorn positions, and sorted regular tree
// grammars in normal form together with their abstract syntax trees.

#include <algorithm>
#include <charconv>
#include <concepts>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "ctaparse/error.hpp"

namespace ctaparse {

/// Symbol names are non-empty and avoid whitespace and the characters
/// reserved by the text formats.
inline bool is_valid_symbol_name(std::string_view name) {
  if (name.empty()) return false;
  for (char ch : name) {
    switch (ch) {
      case ' ': case '\t': case '\n': case '\r': case '\v': case '\f':
      case '#': case ',': case '[': case ']': case '|': case '.': case '<': case '>':
        return false;
      default:
        break;
    }
  }
  return true;
}

/// Finite map from symbol names to ranks. Also used for sorted alphabets
/// (states, nonterminals) where the "rank" is the sort.
class RankedAlphabet {
 public:
  using map_type = std::map<std::string, unsigned, std::less<>>;

  RankedAlphabet() = default;
  RankedAlphabet(std::initializer_list<std::pair<std::string, unsigned>> symbols) {
    for (const auto& [name, rank] : symbols) add(name, rank);
  }

  /// Declares `name`. Redeclaring with the same rank is a no-op.
  void add(const std::string& name, unsigned rank) {
    if (!is_valid_symbol_name(name))
      throw ValidationError("invalid symbol name '" + name + "'");
    auto [it, inserted] = symbols_.emplace(name, rank);
    if (!inserted && it->second != rank)
      throw ValidationError("symbol '" + name + "' declared with ranks " +
                            std::to_string(it->second) + " and " + std::to_string(rank));
  }

  bool contains(std::string_view name) const { return symbols_.find(name) != symbols_.end(); }

  std::optional<unsigned> find(std::string_view name) const {
    auto it = symbols_.find(name);
    if (it == symbols_.end()) return std::nullopt;
    return it->second;
  }

  unsigned rank(std::string_view name) const {
    auto it = symbols_.find(name);
    if (it == symbols_.end()) throw ValidationError("undeclared symbol '" + std::string(name) + "'");
    return it->second;
  }

  std::vector<std::string> with_rank(unsigned rank) const {
    std::vector<std::string> out;
    for (const auto& [name, r] : symbols_)
      if (r == rank) out.push_back(name);
    return out;
  }

  const map_type& symbols() const noexcept { return symbols_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }

  friend bool operator==(const RankedAlphabet&, const RankedAlphabet&) = default;

 private:
  map_type symbols_;
};

/// A finite ordered tree. Whether the label carries a rank is up to the
/// caller; `Tree<std::string>` is the usual tree over a ranked alphabet.
template <class Label>
struct Tree {
  Label label{};
  std::vector<Tree> children;

  Tree() = default;
  explicit Tree(Label l, std::vector<Tree> c = {}) : label(std::move(l)), children(std::move(c)) {}

  bool is_leaf() const noexcept { return children.empty(); }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.size();
    return n;
  }

  friend bool operator==(const Tree& a, const Tree& b) {
    return a.label == b.label && a.children == b.children;
  }
  friend bool operator<(const Tree& a, const Tree& b) {
    if (a.label < b.label) return true;
    if (b.label < a.label) return false;
    return std::lexicographical_compare(a.children.begin(), a.children.end(),
                                        b.children.begin(), b.children.end());
  }
};

/// Gorn address. The root is the empty path.
struct Position {
  std::vector<unsigned> path;

  Position() = default;
  Position(std::initializer_list<unsigned> p) : path(p) {}
  explicit Position(std::vector<unsigned> p) : path(std::move(p)) {}

  bool is_root() const noexcept { return path.empty(); }

  Position child(unsigned i) const {
    Position out = *this;
    out.path.push_back(i);
    return out;
  }

  /// i · w
  Position prefixed(unsigned i) const {
    Position out;
    out.path.reserve(path.size() + 1);
    out.path.push_back(i);
    out.path.insert(out.path.end(), path.begin(), path.end());
    return out;
  }

  /// "1.2.3"; the root is written "e".
  std::string to_string() const {
    if (path.empty()) return "e";
    std::string s;
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (i) s += '.';
      s += std::to_string(path[i]);
    }
    return s;
  }

  static Position parse(std::string_view text) {
    if (text == "e") return {};
    Position out;
    while (true) {
      auto dot = text.find('.');
      auto part = text.substr(0, dot);
      unsigned value = 0;
      auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
      if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size() || value == 0)
        throw SyntaxError(0, "malformed position '" + std::string(text) + "'");
      out.path.push_back(value);
      if (dot == std::string_view::npos) break;
      text.remove_prefix(dot + 1);
    }
    return out;
  }

  auto operator<=>(const Position&) const = default;
};

namespace detail {

template <class Label, class Fn>
void visit_preorder(const Tree<Label>& t, Position& here, Fn& fn) {
  fn(here, t);
  for (unsigned i = 0; i < t.children.size(); ++i) {
    here.path.push_back(i + 1);
    visit_preorder(t.children[i], here, fn);
    here.path.pop_back();
  }
}

}  // namespace detail

/// Calls fn(position, subtree) for every node in preorder.
template <class Label, class Fn>
void for_each_position(const Tree<Label>& t, Fn&& fn) {
  Position here;
  detail::visit_preorder(t, here, fn);
}

/// pos(t) in preorder, which is the lexicographic order of addresses.
template <class Label>
std::vector<Position> positions(const Tree<Label>& t) {
  std::vector<Position> out;
  for_each_position(t, [&](const Position& w, const Tree<Label>&) { out.push_back(w); });
  return out;
}

/// leaves(t) in preorder (left to right).
template <class Label>
std::vector<Position> leaves(const Tree<Label>& t) {
  std::vector<Position> out;
  for_each_position(t, [&](const Position& w, const Tree<Label>& s) {
    if (s.is_leaf()) out.push_back(w);
  });
  return out;
}

/// t|_w; throws if w is not a position of t.
template <class Label>
const Tree<Label>& subtree(const Tree<Label>& t, const Position& w) {
  const Tree<Label>* cur = &t;
  for (unsigned i : w.path) {
    if (i == 0 || i > cur->children.size())
      throw Error("position " + w.to_string() + " is not in the tree");
    cur = &cur->children[i - 1];
  }
  return *cur;
}

/// t(w)
template <class Label>
const Label& label_at(const Tree<Label>& t, const Position& w) {
  return subtree(t, w).label;
}

/// Relabels every node with fn(label), keeping the shape.
template <class Label, class Fn>
auto map_labels(const Tree<Label>& t, Fn&& fn) -> Tree<std::decay_t<decltype(fn(t.label))>> {
  using Out = std::decay_t<decltype(fn(t.label))>;
  Tree<Out> out(fn(t.label));
  out.children.reserve(t.children.size());
  for (const auto& c : t.children) out.children.push_back(map_labels(c, fn));
  return out;
}

/// Sort (s1⋯sk, s) of a signature symbol; sorts are positive integers.
struct Signature {
  std::vector<unsigned> inputs;
  unsigned output = 1;

  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Terminal symbols of an RTG: ordered, printable, and sorted.
template <class G>
concept SignatureSymbol = std::equality_comparable<G> && requires(const G& g, const G& h) {
  { g < h } -> std::convertible_to<bool>;
  { g.signature() } -> std::same_as<Signature>;
  { g.name() } -> std::convertible_to<std::string>;
};

/// A → γ(A1, …, Ak)
template <SignatureSymbol Gamma>
struct Rule {
  std::string lhs;
  Gamma gamma;
  std::vector<std::string> rhs;

  friend bool operator==(const Rule&, const Rule&) = default;
  friend bool operator<(const Rule& a, const Rule& b) {
    return std::tie(a.lhs, a.gamma, a.rhs) < std::tie(b.lhs, b.gamma, b.rhs);
  }
};

using RuleId = std::size_t;

/// Abstract syntax tree: a tree over rule ids of one particular grammar.
using Ast = Tree<RuleId>;

/// S-sorted regular tree grammar in normal form with S = ℕ₊.
template <SignatureSymbol Gamma>
class Rtg {
 public:
  Rtg(RankedAlphabet nonterminals, std::string initial)
      : nonterminals_(std::move(nonterminals)), initial_(std::move(initial)) {
    if (nonterminals_.empty()) throw ValidationError("an RTG needs at least one nonterminal");
    for (const auto& [name, sort] : nonterminals_.symbols())
      if (sort == 0) throw ValidationError("nonterminal '" + name + "' has sort 0");
    if (!nonterminals_.contains(initial_))
      throw ValidationError("initial nonterminal '" + initial_ + "' is not declared");
  }

  /// Adds r after checking it against the sorts. Returns the id of the rule
  /// and whether it was new; identical rules collapse.
  std::pair<RuleId, bool> add_rule(Rule<Gamma> r) {
    const Signature sig = r.gamma.signature();
    const auto lhs_sort = nonterminals_.find(r.lhs);
    if (!lhs_sort) throw ValidationError("rule lhs '" + r.lhs + "' is not a nonterminal");
    if (nonterminals_.contains(r.gamma.name()))
      throw ValidationError("terminal '" + r.gamma.name() + "' clashes with a nonterminal");
    if (*lhs_sort != sig.output)
      throw ValidationError("rule for '" + r.lhs + "': lhs sort " + std::to_string(*lhs_sort) +
                            " differs from output sort " + std::to_string(sig.output) + " of " +
                            r.gamma.name());
    if (r.rhs.size() != sig.inputs.size())
      throw ValidationError("rule for '" + r.lhs + "': " + std::to_string(r.rhs.size()) +
                            " rhs nonterminals but " + r.gamma.name() + " takes " +
                            std::to_string(sig.inputs.size()));
    for (std::size_t i = 0; i < r.rhs.size(); ++i) {
      const auto s = nonterminals_.find(r.rhs[i]);
      if (!s) throw ValidationError("rule rhs '" + r.rhs[i] + "' is not a nonterminal");
      if (*s != sig.inputs[i])
        throw ValidationError("rule for '" + r.lhs + "': argument " + std::to_string(i + 1) +
                              " has sort " + std::to_string(*s) + ", expected " +
                              std::to_string(sig.inputs[i]));
    }
    if (auto it = index_.find(r); it != index_.end()) return {it->second, false};
    const RuleId id = rules_.size();
    index_.emplace(r, id);
    by_lhs_[r.lhs].push_back(id);
    if (std::find(terminals_.begin(), terminals_.end(), r.gamma) == terminals_.end())
      terminals_.push_back(r.gamma);
    rules_.push_back(std::move(r));
    return {id, true};
  }

  const RankedAlphabet& nonterminals() const noexcept { return nonterminals_; }
  const std::string& initial() const noexcept { return initial_; }
  const std::vector<Rule<Gamma>>& rules() const noexcept { return rules_; }
  const Rule<Gamma>& rule(RuleId id) const { return rules_.at(id); }

  /// The terminals that occur in some rule, in order of first use.
  const std::vector<Gamma>& terminals() const noexcept { return terminals_; }

  std::optional<RuleId> find_rule(const Rule<Gamma>& r) const {
    auto it = index_.find(r);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<RuleId>& rules_for(std::string_view lhs) const {
    static const std::vector<RuleId> none;
    auto it = by_lhs_.find(lhs);
    return it == by_lhs_.end() ? none : it->second;
  }

 private:
  RankedAlphabet nonterminals_;
  std::string initial_;
  std::vector<Rule<Gamma>> rules_;
  std::vector<Gamma> terminals_;
  std::map<Rule<Gamma>, RuleId> index_;
  std::map<std::string, std::vector<RuleId>, std::less<>> by_lhs_;
};

/// (d)_Γ
template <SignatureSymbol Gamma>
Tree<Gamma> project_to_gamma(const Rtg<Gamma>& g, const Ast& d) {
  return map_labels(d, [&](RuleId id) { return g.rule(id).gamma; });
}

struct AstViolation {
  Position where;
  std::string message;
};

/// Checks that d ∈ T_R: every rule exists and, for each node with rule
/// A → γ(A1,…,Ak), child i has lhs Ai. Reports the first violation in preorder.
template <SignatureSymbol Gamma>
std::optional<AstViolation> validate_ast(const Rtg<Gamma>& g, const Ast& d) {
  std::optional<AstViolation> found;
  for_each_position(d, [&](const Position& w, const Ast& node) {
    if (found) return;
    if (node.label >= g.rules().size()) {
      found = AstViolation{w, "unknown rule id " + std::to_string(node.label)};
      return;
    }
    const auto& r = g.rule(node.label);
    if (node.children.size() != r.rhs.size()) {
      found = AstViolation{w, "rule for '" + r.lhs + "' has " + std::to_string(r.rhs.size()) +
                                  " children, node has " + std::to_string(node.children.size())};
      return;
    }
    for (std::size_t i = 0; i < r.rhs.size(); ++i) {
      const RuleId cid = node.children[i].label;
      if (cid >= g.rules().size()) continue;  // reported when visiting the child
      if (g.rule(cid).lhs != r.rhs[i]) {
        found = AstViolation{w.child(static_cast<unsigned>(i + 1)),
                             "expected a rule for '" + r.rhs[i] + "', found one for '" +
                                 g.rule(cid).lhs + "'"};
        return;
      }
    }
  });
  return found;
}

}  // namespace ctaparse
