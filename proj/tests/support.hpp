#pragma once

// Shared fixtures for the test programs: the a^n b^n c^n automaton built in
// code, its worked constituent tree with run, and small reference helpers.

#include <algorithm>
#include <cstddef>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ctaparse/ctaparse.hpp"

namespace testing_support {

using namespace ctaparse;

inline std::string fixture(const std::string& name) { return std::string(CTAPARSE_FIXTURES) + "/" + name; }

inline WordTuple tuple(std::vector<unsigned> kappa, const std::string& text) {
  return parse_word_tuple(text, std::move(kappa));
}

// Word tuples of the a^n b^n c^n automaton.
inline WordTuple root_left() { return tuple({2, 3, 1}, "[x1.1 x2.1 x1.2 x2.2 x3.1 x2.3]"); }
inline WordTuple root_right() { return tuple({1, 3, 2}, "[x1.1 x2.1 x3.1 x2.2 x3.2 x2.3]"); }
inline WordTuple chain_left() { return tuple({2, 3, 1}, "[x1.1 x2.1 , x1.2 x2.2 , x3.1 x2.3]"); }
inline WordTuple chain_right() { return tuple({1, 3, 2}, "[x1.1 x2.1 , x3.1 x2.2 , x3.2 x2.3]"); }
inline WordTuple base() { return tuple({1, 1, 1}, "[x1.1 , x2.1 , x3.1]"); }
inline WordTuple pair_split() { return tuple({1, 1}, "[x1.1 , x2.1]"); }

inline Cta abc() {
  Cta c;
  c.terminals = RankedAlphabet({{"a", 0}, {"b", 0}, {"c", 0}, {"d", 3}, {"e", 2}});
  c.states = RankedAlphabet({{"q_f", 1}, {"q", 3}, {"q_l", 2}, {"q_r", 2}, {"q_a", 1}, {"q_b", 1}, {"q_c", 1}});
  c.final_state = "q_f";
  c.transitions = {
      NullaryTransition{"a", "q_a"},
      NullaryTransition{"b", "q_b"},
      NullaryTransition{"c", "q_c"},
      CompositeTransition{{"q_l", "q", "q_c"}, "d", root_left(), "q_f"},
      CompositeTransition{{"q_a", "q", "q_r"}, "d", root_right(), "q_f"},
      CompositeTransition{{"q_l", "q", "q_c"}, "d", chain_left(), "q"},
      CompositeTransition{{"q_a", "q", "q_r"}, "d", chain_right(), "q"},
      CompositeTransition{{"q_a", "q_b", "q_c"}, "d", base(), "q"},
      CompositeTransition{{"q_a", "q_b"}, "e", pair_split(), "q_l"},
      CompositeTransition{{"q_b", "q_c"}, "e", pair_split(), "q_r"},
  };
  return c;
}

// The worked example: yield a a a b b b c c c with the left pattern at the
// root and the right pattern one level down.
inline ConstituentTree worked_tree() {
  return ct_node("d", {ct_node("e", {ct_leaf("a", 1), ct_leaf("b", 4)}),
                       ct_node("d", {ct_leaf("a", 2),
                                     ct_node("d", {ct_leaf("a", 3), ct_leaf("b", 6), ct_leaf("c", 9)}),
                                     ct_node("e", {ct_leaf("b", 5), ct_leaf("c", 8)})}),
                       ct_leaf("c", 7)});
}

inline Run worked_run() {
  return run_node("q_f", root_left(),
                  {run_node("q_l", pair_split(), {run_leaf("q_a"), run_leaf("q_b")}),
                   run_node("q", chain_right(),
                            {run_leaf("q_a"),
                             run_node("q", base(), {run_leaf("q_a"), run_leaf("q_b"), run_leaf("q_c")}),
                             run_node("q_r", pair_split(), {run_leaf("q_b"), run_leaf("q_c")})}),
                   run_leaf("q_c")});
}

inline Word words(const std::string& text) {
  Word out;
  std::string cur;
  for (char ch : text) {
    if (ch == ' ') {
      if (!cur.empty()) out.push_back(cur), cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline Word abc_word(std::size_t n) {
  Word u;
  for (const char* s : {"a", "b", "c"})
    for (std::size_t i = 0; i < n; ++i) u.push_back(s);
  return u;
}

// Leaves of t left to right, read off by plain recursion.
template <class Label>
void collect_leaves(const Tree<Label>& t, std::vector<const Label*>& out) {
  if (t.children.empty()) out.push_back(&t.label);
  for (const auto& c : t.children) collect_leaves(c, out);
}

// Random Σ-tree over labels with arities {0: leaf_labels, 1..3: inner}.
inline Tree<std::string> random_shape(std::mt19937& rng, std::size_t depth) {
  static const std::vector<std::string> leaves{"a", "b", "c"};
  static const std::vector<std::string> inner{"u", "v", "w"};
  std::uniform_int_distribution<int> arity(0, depth == 0 ? 0 : 3);
  const int k = arity(rng);
  Tree<std::string> t(k == 0 ? leaves[rng() % leaves.size()] : inner[k - 1]);
  for (int i = 0; i < k; ++i) t.children.push_back(random_shape(rng, depth - 1));
  return t;
}

// Random constituent tree: random shape, then leaves get a random injection
// into [1, leaves + gap] with gap ≤ leaves.
inline ConstituentTree random_constituent_tree(std::mt19937& rng, std::size_t depth) {
  const auto shape = random_shape(rng, depth);
  const std::size_t n = leaves(shape).size();
  std::uniform_int_distribution<std::size_t> gap_budget(0, n);
  std::vector<unsigned> pool(n + gap_budget(rng));
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<unsigned>(i + 1);
  std::shuffle(pool.begin(), pool.end(), rng);
  std::size_t next = 0;
  auto go = [&](auto& self, const Tree<std::string>& t) -> ConstituentTree {
    if (t.is_leaf()) return ct_leaf(t.label, pool[next++]);
    std::vector<ConstituentTree> kids;
    for (const auto& c : t.children) kids.push_back(self(self, c));
    return ct_node(t.label, std::move(kids));
  };
  return go(go, shape);
}

// Random monotone tuple over κ with n components: interleave each child's
// variables in order, then cut the sequence into n nonempty pieces.
inline WordTuple random_tuple(std::mt19937& rng, const std::vector<unsigned>& kappa, unsigned n) {
  std::vector<unsigned> owners;
  for (std::size_t i = 0; i < kappa.size(); ++i) owners.insert(owners.end(), kappa[i], unsigned(i + 1));
  std::shuffle(owners.begin(), owners.end(), rng);
  std::vector<unsigned> next(kappa.size(), 1);
  std::vector<Variable> seq;
  for (unsigned child : owners) seq.push_back(Variable{child, next[child - 1]++});
  std::vector<std::size_t> cuts(seq.size() - 1);
  for (std::size_t i = 0; i < cuts.size(); ++i) cuts[i] = i + 1;
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(n - 1);
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::vector<Variable>> comps(1);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (std::find(cuts.begin(), cuts.end(), i) != cuts.end()) comps.emplace_back();
    comps.back().push_back(seq[i]);
  }
  return WordTuple::make(kappa, comps);
}

// Random well-sorted Γ-tree of the given sort over the symbols of the
// a^n b^n c^n automaton: leaves a, b, c; d of rank 3 and e of rank 2;
// every sort in {1, 2, 3}.
inline Tree<GammaSymbol> random_gamma_tree(std::mt19937& rng, unsigned sort, std::size_t depth) {
  static const std::vector<std::string> letters{"a", "b", "c"};
  if (sort == 1 && (depth == 0 || rng() % 3 == 0)) return Tree<GammaSymbol>(GammaSymbol::leaf(letters[rng() % 3]));
  const bool ternary = sort == 3 || depth <= 1 || rng() % 2 == 0;
  const std::size_t k = ternary ? 3 : 2;
  std::vector<unsigned> kappa(k, 1);
  if (depth > 1)
    for (auto& s : kappa) s = 1 + rng() % 3;
  unsigned total = 0;
  for (unsigned s : kappa) total += s;
  while (total < sort) {
    ++kappa[rng() % k];
    ++total;
  }
  Tree<GammaSymbol> t(GammaSymbol::pair(ternary ? "d" : "e", random_tuple(rng, kappa, sort)));
  for (unsigned s : kappa) t.children.push_back(random_gamma_tree(rng, s, depth == 0 ? 0 : depth - 1));
  return t;
}

inline SetValue random_set(std::mt19937& rng, unsigned sort, std::size_t max_size = 4) {
  std::set<Pct> trees;
  const std::size_t size = rng() % (max_size + 1);
  for (std::size_t i = 0; i < size; ++i) trees.insert(ct_eval(random_gamma_tree(rng, sort, 2)));
  return SetValue(std::move(trees));
}

// Leaves of a Γ-tree in the order its yield reads them, grouped by
// component: the yield algebra evaluated with each leaf renamed to its
// position.
inline std::vector<std::vector<Position>> yield_positions(const Tree<GammaSymbol>& t) {
  Position here;
  auto rename = [&](auto& self, const Tree<GammaSymbol>& node) -> Tree<GammaSymbol> {
    if (node.is_leaf()) return Tree<GammaSymbol>(GammaSymbol::leaf(here.to_string()));
    Tree<GammaSymbol> out(node.label);
    for (unsigned i = 0; i < node.children.size(); ++i) {
      here.path.push_back(i + 1);
      out.children.push_back(self(self, node.children[i]));
      here.path.pop_back();
    }
    return out;
  };
  std::vector<std::vector<Position>> out;
  for (const auto& comp : y_eval(rename(rename, t))) {
    auto& seg = out.emplace_back();
    for (const auto& name : comp) seg.push_back(Position::parse(name));
  }
  return out;
}

// Indexes the leaves of t (a tree over Σ) following `segments`, starting
// at `first` and skipping `gap` indices between segments.
inline ConstituentTree index_leaves(const Tree<std::string>& t, const std::vector<std::vector<Position>>& segments,
                                    unsigned first, unsigned gap) {
  std::map<Position, unsigned> index;
  unsigned next = first;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (s) next += gap;
    for (const auto& w : segments[s]) index[w] = next++;
  }
  Position here;
  auto go = [&](auto& self, const Tree<std::string>& node) -> ConstituentTree {
    if (node.is_leaf()) return ct_leaf(node.label, index.at(here));
    std::vector<ConstituentTree> kids;
    for (unsigned i = 0; i < node.children.size(); ++i) {
      here.path.push_back(i + 1);
      kids.push_back(self(self, node.children[i]));
      here.path.pop_back();
    }
    return ct_node(node.label, std::move(kids));
  };
  return go(go, t);
}

// All words over `alphabet` with length in [1, max_length].
inline std::vector<Word> all_words(const std::vector<std::string>& alphabet, std::size_t max_length) {
  std::vector<Word> out;
  std::vector<Word> layer{Word{}};
  for (std::size_t len = 1; len <= max_length; ++len) {
    std::vector<Word> grown;
    for (const auto& w : layer)
      for (const auto& a : alphabet) {
        grown.push_back(w);
        grown.back().push_back(a);
      }
    out.insert(out.end(), grown.begin(), grown.end());
    layer = std::move(grown);
  }
  return out;
}

}  // namespace testing_support
