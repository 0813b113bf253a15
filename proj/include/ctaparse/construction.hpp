#pragma once

// From a CTA to its RTG over Γ and the weighted language model around it;
// the correspondence ψ between (tree, run) pairs and ASTs; and index
// decoration that turns partitioned constituent trees back into
// constituent trees.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ctaparse/algebras.hpp"
#include "ctaparse/automaton.hpp"
#include "ctaparse/error.hpp"
#include "ctaparse/terms.hpp"

namespace ctaparse {

using ARtg = Rtg<GammaSymbol>;

/// The RTG of a CTA plus the weight mapping wt(A → γ(…)) = γ. The language
/// algebra is the yield algebra and the weight algebra the set-lifted
/// constituent tree algebra. Both are fixed, so only the grammar and the
/// terminal alphabet (for checking input tokens) are stored.
struct WrtgLm {
  ARtg rtg;
  RankedAlphabet sigma;

  const GammaSymbol& wt(RuleId r) const { return rtg.rule(r).gamma; }
};

/// Whether g lies in the finite signature Λ ⊆ Γ of the automaton's RTG:
/// a rank-0 terminal, or (a, e) with a ∈ Σ^(k) and every sort of e in rk(Q).
inline bool in_lambda(const Cta& c, const GammaSymbol& g) {
  const auto rank = c.terminals.find(g.terminal);
  if (!rank) return false;
  if (g.is_leaf()) return *rank == 0;
  const auto& e = *g.tuple;
  if (e.has_terminals() || e.arity() == 0 || *rank != e.arity()) return false;
  std::set<unsigned> sorts;
  for (const auto& [_, s] : c.states.symbols()) sorts.insert(s);
  if (!sorts.count(e.fanout())) return false;
  for (unsigned l : e.kappa())
    if (!sorts.count(l)) return false;
  return true;
}

inline Rule<GammaSymbol> rule_of(const Transition& t) {
  if (const auto* n = std::get_if<NullaryTransition>(&t))
    return {n->target, GammaSymbol::leaf(n->terminal), {}};
  const auto& ct = std::get<CompositeTransition>(t);
  return {ct.target, GammaSymbol::pair(ct.terminal, ct.tuple), ct.children};
}

inline Transition transition_of(const Rule<GammaSymbol>& r) {
  if (r.gamma.is_leaf()) return NullaryTransition{r.gamma.terminal, r.lhs};
  return CompositeTransition{r.rhs, r.gamma.terminal, *r.gamma.tuple, r.lhs};
}

/// One rule q → (a) per (ε, a, q) and q → (a, e)(q1, …, qk) per
/// (q1⋯qk, a, e, q); initial nonterminal q_f. Duplicate transitions collapse
/// into one rule and are reported through `warnings` when given.
inline ARtg build_a_rtg(const Cta& c, std::vector<std::string>* warnings = nullptr) {
  if (auto report = validate_cta(c); !report.ok()) throw ValidationError(report.to_string());
  ARtg g(c.states, c.final_state);
  for (const auto& t : c.transitions) {
    auto [id, added] = g.add_rule(rule_of(t));
    if (!added && warnings) warnings->push_back("duplicate transition " + describe(t) + " ignored");
  }
  return g;
}

inline WrtgLm build_wrtg_lm(const Cta& c, std::vector<std::string>* warnings = nullptr) {
  return WrtgLm{build_a_rtg(c, warnings), c.terminals};
}

/// ψ([ξ, ρ]). Throws unless (ξ, ρ) ∈ CR_A.
inline Ast psi(const Cta& c, const ARtg& g, const ConstituentTree& xi, const Run& rho) {
  if (!check_membership(c, xi, rho)) throw Error("psi: the pair is not recognized by the automaton");

  auto go = [&](auto& self, const ConstituentTree& x, const Run& r) -> Ast {
    Rule<GammaSymbol> rule{r.label.state, GammaSymbol::leaf(x.label.symbol), {}};
    if (r.label.tuple) {
      rule.gamma = GammaSymbol::pair(x.label.symbol, *r.label.tuple);
      for (const auto& ch : r.children) rule.rhs.push_back(ch.label.state);
    }
    const auto id = g.find_rule(rule);
    if (!id) throw InternalError("psi: no rule for " + rule.lhs + " -> " + rule.gamma.name());
    Ast d(*id);
    for (std::size_t i = 0; i < x.children.size(); ++i) d.children.push_back(self(self, x.children[i], r.children[i]));
    return d;
  };
  return go(go, xi, rho);
}

/// ψ⁻¹(d) up to indices: the unindexed Σ-tree and the run.
inline std::pair<Tree<std::string>, Run> psi_inverse(const ARtg& g, const Ast& d) {
  if (auto v = validate_ast(g, d)) throw ValidationError("malformed AST at " + v->where.to_string() + ": " + v->message);
  auto go = [&](auto& self, const Ast& node) -> std::pair<Tree<std::string>, Run> {
    const auto& r = g.rule(node.label);
    Tree<std::string> t(r.gamma.terminal);
    Run rho(RunLabel{r.lhs, r.gamma.tuple});
    for (const auto& ch : node.children) {
      auto [ct, cr] = self(self, ch);
      t.children.push_back(std::move(ct));
      rho.children.push_back(std::move(cr));
    }
    return {std::move(t), std::move(rho)};
  };
  return go(go, d);
}

/// Indexes the leaves of p.tree() in the order of p: the first leaf gets m,
/// each further leaf the next index, plus `gap` extra between segments.
inline ConstituentTree decorate_with_gaps(const Pct& p, unsigned m, unsigned gap) {
  if (m == 0) throw ValidationError("indices start at 1");
  std::map<Position, unsigned> index;
  unsigned next = m;
  for (std::size_t s = 0; s < p.segment_count(); ++s) {
    if (s > 0) next += gap;
    for (const auto& w : p.segment(s)) index[w] = next++;
  }
  Position here;
  auto go = [&](auto& self, const Tree<std::string>& t) -> ConstituentTree {
    if (t.is_leaf()) return ct_leaf(t.label, index.at(here));
    std::vector<ConstituentTree> kids;
    for (unsigned i = 0; i < t.children.size(); ++i) {
      here.path.push_back(i + 1);
      kids.push_back(self(self, t.children[i]));
      here.path.pop_back();
    }
    return ct_node(t.label, std::move(kids));
  };
  return go(go, p.tree());
}

/// The constituent tree with indices m, m+1, … placed along the leaf order.
/// Only defined for single-segment trees, where rep(decorate(p, m)) = p.
inline ConstituentTree decorate(const Pct& p, unsigned m = 1) {
  if (p.segment_count() != 1)
    throw ValidationError("decorate: expected 1 segment, got " + std::to_string(p.segment_count()));
  return decorate_with_gaps(p, m, 0);
}

}  // namespace ctaparse
