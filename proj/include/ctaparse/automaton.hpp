#pragma once

// Constituent tree automata: data model, validation, κ-assignments, the
// modeling relation, and the inductive recognition relation used as the
// semantic reference for the parser.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "ctaparse/error.hpp"
#include "ctaparse/terms.hpp"
#include "ctaparse/word_tuple.hpp"

namespace ctaparse {

/// (ε, a, q)
struct NullaryTransition {
  std::string terminal;
  std::string target;

  friend bool operator==(const NullaryTransition&, const NullaryTransition&) = default;
  friend bool operator<(const NullaryTransition& a, const NullaryTransition& b) {
    return std::tie(a.terminal, a.target) < std::tie(b.terminal, b.target);
  }
};

/// (q1 ⋯ qk, a, e, q)
struct CompositeTransition {
  std::vector<std::string> children;
  std::string terminal;
  WordTuple tuple;
  std::string target;

  friend bool operator==(const CompositeTransition&, const CompositeTransition&) = default;
  friend bool operator<(const CompositeTransition& a, const CompositeTransition& b) {
    return std::tie(a.children, a.terminal, a.tuple, a.target) <
           std::tie(b.children, b.terminal, b.tuple, b.target);
  }
};

using Transition = std::variant<NullaryTransition, CompositeTransition>;

/// A = (Q, Σ, δ, q_f). Plain data; see validate_cta for the invariants.
struct Cta {
  RankedAlphabet states;
  RankedAlphabet terminals;
  std::vector<Transition> transitions;
  std::string final_state;
};

/// List of problems; empty means ok.
struct Report {
  std::vector<std::string> problems;

  bool ok() const noexcept { return problems.empty(); }
  explicit operator bool() const noexcept { return ok(); }

  std::string to_string() const {
    std::string out;
    for (const auto& p : problems) {
      if (!out.empty()) out += '\n';
      out += p;
    }
    return out;
  }
};

inline std::string describe(const Transition& t) {
  if (const auto* n = std::get_if<NullaryTransition>(&t))
    return "(e, " + n->terminal + ", " + n->target + ")";
  const auto& c = std::get<CompositeTransition>(t);
  std::string kids;
  for (const auto& q : c.children) kids += (kids.empty() ? "" : " ") + q;
  return "(" + kids + ", " + c.terminal + ", " + c.tuple.to_string() + ", " + c.target + ")";
}

inline Report validate_cta(const Cta& c) {
  Report r;
  auto bad = [&](std::string msg) { r.problems.push_back(std::move(msg)); };

  if (c.states.empty()) bad("the state alphabet is empty");
  if (c.terminals.empty()) bad("the terminal alphabet is empty");
  for (const auto& [q, sort] : c.states.symbols()) {
    if (sort == 0) bad("Q^(0) must be empty: state '" + q + "' has sort 0");
    if (c.terminals.contains(q)) bad("name '" + q + "' is both a state and a terminal");
  }
  if (c.final_state.empty()) bad("no final state declared");
  else if (!c.states.contains(c.final_state))
    bad("final state '" + c.final_state + "' is not declared");

  for (std::size_t idx = 0; idx < c.transitions.size(); ++idx) {
    const auto& t = c.transitions[idx];
    const std::string where = "transition " + std::to_string(idx + 1) + " " + describe(t) + ": ";
    if (const auto* n = std::get_if<NullaryTransition>(&t)) {
      const auto a = c.terminals.find(n->terminal);
      const auto q = c.states.find(n->target);
      if (!a) bad(where + "undeclared terminal '" + n->terminal + "'");
      else if (*a != 0) bad(where + "terminal '" + n->terminal + "' has rank " + std::to_string(*a) + ", expected 0");
      if (!q) bad(where + "undeclared state '" + n->target + "'");
      else if (*q != 1) bad(where + "target state '" + n->target + "' has sort " + std::to_string(*q) + ", expected 1");
      continue;
    }
    const auto& ct = std::get<CompositeTransition>(t);
    const std::size_t k = ct.children.size();
    if (k == 0) bad(where + "a composite transition needs at least one child state");
    const auto a = c.terminals.find(ct.terminal);
    if (!a) bad(where + "undeclared terminal '" + ct.terminal + "'");
    else if (*a != k)
      bad(where + "arity violation: terminal '" + ct.terminal + "' has rank " + std::to_string(*a) +
          " but the transition has " + std::to_string(k) + " children");
    if (ct.tuple.has_terminals()) bad(where + "word tuples of automata must not contain terminal symbols");
    if (ct.tuple.arity() != k)
      bad(where + "word tuple takes " + std::to_string(ct.tuple.arity()) + " arguments, transition has " +
          std::to_string(k) + " children");
    for (std::size_t i = 0; i < k; ++i) {
      const auto s = c.states.find(ct.children[i]);
      if (!s) bad(where + "undeclared state '" + ct.children[i] + "'");
      else if (i < ct.tuple.arity() && *s != ct.tuple.kappa()[i])
        bad(where + "child state '" + ct.children[i] + "' has sort " + std::to_string(*s) +
            " but the word tuple expects " + std::to_string(ct.tuple.kappa()[i]));
    }
    const auto q = c.states.find(ct.target);
    if (!q) bad(where + "undeclared state '" + ct.target + "'");
    else if (*q != ct.tuple.fanout())
      bad(where + "target state '" + ct.target + "' has sort " + std::to_string(*q) + " but the word tuple has " +
          std::to_string(ct.tuple.fanout()) + " components");
  }
  return r;
}

/// q_f ∈ Q^(1)
inline bool is_final_state_normalized(const Cta& c) { return c.states.find(c.final_state) == 1u; }

/// Returns the states of some cycle in the graph with an edge q → q′ per
/// composite transition (q, a, e, q′), or nothing if that graph is acyclic.
inline std::optional<std::vector<std::string>> find_monadic_cycle(const Cta& c) {
  std::map<std::string, std::set<std::string>> succ;
  for (const auto& t : c.transitions)
    if (const auto* ct = std::get_if<CompositeTransition>(&t); ct && ct->children.size() == 1)
      succ[ct->children.front()].insert(ct->target);

  enum class Mark { fresh, active, done };
  std::map<std::string, Mark> mark;
  std::vector<std::string> stack;
  std::optional<std::vector<std::string>> cycle;

  std::function<void(const std::string&)> dfs = [&](const std::string& q) {
    mark[q] = Mark::active;
    stack.push_back(q);
    if (auto it = succ.find(q); it != succ.end()) {
      for (const auto& next : it->second) {
        if (cycle) break;
        const Mark m = mark.count(next) ? mark[next] : Mark::fresh;
        if (m == Mark::active) {
          auto from = std::find(stack.begin(), stack.end(), next);
          cycle = std::vector<std::string>(from, stack.end());
        } else if (m == Mark::fresh) {
          dfs(next);
        }
      }
    }
    stack.pop_back();
    mark[q] = Mark::done;
  };
  for (const auto& [q, _] : succ) {
    if (cycle) break;
    if (!mark.count(q)) dfs(q);
  }
  return cycle;
}

inline bool has_monadic_cycle(const Cta& c) { return find_monadic_cycle(c).has_value(); }

/// Closed interval [lo, hi] of positive integers.
struct Interval {
  unsigned lo = 1;
  unsigned hi = 1;

  /// I ↷ I′
  bool adjacent_to(const Interval& next) const noexcept { return hi + 1 == next.lo; }
  /// I < I′
  bool before(const Interval& next) const noexcept { return hi < next.lo; }
  bool overlaps(const Interval& o) const noexcept { return lo <= o.hi && o.lo <= hi; }

  auto operator<=>(const Interval&) const = default;
};

/// φ: 𝕏_κ → 𝕀
using KappaAssignment = std::map<Variable, Interval>;

/// Images of distinct variables are pairwise disjoint.
inline bool is_kappa_assignment(const KappaAssignment& phi) {
  std::vector<Interval> images;
  for (const auto& [_, iv] : phi) {
    if (iv.lo == 0 || iv.hi < iv.lo) return false;
    images.push_back(iv);
  }
  std::sort(images.begin(), images.end());
  for (std::size_t i = 1; i < images.size(); ++i)
    if (images[i - 1].overlaps(images[i])) return false;
  return true;
}

/// φ ⊨ e: neighbours inside a component are adjacent (↷), neighbours
/// across a comma are ordered (<). Throws if φ is not defined exactly on 𝕏_κ.
inline bool models(const KappaAssignment& phi, const WordTuple& e) {
  const auto flat = flatten(e);
  if (phi.size() != flat.size())
    throw ValidationError("assignment domain does not match the variables of " + e.to_string());
  const Interval* prev = nullptr;
  for (const auto& entry : flat) {
    auto it = phi.find(entry.var);
    if (it == phi.end())
      throw ValidationError("assignment is undefined on " + entry.var.to_string());
    const Interval& cur = it->second;
    if (prev) {
      if (entry.link == Link::adjacent && !prev->adjacent_to(cur)) return false;
      if (entry.link == Link::gap && !prev->before(cur)) return false;
    }
    prev = &cur;
  }
  return true;
}

/// Label of a constituent tree node: leaves carry an index, inner nodes do not.
struct CtLabel {
  std::string symbol;
  std::optional<unsigned> index;

  friend bool operator==(const CtLabel&, const CtLabel&) = default;
  friend bool operator<(const CtLabel& a, const CtLabel& b) {
    return std::tie(a.symbol, a.index) < std::tie(b.symbol, b.index);
  }
};

using ConstituentTree = Tree<CtLabel>;

/// a⟨n⟩
inline ConstituentTree ct_leaf(std::string symbol, unsigned index) {
  return ConstituentTree(CtLabel{std::move(symbol), index});
}

/// a(ξ1, …, ξk)
inline ConstituentTree ct_node(std::string symbol, std::vector<ConstituentTree> children) {
  return ConstituentTree(CtLabel{std::move(symbol), std::nullopt}, std::move(children));
}

/// Checks the constituent tree invariants: indexed iff leaf, indices
/// positive and pairwise distinct, and (when given) ranks match Σ.
inline std::optional<std::string> check_constituent_tree(const ConstituentTree& xi,
                                                         const RankedAlphabet* sigma = nullptr) {
  std::optional<std::string> problem;
  std::set<unsigned> seen;
  for_each_position(xi, [&](const Position& w, const ConstituentTree& node) {
    if (problem) return;
    const auto& l = node.label;
    if (node.is_leaf() != l.index.has_value()) {
      problem = "node " + w.to_string() + (node.is_leaf() ? " is a leaf without index" : " is inner but indexed");
      return;
    }
    if (l.index) {
      if (*l.index == 0) problem = "index 0 at " + w.to_string();
      else if (!seen.insert(*l.index).second)
        problem = "index " + std::to_string(*l.index) + " occurs twice";
    }
    if (!problem && sigma) {
      const auto r = sigma->find(l.symbol);
      if (!r) problem = "unknown symbol '" + l.symbol + "' at " + w.to_string();
      else if (*r != node.children.size())
        problem = "symbol '" + l.symbol + "' at " + w.to_string() + " has rank " + std::to_string(*r) +
                  " but " + std::to_string(node.children.size()) + " children";
    }
  });
  return problem;
}

/// (ξ)_Σ
inline Tree<std::string> strip_indices(const ConstituentTree& xi) {
  return map_labels(xi, [](const CtLabel& l) { return l.symbol; });
}

/// Sorted leaf indices of ξ.
inline std::vector<unsigned> indices_of(const ConstituentTree& xi) {
  std::vector<unsigned> out;
  for_each_position(xi, [&](const Position&, const ConstituentTree& n) {
    if (n.label.index) out.push_back(*n.label.index);
  });
  std::sort(out.begin(), out.end());
  return out;
}

/// Indexed symbols ordered by index; a comma wherever consecutive indices
/// leave a gap.
inline StringTuple yield(const ConstituentTree& xi) {
  std::vector<std::pair<unsigned, std::string>> indexed;
  for_each_position(xi, [&](const Position&, const ConstituentTree& n) {
    if (n.label.index) indexed.emplace_back(*n.label.index, n.label.symbol);
  });
  std::sort(indexed.begin(), indexed.end());
  StringTuple out;
  for (std::size_t i = 0; i < indexed.size(); ++i) {
    if (i == 0 || indexed[i - 1].first + 1 != indexed[i].first) out.emplace_back();
    out.back().push_back(indexed[i].second);
  }
  return out;
}

/// Node of a run: (q, e) inside, bare q at leaves.
struct RunLabel {
  std::string state;
  std::optional<WordTuple> tuple;

  friend bool operator==(const RunLabel&, const RunLabel&) = default;
  friend bool operator<(const RunLabel& a, const RunLabel& b) {
    return std::tie(a.state, a.tuple) < std::tie(b.state, b.tuple);
  }
};

using Run = Tree<RunLabel>;

inline Run run_leaf(std::string state) { return Run(RunLabel{std::move(state), std::nullopt}); }
inline Run run_node(std::string state, WordTuple e, std::vector<Run> children) {
  return Run(RunLabel{std::move(state), std::move(e)}, std::move(children));
}

namespace detail {

/// δ as sets for membership lookups.
struct TransitionIndex {
  std::set<NullaryTransition> nullary;
  std::set<CompositeTransition> composite;
  std::map<std::pair<std::string, std::size_t>, std::vector<const CompositeTransition*>> by_terminal;

  explicit TransitionIndex(const Cta& c) {
    for (const auto& t : c.transitions) {
      if (const auto* n = std::get_if<NullaryTransition>(&t)) nullary.insert(*n);
      else composite.insert(std::get<CompositeTransition>(t));
    }
    for (const auto& ct : composite) by_terminal[{ct.terminal, ct.children.size()}].push_back(&ct);
  }
};

/// Inductive step of Θ_A: given the children's interval tuples, returns the
/// parent's tuple if φ is a κ-assignment that models e.
inline std::optional<std::vector<Interval>> combine_intervals(const WordTuple& e,
                                                              const std::vector<std::vector<Interval>>& child_j) {
  KappaAssignment phi;
  for (std::size_t i = 0; i < child_j.size(); ++i)
    for (std::size_t j = 0; j < child_j[i].size(); ++j)
      phi[Variable{unsigned(i + 1), unsigned(j + 1)}] = child_j[i][j];
  if (!is_kappa_assignment(phi) || !models(phi, e)) return std::nullopt;
  std::vector<Interval> out;
  for (const auto& comp : e.components()) {
    Interval u{~0u, 0};
    for (const auto& s : comp) {
      const Interval& iv = phi.at(std::get<Variable>(s));
      u.lo = std::min(u.lo, iv.lo);
      u.hi = std::max(u.hi, iv.hi);
    }
    out.push_back(u);
  }
  return out;
}

inline std::optional<std::vector<Interval>> membership(const TransitionIndex& delta, const Cta& c,
                                                       const ConstituentTree& xi, const Run& rho) {
  if (xi.children.size() != rho.children.size())
    throw Error("shape mismatch: constituent tree node '" + xi.label.symbol + "' has " +
                std::to_string(xi.children.size()) + " children, run node has " +
                std::to_string(rho.children.size()));
  if (xi.is_leaf()) {
    if (rho.label.tuple) throw Error("shape mismatch: run leaf carries a word tuple");
    if (!xi.label.index) throw Error("constituent tree leaf without index");
    if (!delta.nullary.count(NullaryTransition{xi.label.symbol, rho.label.state})) return std::nullopt;
    return std::vector<Interval>{{*xi.label.index, *xi.label.index}};
  }
  if (!rho.label.tuple) throw Error("shape mismatch: inner run node without word tuple");
  std::vector<std::vector<Interval>> child_j;
  std::vector<std::string> child_states;
  for (std::size_t i = 0; i < xi.children.size(); ++i) {
    auto j = membership(delta, c, xi.children[i], rho.children[i]);
    if (!j) return std::nullopt;
    child_j.push_back(std::move(*j));
    child_states.push_back(rho.children[i].label.state);
  }
  const CompositeTransition needed{child_states, xi.label.symbol, *rho.label.tuple, rho.label.state};
  if (!delta.composite.count(needed)) return std::nullopt;
  return combine_intervals(*rho.label.tuple, child_j);
}

}  // namespace detail

/// Returns the J with (ξ, ρ, J) ∈ Θ_A, or nothing if (ξ, ρ) ∉ CR_A.
/// Throws on shape mismatch or an invalid constituent tree.
inline std::optional<std::vector<Interval>> check_membership(const Cta& c, const ConstituentTree& xi,
                                                             const Run& rho) {
  if (auto problem = check_constituent_tree(xi)) throw ValidationError(*problem);
  const detail::TransitionIndex delta(c);
  return detail::membership(delta, c, xi, rho);
}

/// All runs ρ with (ξ, ρ) ∈ CR_A, sorted.
inline std::vector<Run> recognize_tree(const Cta& c, const ConstituentTree& xi) {
  if (auto problem = check_constituent_tree(xi)) throw ValidationError(*problem);
  const detail::TransitionIndex delta(c);

  using Found = std::vector<std::pair<Run, std::vector<Interval>>>;
  std::function<Found(const ConstituentTree&)> go = [&](const ConstituentTree& node) -> Found {
    Found out;
    if (node.is_leaf()) {
      const unsigned i = *node.label.index;
      for (const auto& n : delta.nullary)
        if (n.terminal == node.label.symbol) out.emplace_back(run_leaf(n.target), std::vector<Interval>{{i, i}});
      return out;
    }
    std::vector<Found> kids;
    for (const auto& ch : node.children) {
      kids.push_back(go(ch));
      if (kids.back().empty()) return out;
    }
    auto it = delta.by_terminal.find({node.label.symbol, node.children.size()});
    if (it == delta.by_terminal.end()) return out;
    for (const CompositeTransition* t : it->second) {
      // Cartesian product over the children's runs whose root state fits t.
      std::vector<std::vector<std::size_t>> options(kids.size());
      bool feasible = true;
      for (std::size_t i = 0; i < kids.size() && feasible; ++i) {
        for (std::size_t r = 0; r < kids[i].size(); ++r)
          if (kids[i][r].first.label.state == t->children[i]) options[i].push_back(r);
        feasible = !options[i].empty();
      }
      if (!feasible) continue;
      std::vector<std::size_t> pick(kids.size(), 0);
      while (true) {
        std::vector<std::vector<Interval>> child_j;
        std::vector<Run> child_runs;
        for (std::size_t i = 0; i < kids.size(); ++i) {
          const auto& [run, j] = kids[i][options[i][pick[i]]];
          child_runs.push_back(run);
          child_j.push_back(j);
        }
        if (auto j = detail::combine_intervals(t->tuple, child_j))
          out.emplace_back(run_node(t->target, t->tuple, std::move(child_runs)), std::move(*j));
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == options[i].size()) pick[i++] = 0;
        if (i == pick.size()) break;
      }
    }
    return out;
  };

  std::set<Run> runs;
  for (auto& [run, _] : go(xi)) runs.insert(std::move(run));
  return {runs.begin(), runs.end()};
}

/// ξ ∈ L_ind(A)
inline bool in_language(const Cta& c, const ConstituentTree& xi) {
  for (const auto& rho : recognize_tree(c, xi))
    if (rho.label.state == c.final_state) return true;
  return false;
}

}  // namespace ctaparse
