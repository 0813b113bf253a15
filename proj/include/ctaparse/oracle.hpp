#pragma once

// Brute-force reference: enumerate ASTs by node count and evaluate each one
// in both algebras. Nothing here shares the parser's span logic.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ctaparse/algebras.hpp"
#include "ctaparse/automaton.hpp"
#include "ctaparse/construction.hpp"
#include "ctaparse/error.hpp"
#include "ctaparse/terms.hpp"

namespace ctaparse {

struct EnumerationBound {
  std::size_t max_nodes = 1;

  EnumerationBound() = default;
  explicit EnumerationBound(std::size_t n) : max_nodes(n) {
    if (n == 0) throw ValidationError("enumeration bound must be at least 1");
  }
};

/// Every AST of g rooted at `start` with at most bound.max_nodes nodes,
/// each exactly once, by increasing size.
template <SignatureSymbol Gamma>
std::vector<Ast> enumerate_asts(const Rtg<Gamma>& g, const std::string& start, EnumerationBound bound) {
  if (!g.nonterminals().contains(start)) throw ValidationError("unknown nonterminal '" + start + "'");
  // exactly[(A, s)]: ASTs for A with exactly s nodes
  std::map<std::pair<std::string, std::size_t>, std::vector<Ast>> exactly;

  auto of_size = [&](auto& self, const std::string& nt, std::size_t size) -> const std::vector<Ast>& {
    const auto key = std::make_pair(nt, size);
    if (auto it = exactly.find(key); it != exactly.end()) return it->second;
    std::vector<Ast> out;
    for (RuleId id : g.rules_for(nt)) {
      const auto& rhs = g.rule(id).rhs;
      if (rhs.empty()) {
        if (size == 1) out.emplace_back(id);
        continue;
      }
      if (size < 1 + rhs.size()) continue;
      std::vector<Ast> kids;
      // Child i takes n nodes, leaving at least one for each later child.
      auto fill = [&](auto& fill_self, std::size_t i, std::size_t budget) -> void {
        if (i == rhs.size()) {
          if (budget == 0) out.emplace_back(id, kids);
          return;
        }
        const std::size_t later = rhs.size() - i - 1;
        for (std::size_t n = 1; n + later <= budget; ++n) {
          if (i + 1 == rhs.size() && n != budget) continue;
          for (const auto& sub : self(self, rhs[i], n)) {
            kids.push_back(sub);
            fill_self(fill_self, i + 1, budget - n);
            kids.pop_back();
          }
        }
      };
      fill(fill, 0, size - 1);
    }
    return exactly.emplace(key, std::move(out)).first->second;
  };

  std::vector<Ast> all;
  for (std::size_t s = 1; s <= bound.max_nodes; ++s) {
    const auto& batch = of_size(of_size, start, s);
    all.insert(all.end(), batch.begin(), batch.end());
  }
  return all;
}

/// Length of the longest path in the graph of unary transitions q' → q.
/// Throws ApplicabilityError when that graph has a cycle.
inline std::size_t longest_unary_chain(const Cta& c) {
  if (auto cycle = find_monadic_cycle(c))
    throw ApplicabilityError(ApplicabilityError::Kind::monadic_cycle, *cycle,
                             "MonadicCycle: no finite enumeration bound exists");
  std::map<std::string, std::vector<std::string>> parents;
  for (const auto& t : c.transitions)
    if (const auto* ct = std::get_if<CompositeTransition>(&t); ct && ct->children.size() == 1)
      parents[ct->children.front()].push_back(ct->target);
  std::map<std::string, std::size_t> memo;
  auto depth = [&](auto& self, const std::string& q) -> std::size_t {
    if (auto it = memo.find(q); it != memo.end()) return it->second;
    std::size_t best = 0;
    for (const auto& p : parents[q]) best = std::max(best, 1 + self(self, p));
    return memo[q] = best;
  };
  std::size_t h = 0;
  for (const auto& [q, _] : c.states.symbols()) h = std::max(h, depth(depth, q));
  return h;
}

/// A node count that every AST with a yield of `length` tokens respects:
/// at most 2·length − 1 nodes of rank ≠ 1, each under at most h unary ones.
inline EnumerationBound sufficient_bound(const Cta& c, std::size_t length) {
  const std::size_t h = longest_unary_chain(c);
  return EnumerationBound((2 * std::max<std::size_t>(length, 1) - 1) * (1 + h));
}

/// {(d)_𝒞𝒯 | d an AST from q_f within the bound, (d)_Y = (u)}
/// With a monadic cycle no bound is complete; a warning is recorded.
inline std::set<Pct> oracle_parse(const Cta& c, const Word& u, EnumerationBound bound,
                                  std::vector<std::string>* warnings = nullptr) {
  const ARtg g = build_a_rtg(c, warnings);
  if (warnings && has_monadic_cycle(c))
    warnings->push_back("monadic cycle: the result is incomplete beyond " + std::to_string(bound.max_nodes) +
                        " nodes");
  const StringTuple target{u};
  std::set<Pct> out;
  for (const auto& d : enumerate_asts(g, g.initial(), bound)) {
    const auto t = project_to_gamma(g, d);
    if (y_eval(t) == target) out.insert(ct_eval(t));
  }
  return out;
}

/// Groups the trees of every AST from q_f within the bound by yield.
/// Yields with more than one component are skipped.
inline std::map<Word, std::set<Pct>> oracle_yield_map(const Cta& c, EnumerationBound bound) {
  const ARtg g = build_a_rtg(c);
  std::map<Word, std::set<Pct>> out;
  for (const auto& d : enumerate_asts(g, g.initial(), bound)) {
    const auto t = project_to_gamma(g, d);
    auto y = y_eval(t);
    if (y.size() != 1) continue;
    out[std::move(y.front())].insert(ct_eval(t));
  }
  return out;
}

/// Yields of all ASTs from q_f within the bound.
inline std::set<StringTuple> oracle_language(const Cta& c, EnumerationBound bound) {
  const ARtg g = build_a_rtg(c);
  std::set<StringTuple> out;
  for (const auto& d : enumerate_asts(g, g.initial(), bound)) out.insert(y_eval(project_to_gamma(g, d)));
  return out;
}

}  // namespace ctaparse
