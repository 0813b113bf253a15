#pragma once

// Constituency parsing for final-state-normalized, monadic-cycle-free CTA.
//
// Phase one (deduce) builds a chart of items (state, span tuple) with
// back-hyperedges, bottom-up over the input. Phase two (value_computation)
// evaluates every item in the set-lifted constituent tree algebra in an
// order where children come before parents.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ctaparse/algebras.hpp"
#include "ctaparse/automaton.hpp"
#include "ctaparse/construction.hpp"
#include "ctaparse/error.hpp"
#include "ctaparse/word_tuple.hpp"

namespace ctaparse {

/// Half-open token range [start, end), 0-based.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const noexcept { return end - start; }
  auto operator<=>(const Span&) const = default;
};

/// (state, (s1, …, sn)); spans are ordered with end_m ≤ start_{m+1}.
struct Item {
  std::size_t state = 0;  // index into Chart::state_names()
  std::vector<Span> spans;

  std::size_t total_length() const noexcept {
    std::size_t n = 0;
    for (const auto& s : spans) n += s.length();
    return n;
  }
  auto operator<=>(const Item&) const = default;
};

/// One way of deriving an item: a rule and the items filling its slots.
struct RuleInstance {
  RuleId rule = 0;
  std::vector<std::size_t> children;

  auto operator<=>(const RuleInstance&) const = default;
};

struct Applicability {
  enum class Kind { ok, not_final_state_normalized, monadic_cycle };
  Kind kind = Kind::ok;
  std::vector<std::string> states;

  bool ok() const noexcept { return kind == Kind::ok; }

  std::string message() const {
    std::string list;
    for (const auto& q : states) list += (list.empty() ? "" : " ") + q;
    switch (kind) {
      case Kind::ok: return "ok";
      case Kind::not_final_state_normalized:
        return "NotFinalStateNormalized: final state " + list + " does not have sort 1";
      case Kind::monadic_cycle: return "MonadicCycle: unary transitions cycle through " + list;
    }
    return {};
  }
};

inline Applicability check_applicability(const Cta& c) {
  if (!is_final_state_normalized(c))
    return {Applicability::Kind::not_final_state_normalized, {c.final_state}};
  if (auto cycle = find_monadic_cycle(c)) return {Applicability::Kind::monadic_cycle, *cycle};
  return {};
}

inline void require_applicable(const Cta& c) {
  const auto a = check_applicability(c);
  if (a.ok()) return;
  throw ApplicabilityError(a.kind == Applicability::Kind::monadic_cycle
                               ? ApplicabilityError::Kind::monadic_cycle
                               : ApplicabilityError::Kind::not_final_state_normalized,
                           a.states, a.message());
}

class Chart;
inline Chart deduce(const WrtgLm& w, const Word& u);

class Chart {
 public:
  const std::vector<std::string>& state_names() const noexcept { return states_; }
  const std::vector<Item>& items() const noexcept { return items_; }
  const std::vector<std::vector<RuleInstance>>& instances() const noexcept { return instances_; }
  const std::vector<RuleInstance>& instances_of(std::size_t item) const { return instances_.at(item); }
  std::optional<std::size_t> goal() const noexcept { return goal_; }
  std::size_t input_length() const noexcept { return length_; }

  std::optional<std::size_t> find(const Item& item) const {
    auto it = lookup_.find(item);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::size_t> state_index(std::string_view name) const {
    auto it = std::find(states_.begin(), states_.end(), name);
    if (it == states_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - states_.begin());
  }

 private:
  friend Chart deduce(const WrtgLm&, const Word&);

  std::vector<std::string> states_;
  std::vector<Item> items_;
  std::vector<std::vector<RuleInstance>> instances_;
  std::map<Item, std::size_t> lookup_;
  std::optional<std::size_t> goal_;
  std::size_t length_ = 0;
};

namespace detail {

struct CompiledRule {
  RuleId id = 0;
  std::size_t lhs = 0;
  std::vector<std::size_t> rhs;
  std::vector<FlatEntry> flat;
  unsigned fanout = 1;
};

}  // namespace detail

/// The parent spans for rule r with children `kids`, or nothing if the
/// children violate the adjacency (within a component) or order (across a
/// comma) constraints of r's word tuple.
inline std::optional<std::vector<Span>> compose_spans(const GammaSymbol& gamma,
                                                      const std::vector<const Item*>& kids) {
  if (gamma.is_leaf()) return std::nullopt;
  const auto flat = flatten(*gamma.tuple);
  std::vector<Span> out(gamma.tuple->fanout());
  const Span* prev = nullptr;
  for (const auto& entry : flat) {
    const Item* kid = kids.at(entry.var.child - 1);
    const Span& s = kid->spans.at(entry.var.component - 1);
    if (prev) {
      if (entry.link == Link::adjacent && prev->end != s.start) return std::nullopt;
      if (entry.link == Link::gap && prev->end > s.start) return std::nullopt;
    }
    if (prev == nullptr || entry.link != Link::adjacent) out[entry.component].start = s.start;
    out[entry.component].end = s.end;
    prev = &s;
  }
  return out;
}

/// Least chart closed under the axioms (one item per nullary rule matching
/// a token) and composition of items along each rule's word tuple.
/// Throws on tokens that are not rank-0 terminals.
inline Chart deduce(const WrtgLm& w, const Word& u) {
  const ARtg& g = w.rtg;
  Chart chart;
  chart.length_ = u.size();

  std::map<std::string, std::size_t, std::less<>> state_id;
  for (const auto& [q, _] : g.nonterminals().symbols()) {
    state_id.emplace(q, chart.states_.size());
    chart.states_.push_back(q);
  }
  const std::size_t nstates = chart.states_.size();

  std::map<std::string, std::vector<RuleId>, std::less<>> lexical;
  std::vector<detail::CompiledRule> compiled;
  // triggers[q] = (compiled rule, slot) pairs where q fills the slot
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> triggers(nstates);
  for (RuleId id = 0; id < g.rules().size(); ++id) {
    const auto& r = g.rule(id);
    if (r.gamma.is_leaf()) {
      lexical[r.gamma.terminal].push_back(id);
      continue;
    }
    detail::CompiledRule cr{id, state_id.at(r.lhs), {}, flatten(*r.gamma.tuple), r.gamma.tuple->fanout()};
    for (const auto& q : r.rhs) cr.rhs.push_back(state_id.at(q));
    for (std::size_t slot = 0; slot < cr.rhs.size(); ++slot)
      triggers[cr.rhs[slot]].emplace_back(compiled.size(), slot);
    compiled.push_back(std::move(cr));
  }

  for (std::size_t i = 0; i < u.size(); ++i)
    if (w.sigma.find(u[i]) != 0u)
      throw ValidationError("unknown token '" + u[i] + "' at position " + std::to_string(i + 1) +
                            ": not a rank-0 terminal");

  std::vector<std::set<RuleInstance>> found;
  std::deque<std::size_t> agenda;
  auto add = [&](Item item, RuleInstance inst) {
    auto [it, inserted] = chart.lookup_.emplace(item, chart.items_.size());
    if (inserted) {
      chart.items_.push_back(std::move(item));
      found.emplace_back();
      agenda.push_back(it->second);
    }
    found[it->second].insert(std::move(inst));
  };

  for (std::size_t i = 0; i < u.size(); ++i) {
    auto lex = lexical.find(u[i]);
    if (lex == lexical.end()) continue;
    for (RuleId id : lex->second) add(Item{state_id.at(g.rule(id).lhs), {{i, i + 1}}}, RuleInstance{id, {}});
  }

  // by_start[q][s]: processed items of state q whose first span starts at s
  std::vector<std::vector<std::vector<std::size_t>>> by_start(nstates, std::vector<std::vector<std::size_t>>(u.size() + 1));

  std::vector<std::optional<std::size_t>> chosen;
  std::vector<Span> parent;

  while (!agenda.empty()) {
    const std::size_t x = agenda.front();
    agenda.pop_front();
    by_start[chart.items_[x].state][chart.items_[x].spans.front().start].push_back(x);

    for (const auto& [ri, slot] : triggers[chart.items_[x].state]) {
      const auto& cr = compiled[ri];
      chosen.assign(cr.rhs.size(), std::nullopt);
      chosen[slot] = x;
      parent.assign(cr.fanout, Span{});

      // Walks the flattened tuple, choosing a child item at the first
      // variable of each child and checking the links between spans.
      std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t idx, std::size_t prev_end) {
        if (idx == cr.flat.size()) {
          RuleInstance inst{cr.id, {}};
          for (const auto& c : chosen) inst.children.push_back(*c);
          add(Item{cr.lhs, parent}, std::move(inst));
          return;
        }
        const FlatEntry& entry = cr.flat[idx];
        const std::size_t child = entry.var.child - 1;
        const std::size_t comp = entry.var.component - 1;

        auto place = [&](const Span& s) {
          if (entry.link == Link::adjacent && s.start != prev_end) return;
          if (entry.link == Link::gap && s.start < prev_end) return;
          const Span saved = parent[entry.component];
          if (entry.link != Link::adjacent) parent[entry.component].start = s.start;
          parent[entry.component].end = s.end;
          walk(idx + 1, s.end);
          parent[entry.component] = saved;
        };

        if (chosen[child]) {
          place(chart.items_[*chosen[child]].spans[comp]);
          return;
        }
        // comp == 0 by monotonicity: the first occurrence of child i is x_i^1.
        const std::size_t q = cr.rhs[child];
        std::size_t lo = 0, hi = u.size();
        if (entry.link == Link::adjacent) lo = hi = prev_end;
        else if (entry.link == Link::gap) lo = prev_end;
        for (std::size_t s = lo; s <= hi && s < u.size(); ++s) {
          const auto& bucket = by_start[q][s];
          for (std::size_t b = 0; b < bucket.size(); ++b) {
            chosen[child] = bucket[b];
            place(chart.items_[bucket[b]].spans[0]);
            chosen[child].reset();
          }
        }
      };
      walk(0, 0);
    }
  }

  chart.instances_.resize(chart.items_.size());
  for (std::size_t i = 0; i < found.size(); ++i)
    chart.instances_[i].assign(found[i].begin(), found[i].end());

  if (auto f = state_id.find(g.initial()); f != state_id.end() && !u.empty())
    chart.goal_ = chart.find(Item{f->second, {{0, u.size()}}});
  return chart;
}

/// Items from which the goal is reachable through back-hyperedges.
inline std::vector<bool> useful_items(const Chart& chart) {
  std::vector<bool> useful(chart.items().size(), false);
  if (!chart.goal()) return useful;
  std::vector<std::size_t> stack{*chart.goal()};
  useful[*chart.goal()] = true;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (const auto& inst : chart.instances_of(i))
      for (std::size_t c : inst.children)
        if (!useful[c]) useful[c] = true, stack.push_back(c);
  }
  return useful;
}

namespace detail {

/// Rank of each state in a topological order of the unary rule graph
/// (child state before parent state). Throws on a cycle.
inline std::vector<std::size_t> unary_rank(const Chart& chart, const ARtg& g) {
  const auto& names = chart.state_names();
  const std::size_t n = names.size();
  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<std::size_t> indeg(n, 0);
  for (const auto& r : g.rules()) {
    if (r.rhs.size() != 1) continue;
    const std::size_t from = *chart.state_index(r.rhs.front());
    const std::size_t to = *chart.state_index(r.lhs);
    succ[from].push_back(to);
    ++indeg[to];
  }
  std::vector<std::size_t> rank(n, 0), queue;
  for (std::size_t q = 0; q < n; ++q)
    if (indeg[q] == 0) queue.push_back(q);
  std::size_t next = 0;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const std::size_t q = queue[h];
    rank[q] = next++;
    for (std::size_t t : succ[q])
      if (--indeg[t] == 0) queue.push_back(t);
  }
  if (next != n) throw ApplicabilityError(ApplicabilityError::Kind::monadic_cycle, {}, "MonadicCycle: unary rules form a cycle");
  return rank;
}

/// Useful items sorted by total span length, unary-graph rank within ties.
inline std::vector<std::size_t> evaluation_order(const Chart& chart, const ARtg& g) {
  const auto rank = unary_rank(chart, g);
  const auto useful = useful_items(chart);
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < useful.size(); ++i)
    if (useful[i]) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ia = chart.items()[a];
    const auto& ib = chart.items()[b];
    return std::tuple(ia.total_length(), rank[ia.state], a) < std::tuple(ib.total_length(), rank[ib.state], b);
  });
  return order;
}

}  // namespace detail

struct ParseOptions {
  /// Abort once a set would hold more trees than this; nullopt disables the cap.
  std::optional<std::size_t> result_cap = 10000;
};

/// V(item) = ⊎ over its instances of ψ(wt(rule))(V(children)), computed on
/// the items that reach the goal; returns V(goal).
///
/// Every such item's value injects into the goal's value, so the cap on
/// intermediate sets is exactly a cap on the result.
inline SetValue value_computation(const Chart& chart, const WrtgLm& w, const ParseOptions& options = {}) {
  if (!chart.goal()) return SetValue();
  const auto order = detail::evaluation_order(chart, w.rtg);
  std::vector<std::optional<SetValue>> value(chart.items().size());
  std::vector<SetValue> args;
  for (std::size_t i : order) {
    SetValue v;
    for (const auto& inst : chart.instances_of(i)) {
      args.clear();
      for (std::size_t c : inst.children) {
        if (!value[c]) throw InternalError("value computation reached an item before its children");
        args.push_back(*value[c]);
      }
      v = mm_add(v, mm_apply(w.wt(inst.rule), args));
      if (v.is_bottom()) throw InternalError("value computation produced bottom");
      if (options.result_cap && v.size() > *options.result_cap)
        throw ResultTooLarge(*options.result_cap, "the parse result exceeds the cap of " +
                                                      std::to_string(*options.result_cap) +
                                                      " trees; use count mode or raise the cap");
    }
    value[i] = std::move(v);
  }
  return *value[*chart.goal()];
}

/// Number of derivations of the goal (ASTs with yield u), without building
/// any tree.
inline boost::multiprecision::cpp_int count_derivations(const Chart& chart, const WrtgLm& w) {
  using boost::multiprecision::cpp_int;
  if (!chart.goal()) return 0;
  const auto order = detail::evaluation_order(chart, w.rtg);
  std::vector<cpp_int> count(chart.items().size(), 0);
  for (std::size_t i : order) {
    cpp_int total = 0;
    for (const auto& inst : chart.instances_of(i)) {
      cpp_int prod = 1;
      for (std::size_t c : inst.children) prod *= count[c];
      total += prod;
    }
    count[i] = total;
  }
  return count[*chart.goal()];
}

/// {rep(ξ) | ξ ∈ L_ind(A), yield(ξ) = (u)}
inline std::set<Pct> parse(const Cta& c, const Word& u, const ParseOptions& options = {}) {
  require_applicable(c);
  const auto w = build_wrtg_lm(c);
  const auto chart = deduce(w, u);
  auto v = value_computation(chart, w, options);
  for (const auto& p : v.trees())
    if (p.segment_count() != 1) throw InternalError("parse produced a tree with several segments");
  return v.trees();
}

inline bool recognize(const Cta& c, const Word& u) {
  require_applicable(c);
  return deduce(build_wrtg_lm(c), u).goal().has_value();
}

/// Derivation count for u; equals |parse(c, u)| whenever distinct ASTs
/// evaluate to distinct trees.
inline boost::multiprecision::cpp_int count_parses(const Cta& c, const Word& u) {
  require_applicable(c);
  const auto w = build_wrtg_lm(c);
  return count_derivations(deduce(w, u), w);
}

}  // namespace ctaparse
