#include <string>
#include <vector>

#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace ctaparse;
using namespace testing_support;

namespace {

ConstituentTree shift(const ConstituentTree& xi, unsigned by) {
  return map_labels(xi, [&](const CtLabel& l) {
    CtLabel out = l;
    if (out.index) *out.index += by;
    return out;
  });
}

RuleId rule_id(const ARtg& g, const std::string& lhs, GammaSymbol gamma, std::vector<std::string> rhs) {
  const auto id = g.find_rule({lhs, std::move(gamma), std::move(rhs)});
  REQUIRE(id);
  return *id;
}

}  // namespace

TEST_CASE("grammar of the a^n b^n c^n automaton") {
  const auto g = build_a_rtg(abc());
  CHECK(g.rules().size() == 10);
  CHECK(g.initial() == "q_f");
  CHECK(g.nonterminals() == abc().states);
  CHECK(g.rules_for("q").size() == 3);
  CHECK(g.rules_for("q_f").size() == 2);
  for (const auto& t : abc().transitions) {
    const auto r = rule_of(t);
    CHECK(g.find_rule(r));
    CHECK(transition_of(r) == t);
  }
  for (const auto& gamma : g.terminals()) CHECK(in_lambda(abc(), gamma));
}

TEST_CASE("grammar of a one-transition automaton") {
  Cta c;
  c.terminals = RankedAlphabet{{"a", 0}};
  c.states = RankedAlphabet{{"q_f", 1}};
  c.final_state = "q_f";
  c.transitions = {NullaryTransition{"a", "q_f"}};
  const auto g = build_a_rtg(c);
  REQUIRE(g.rules().size() == 1);
  CHECK(g.rule(0).lhs == "q_f");
  CHECK(g.rule(0).gamma == GammaSymbol::leaf("a"));
  CHECK(g.rule(0).rhs.empty());
}

TEST_CASE("duplicate transitions collapse with a warning") {
  auto c = abc();
  c.transitions.push_back(NullaryTransition{"a", "q_a"});
  std::vector<std::string> warnings;
  const auto g = build_a_rtg(c, &warnings);
  CHECK(g.rules().size() == 10);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("duplicate") != std::string::npos);

  c.final_state = "nowhere";
  CHECK_THROWS_AS(build_a_rtg(c), ValidationError);
}

TEST_CASE("weight mapping of the language model") {
  const auto w = build_wrtg_lm(abc());
  for (RuleId r = 0; r < w.rtg.rules().size(); ++r) CHECK(w.wt(r) == w.rtg.rule(r).gamma);
  CHECK(w.sigma == abc().terminals);
}

TEST_CASE("membership in the finite signature") {
  const auto c = abc();
  CHECK(in_lambda(c, GammaSymbol::leaf("a")));
  CHECK_FALSE(in_lambda(c, GammaSymbol::leaf("d")));
  CHECK_FALSE(in_lambda(c, GammaSymbol::leaf("z")));
  CHECK(in_lambda(c, GammaSymbol::pair("e", pair_split())));
  CHECK_FALSE(in_lambda(c, GammaSymbol::pair("d", pair_split())));
  CHECK(in_lambda(c, GammaSymbol::pair("d", root_left())));
  // Sort 4 is not the sort of any state.
  CHECK_FALSE(in_lambda(c, GammaSymbol::pair("e", tuple({1, 3}, "[x1.1 , x2.1 , x2.2 , x2.3]"))));
}

TEST_CASE("psi of the worked pair") {
  const auto c = abc();
  const auto g = build_a_rtg(c);
  const RuleId a = rule_id(g, "q_a", GammaSymbol::leaf("a"), {});
  const RuleId b = rule_id(g, "q_b", GammaSymbol::leaf("b"), {});
  const RuleId cc = rule_id(g, "q_c", GammaSymbol::leaf("c"), {});
  const RuleId root = rule_id(g, "q_f", GammaSymbol::pair("d", root_left()), {"q_l", "q", "q_c"});
  const RuleId chain = rule_id(g, "q", GammaSymbol::pair("d", chain_right()), {"q_a", "q", "q_r"});
  const RuleId bottom = rule_id(g, "q", GammaSymbol::pair("d", base()), {"q_a", "q_b", "q_c"});
  const RuleId left = rule_id(g, "q_l", GammaSymbol::pair("e", pair_split()), {"q_a", "q_b"});
  const RuleId right = rule_id(g, "q_r", GammaSymbol::pair("e", pair_split()), {"q_b", "q_c"});
  const Ast expected(root, {Ast(left, {Ast(a), Ast(b)}),
                            Ast(chain, {Ast(a), Ast(bottom, {Ast(a), Ast(b), Ast(cc)}), Ast(right, {Ast(b), Ast(cc)})}),
                            Ast(cc)});

  const auto d = psi(c, g, worked_tree(), worked_run());
  CHECK(d == expected);
  CHECK_FALSE(validate_ast(g, d));
  CHECK(d.size() == 14);

  // Equivalent pairs (same run, indices shifted) map to the same AST.
  CHECK(psi(c, g, shift(worked_tree(), 3), worked_run()) == expected);

  CHECK(psi(c, g, ct_leaf("a", 42), run_leaf("q_a")) == Ast(a));
  CHECK_THROWS_AS(psi(c, g, ct_leaf("a", 1), run_leaf("q_b")), Error);
}

TEST_CASE("psi inverse recovers the tree and run") {
  const auto c = abc();
  const auto g = build_a_rtg(c);
  const auto d = psi(c, g, worked_tree(), worked_run());
  const auto [t, rho] = psi_inverse(g, d);
  CHECK(t == strip_indices(worked_tree()));
  CHECK(rho == worked_run());

  const auto [leaf, leaf_run] = psi_inverse(g, Ast(rule_id(g, "q_a", GammaSymbol::leaf("a"), {})));
  CHECK(leaf == Tree<std::string>("a"));
  CHECK(leaf_run == run_leaf("q_a"));

  CHECK_THROWS_AS(psi_inverse(g, Ast(999)), ValidationError);
}

TEST_CASE("the evaluations of psi commute with rep and yield") {
  const auto c = abc();
  const auto g = build_a_rtg(c);
  const auto t = project_to_gamma(g, psi(c, g, worked_tree(), worked_run()));
  CHECK(ct_eval(t) == rep(worked_tree()));
  CHECK(y_eval(t) == yield(worked_tree()));
  CHECK(y_eval(t) == StringTuple{abc_word(3)});
}

TEST_CASE("decoration") {
  const auto p = rep(worked_tree());
  CHECK(decorate(p) == worked_tree());
  CHECK(decorate(p, 4) == shift(worked_tree(), 3));
  CHECK(rep(decorate(p, 11)) == p);
  CHECK_THROWS_AS(decorate(p, 0), ValidationError);

  const auto gapped = rep(ct_node("b", {ct_leaf("a", 1), ct_leaf("a", 4)}));
  CHECK_THROWS_AS(decorate(gapped), ValidationError);
  const auto spread = decorate_with_gaps(gapped, 1, 2);
  CHECK(indices_of(spread) == std::vector<unsigned>{1, 4});
  CHECK(rep(spread) == gapped);
}
