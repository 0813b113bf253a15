#include <set>
#include <string>
#include <vector>

#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace ctaparse;
using namespace testing_support;

namespace {

std::set<Transition> transition_set(const Cta& c) {
  std::set<Transition> out;
  for (const auto& t : c.transitions) out.insert(t);
  return out;
}

const char* small = R"(
# two leaves under one node
terminal a 0
terminal e 2
state q_a 1
state q 2
lex a -> q_a
trans q_a q_a -> e [x1.1 , x2.1] -> q
)";

template <class E>
std::string message_of(const std::string& text) {
  try {
    parse_cta(text);
  } catch (const E& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("the fixture file describes the a^n b^n c^n automaton") {
  const auto c = load_cta(fixture("abc.cta"));
  const auto expected = abc();
  CHECK(c.states == expected.states);
  CHECK(c.terminals == expected.terminals);
  CHECK(c.final_state == expected.final_state);
  CHECK(c.transitions.size() == 10);
  CHECK(transition_set(c) == transition_set(expected));
}

TEST_CASE("all fixtures load and round trip") {
  for (const char* name : {"abc.cta", "german.cta", "monadic_cycle.cta", "not_normalized.cta", "unary_chain.cta",
                           "binary.cta", "crossing.cta"}) {
    INFO(name);
    const auto c = load_cta(fixture(name));
    const auto again = parse_cta(print_cta(c));
    CHECK(again.states == c.states);
    CHECK(again.terminals == c.terminals);
    CHECK(again.final_state == c.final_state);
    CHECK(again.transitions == c.transitions);
  }
}

TEST_CASE("declaration order does not matter") {
  const std::string reordered = R"(
lex a -> q_f
final q_f
state q_f 1
terminal a 0
)";
  const auto c = parse_cta(reordered);
  CHECK(c.transitions.size() == 1);
  CHECK(c.final_state == "q_f");
}

TEST_CASE("errors in CTA files") {
  CHECK(message_of<ValidationError>(small).find("no final state declared") != std::string::npos);

  const std::string text = R"(terminal a 0
terminal e 2
terminal f 1
state q_a 1
state q 2
state q_f 1
final q_f
lex a -> q_a
trans q_a q_a -> e [x1.1 , x2.1] -> q
trans q -> f [x1.2 x1.1] -> q_f
)";
  const auto msg = message_of<ValidationError>(text);
  CHECK(msg.find("line 10") != std::string::npos);
  CHECK(msg.find("monotonicity") != std::string::npos);

  CHECK_THROWS_AS(load_cta(fixture("missing.cta")), Error);

  try {
    parse_cta("terminal a 0\nbogus line\n");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_cta("terminal a\n"), SyntaxError);
  CHECK_THROWS_AS(parse_cta("terminal a x\n"), SyntaxError);
  CHECK_THROWS_AS(parse_cta("terminal a,b 0\n"), SyntaxError);
  CHECK_THROWS_AS(parse_cta("final a\nfinal b\n"), SyntaxError);
  CHECK_THROWS_AS(parse_cta("lex a q\n"), SyntaxError);
  CHECK_THROWS_AS(parse_cta("trans q -> e x1.1 -> q\n"), SyntaxError);
  CHECK_THROWS_AS(parse_cta("state q 1\ntrans q -> e [x1.1 y] -> q\n"), SyntaxError);
  CHECK_THROWS_AS(parse_cta("terminal a 0\nterminal a 1\n"), ValidationError);
  CHECK(message_of<ValidationError>("terminal e 1\nstate q 1\nfinal q\ntrans p -> e [x1.1] -> q\n")
            .find("undeclared state 'p'") != std::string::npos);
}

TEST_CASE("tree records in JSON") {
  const auto p = rep(worked_tree());
  const auto j = to_json(p);
  CHECK(j.at("tree").at("label") == "d");
  CHECK(j.at("order").size() == 9);
  CHECK(j.at("order")[2] == "2.2.1");
  CHECK(j.at("segments").size() == 1);
  CHECK(pct_from_json(j) == p);

  const auto gapped = rep(ct_node("b", {ct_leaf("a", 1), ct_leaf("a", 4)}));
  CHECK(pct_from_json(to_json(gapped)) == gapped);
  CHECK(pct_from_json(nlohmann::json::parse(to_json(gapped).dump())) == gapped);

  auto bad = j;
  bad["order"][0] = "3";
  CHECK_THROWS_AS(pct_from_json(bad), ValidationError);
  CHECK_THROWS_AS(pct_from_json(nlohmann::json::object()), SyntaxError);
}

TEST_CASE("sets of tree records are sorted canonically") {
  const auto trees = parse(abc(), abc_word(3));
  const auto j = to_json(trees);
  REQUIRE(j.size() == 4);
  for (std::size_t i = 1; i < j.size(); ++i) CHECK(j[i - 1].dump() < j[i].dump());
}

TEST_CASE("bracketed constituent trees") {
  const auto text = to_bracket(worked_tree());
  CHECK(text == "(d (e a<1> b<4>) (d a<2> (d a<3> b<6> c<9>) (e b<5> c<8>)) c<7>)");
  CHECK(parse_bracket(text) == worked_tree());
  CHECK(parse_bracket("  a<3> ") == ct_leaf("a", 3));
  CHECK_THROWS_AS(parse_bracket("(d a<1>"), SyntaxError);
  CHECK_THROWS_AS(parse_bracket("(d a)"), SyntaxError);
  CHECK_THROWS_AS(parse_bracket("(d)"), SyntaxError);
  CHECK_THROWS_AS(parse_bracket("a<1> b<2>"), SyntaxError);
  CHECK_THROWS_AS(parse_bracket("(d a<1> b<1>)"), ValidationError);
}
