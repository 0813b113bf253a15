#pragma once

// Text formats: the line-based CTA description, the JSON record for
// partitioned constituent trees, and bracketed constituent trees.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ctaparse/algebras.hpp"
#include "ctaparse/automaton.hpp"
#include "ctaparse/error.hpp"
#include "ctaparse/terms.hpp"
#include "ctaparse/word_tuple.hpp"

namespace ctaparse {

namespace detail {

inline std::vector<std::string> split_ws(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline unsigned parse_count(const std::string& text, std::size_t line, const char* what) {
  unsigned value = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || p != text.data() + text.size())
    throw SyntaxError(line, std::string("expected a ") + what + ", got '" + text + "'");
  return value;
}

inline void check_name(const std::string& name, std::size_t line) {
  if (!is_valid_symbol_name(name)) throw SyntaxError(line, "invalid symbol name '" + name + "'");
}

}  // namespace detail

/// Parses the CTA text format. Declarations (terminal, state, final) may
/// appear anywhere; transitions are read once all declarations are known.
/// Throws SyntaxError for malformed lines and ValidationError (prefixed with
/// the line number where one applies) for ill-formed automata.
inline Cta parse_cta(std::string_view text) {
  struct Line {
    std::size_t number;
    std::string keyword;
    std::string body;
  };
  std::vector<Line> lines;
  {
    std::size_t number = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
      ++number;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      auto words = detail::split_ws(raw);
      if (words.empty()) continue;
      const auto kw_end = raw.find(words.front()) + words.front().size();
      lines.push_back({number, words.front(), raw.substr(kw_end)});
    }
  }

  Cta c;
  auto at = [](std::size_t line, const std::string& msg) { return ValidationError("line " + std::to_string(line) + ": " + msg); };
  auto declare = [&](RankedAlphabet& alphabet, const std::string& name, unsigned rank, std::size_t line) {
    try {
      alphabet.add(name, rank);
    } catch (const ValidationError& e) {
      throw at(line, e.what());
    }
  };

  for (const auto& l : lines) {
    const auto words = detail::split_ws(l.body);
    if (l.keyword == "terminal" || l.keyword == "state") {
      if (words.size() != 2) throw SyntaxError(l.number, "expected '" + l.keyword + " <name> <rank>'");
      detail::check_name(words[0], l.number);
      const unsigned rank = detail::parse_count(words[1], l.number, l.keyword == "state" ? "sort" : "rank");
      declare(l.keyword == "state" ? c.states : c.terminals, words[0], rank, l.number);
    } else if (l.keyword == "final") {
      if (words.size() != 1) throw SyntaxError(l.number, "expected 'final <state>'");
      if (!c.final_state.empty()) throw SyntaxError(l.number, "final state declared twice");
      c.final_state = words[0];
    } else if (l.keyword != "lex" && l.keyword != "trans") {
      throw SyntaxError(l.number, "unknown keyword '" + l.keyword + "'");
    }
  }

  for (const auto& l : lines) {
    if (l.keyword == "lex") {
      const auto words = detail::split_ws(l.body);
      if (words.size() != 3 || words[1] != "->") throw SyntaxError(l.number, "expected 'lex <terminal> -> <state>'");
      c.transitions.emplace_back(NullaryTransition{words[0], words[2]});
    } else if (l.keyword == "trans") {
      const auto open = l.body.find('[');
      const auto close = l.body.rfind(']');
      if (open == std::string::npos || close == std::string::npos || close < open)
        throw SyntaxError(l.number, "expected 'trans <q1> ... <qk> -> <terminal> [ <word tuple> ] -> <q>'");
      auto head = detail::split_ws(std::string_view(l.body).substr(0, open));
      auto tail = detail::split_ws(std::string_view(l.body).substr(close + 1));
      if (head.size() < 3 || head[head.size() - 2] != "->" || tail.size() != 2 || tail[0] != "->")
        throw SyntaxError(l.number, "expected 'trans <q1> ... <qk> -> <terminal> [ <word tuple> ] -> <q>'");
      std::vector<std::string> children(head.begin(), head.end() - 2);
      std::vector<unsigned> kappa;
      for (const auto& q : children) {
        const auto sort = c.states.find(q);
        if (!sort) throw at(l.number, "undeclared state '" + q + "'");
        kappa.push_back(*sort);
      }
      std::vector<std::vector<Variable>> comps;
      try {
        comps = parse_word_tuple_components(std::string_view(l.body).substr(open, close - open + 1));
      } catch (const SyntaxError& e) {
        throw SyntaxError(l.number, e.what());
      }
      std::optional<WordTuple> tuple;
      try {
        tuple = WordTuple::make(std::move(kappa), comps);
      } catch (const ValidationError& e) {
        throw at(l.number, e.what());
      }
      CompositeTransition t{std::move(children), head.back(), std::move(*tuple), tail[1]};
      c.transitions.emplace_back(std::move(t));
    }
  }

  if (auto report = validate_cta(c); !report.ok()) throw ValidationError(report.to_string());
  return c;
}

inline Cta load_cta(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_cta(buffer.str());
}

/// Inverse of parse_cta up to whitespace, comments and declaration order.
inline std::string print_cta(const Cta& c) {
  std::string out;
  for (const auto& [a, rank] : c.terminals.symbols()) out += "terminal " + a + " " + std::to_string(rank) + "\n";
  for (const auto& [q, sort] : c.states.symbols()) out += "state " + q + " " + std::to_string(sort) + "\n";
  out += "final " + c.final_state + "\n";
  for (const auto& t : c.transitions) {
    if (const auto* n = std::get_if<NullaryTransition>(&t)) {
      out += "lex " + n->terminal + " -> " + n->target + "\n";
      continue;
    }
    const auto& ct = std::get<CompositeTransition>(t);
    out += "trans";
    for (const auto& q : ct.children) out += " " + q;
    out += " -> " + ct.terminal + " " + ct.tuple.to_string() + " -> " + ct.target + "\n";
  }
  return out;
}

// JSON record of a partitioned constituent tree.

inline nlohmann::json tree_to_json(const Tree<std::string>& t) {
  nlohmann::json children = nlohmann::json::array();
  for (const auto& c : t.children) children.push_back(tree_to_json(c));
  return {{"label", t.label}, {"children", std::move(children)}};
}

inline Tree<std::string> tree_from_json(const nlohmann::json& j) {
  Tree<std::string> t(j.at("label").get<std::string>());
  for (const auto& c : j.at("children")) t.children.push_back(tree_from_json(c));
  return t;
}

inline nlohmann::json to_json(const Pct& p) {
  nlohmann::json order = nlohmann::json::array();
  for (const auto& w : p.order()) order.push_back(w.to_string());
  nlohmann::json segments = nlohmann::json::array();
  for (std::size_t m = 0; m < p.segment_count(); ++m) {
    nlohmann::json seg = nlohmann::json::array();
    for (const auto& w : p.segment(m)) seg.push_back(w.to_string());
    segments.push_back(std::move(seg));
  }
  return {{"tree", tree_to_json(p.tree())}, {"order", std::move(order)}, {"segments", std::move(segments)}};
}

/// Reads a record written by to_json. The segments determine the order; a
/// present "order" field must agree with them.
inline Pct pct_from_json(const nlohmann::json& j) {
  try {
    std::vector<std::vector<Position>> segments;
    for (const auto& seg : j.at("segments")) {
      auto& s = segments.emplace_back();
      for (const auto& w : seg) s.push_back(Position::parse(w.get<std::string>()));
    }
    Pct p = Pct::from_segments(tree_from_json(j.at("tree")), segments);
    if (j.contains("order")) {
      std::vector<Position> order;
      for (const auto& w : j.at("order")) order.push_back(Position::parse(w.get<std::string>()));
      if (order != p.order()) throw ValidationError("order does not match the concatenated segments");
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw SyntaxError(0, std::string("malformed tree record: ") + e.what());
  }
}

/// Records sorted by their compact serialization.
inline nlohmann::json to_json(const std::set<Pct>& trees) {
  std::vector<std::string> dumped;
  for (const auto& p : trees) dumped.push_back(to_json(p).dump());
  std::sort(dumped.begin(), dumped.end());
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : dumped) out.push_back(nlohmann::json::parse(s));
  return out;
}

// Bracketed constituent trees: (d (e a<1> b<4>) c<7>)

inline std::string to_bracket(const ConstituentTree& xi) {
  if (xi.is_leaf()) {
    std::string s = xi.label.symbol;
    if (xi.label.index) s += "<" + std::to_string(*xi.label.index) + ">";
    return s;
  }
  std::string s = "(" + xi.label.symbol;
  for (const auto& c : xi.children) s += " " + to_bracket(c);
  return s + ")";
}

/// Parses the bracket format. Throws SyntaxError, or ValidationError when
/// the result is not a constituent tree.
inline ConstituentTree parse_bracket(std::string_view text) {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto name = [&] {
    const std::size_t begin = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) && text[pos] != '(' &&
           text[pos] != ')' && text[pos] != '<')
      ++pos;
    if (pos == begin) throw SyntaxError(0, "expected a symbol at offset " + std::to_string(begin));
    return std::string(text.substr(begin, pos - begin));
  };
  auto node = [&](auto& self) -> ConstituentTree {
    skip();
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      skip();
      ConstituentTree t = ct_node(name(), {});
      while (true) {
        skip();
        if (pos >= text.size()) throw SyntaxError(0, "unbalanced parentheses");
        if (text[pos] == ')') break;
        t.children.push_back(self(self));
      }
      ++pos;
      if (t.children.empty()) throw SyntaxError(0, "inner node '" + t.label.symbol + "' has no children");
      return t;
    }
    std::string symbol = name();
    if (pos >= text.size() || text[pos] != '<') throw SyntaxError(0, "leaf '" + symbol + "' lacks an index");
    const auto close = text.find('>', pos);
    if (close == std::string_view::npos) throw SyntaxError(0, "unterminated index on leaf '" + symbol + "'");
    const std::string digits(text.substr(pos + 1, close - pos - 1));
    pos = close + 1;
    return ct_leaf(std::move(symbol), detail::parse_count(digits, 0, "leaf index"));
  };
  ConstituentTree t = node(node);
  skip();
  if (pos != text.size()) throw SyntaxError(0, "trailing text after the tree");
  if (auto problem = check_constituent_tree(t)) throw ValidationError(*problem);
  return t;
}

}  // namespace ctaparse
