#pragma once

// Monotone (n, κ)-word tuples and the word functions they induce.

#include <cctype>
#include <charconv>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ctaparse/error.hpp"
#include "ctaparse/terms.hpp"

namespace ctaparse {

/// x_i^j: the j-th component of the i-th argument (both 1-based).
struct Variable {
  unsigned child = 1;
  unsigned component = 1;

  std::string to_string() const {
    return "x" + std::to_string(child) + "." + std::to_string(component);
  }

  /// Parses "x<i>.<j>".
  static std::optional<Variable> parse(std::string_view text) {
    if (text.size() < 4 || text.front() != 'x') return std::nullopt;
    text.remove_prefix(1);
    const auto dot = text.find('.');
    if (dot == std::string_view::npos) return std::nullopt;
    Variable v;
    auto read = [](std::string_view s, unsigned& out) {
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
      return !s.empty() && ec == std::errc{} && p == s.data() + s.size() && out > 0;
    };
    if (!read(text.substr(0, dot), v.child) || !read(text.substr(dot + 1), v.component))
      return std::nullopt;
    return v;
  }

  auto operator<=>(const Variable&) const = default;
};

/// A word (string over Σ); symbols may be multi-character tokens.
using Word = std::vector<std::string>;
/// Element of Tup(Σ*).
using StringTuple = std::vector<Word>;

/// One symbol of a word tuple component: a variable, or a terminal of Δ.
/// Terminals occur only in the general form; automata use Δ = ∅.
using WordSymbol = std::variant<Variable, std::string>;

struct TupleSort {
  std::vector<unsigned> kappa;
  unsigned n = 1;

  friend bool operator==(const TupleSort&, const TupleSort&) = default;
};

/// Returns a description of the first violated condition, or nothing.
inline std::optional<std::string> check_word_tuple(
    const std::vector<unsigned>& kappa, const std::vector<std::vector<WordSymbol>>& components) {
  if (components.empty()) return "a word tuple needs at least one component";
  for (std::size_t i = 0; i < kappa.size(); ++i)
    if (kappa[i] == 0) return "kappa entry " + std::to_string(i + 1) + " is 0";

  // seen[i][j] = reading position of x_{i+1}^{j+1}
  std::vector<std::vector<std::optional<std::size_t>>> seen(kappa.size());
  for (std::size_t i = 0; i < kappa.size(); ++i) seen[i].resize(kappa[i]);

  std::size_t reading = 0;
  for (std::size_t m = 0; m < components.size(); ++m) {
    if (components[m].empty()) return "component " + std::to_string(m + 1) + " is empty";
    for (const auto& sym : components[m]) {
      ++reading;
      const auto* var = std::get_if<Variable>(&sym);
      if (!var) continue;
      if (var->child == 0 || var->child > kappa.size() || var->component == 0 ||
          var->component > kappa[var->child - 1])
        return "variable " + var->to_string() + " is outside X_kappa";
      auto& slot = seen[var->child - 1][var->component - 1];
      if (slot) return "duplicate variable " + var->to_string();
      slot = reading;
    }
  }
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    for (std::size_t j = 0; j < kappa[i]; ++j) {
      if (!seen[i][j])
        return "missing variable " + Variable{unsigned(i + 1), unsigned(j + 1)}.to_string();
      if (j > 0 && *seen[i][j] < *seen[i][j - 1])
        return "monotonicity violated: " + Variable{unsigned(i + 1), unsigned(j + 1)}.to_string() +
               " occurs left of " + Variable{unsigned(i + 1), unsigned(j)}.to_string();
    }
  }
  return std::nullopt;
}

/// Relation between a flattened variable and its predecessor.
enum class Link {
  start,     // first variable of the tuple
  adjacent,  // same component: I ↷ I′
  gap,       // after a comma: I < I′
};

struct FlatEntry {
  Variable var;
  Link link = Link::start;
  std::size_t component = 0;  // 0-based component the variable sits in

  friend bool operator==(const FlatEntry&, const FlatEntry&) = default;
};

/// A validated monotone (n, κ)-word tuple.
class WordTuple {
 public:
  /// Throws ValidationError unless conditions (1)–(3) hold and no component is empty.
  static WordTuple make(std::vector<unsigned> kappa, std::vector<std::vector<WordSymbol>> components) {
    if (auto problem = check_word_tuple(kappa, components)) throw ValidationError(*problem);
    WordTuple e;
    e.kappa_ = std::move(kappa);
    e.components_ = std::move(components);
    return e;
  }

  /// Variable-only convenience form.
  static WordTuple make(std::vector<unsigned> kappa, const std::vector<std::vector<Variable>>& components) {
    std::vector<std::vector<WordSymbol>> comps;
    comps.reserve(components.size());
    for (const auto& c : components) comps.emplace_back(c.begin(), c.end());
    return make(std::move(kappa), std::move(comps));
  }

  const std::vector<unsigned>& kappa() const noexcept { return kappa_; }
  const std::vector<std::vector<WordSymbol>>& components() const noexcept { return components_; }
  std::size_t arity() const noexcept { return kappa_.size(); }
  unsigned fanout() const noexcept { return static_cast<unsigned>(components_.size()); }
  TupleSort sort() const { return {kappa_, fanout()}; }

  bool has_terminals() const {
    for (const auto& c : components_)
      for (const auto& s : c)
        if (std::holds_alternative<std::string>(s)) return true;
    return false;
  }

  /// "[x1.1 x2.1 , x3.1]"
  std::string to_string() const {
    std::string out = "[";
    for (std::size_t m = 0; m < components_.size(); ++m) {
      if (m) out += " ,";
      for (const auto& s : components_[m]) {
        if (out.size() > 1) out += ' ';
        if (const auto* v = std::get_if<Variable>(&s)) out += v->to_string();
        else out += std::get<std::string>(s);
      }
    }
    return out + "]";
  }

  friend bool operator==(const WordTuple&, const WordTuple&) = default;
  friend bool operator<(const WordTuple& a, const WordTuple& b) {
    if (a.kappa_ != b.kappa_) return a.kappa_ < b.kappa_;
    return a.components_ < b.components_;
  }

 private:
  WordTuple() = default;
  std::vector<unsigned> kappa_;
  std::vector<std::vector<WordSymbol>> components_;
};

inline WordTuple validate_word_tuple(std::vector<unsigned> kappa,
                                     std::vector<std::vector<WordSymbol>> components) {
  return WordTuple::make(std::move(kappa), std::move(components));
}

inline TupleSort sort_of(const WordTuple& e) { return e.sort(); }

/// Variables in reading order, each tagged with how it relates to its
/// predecessor. Only defined for variable-only tuples.
inline std::vector<FlatEntry> flatten(const WordTuple& e) {
  std::vector<FlatEntry> out;
  for (std::size_t m = 0; m < e.components().size(); ++m) {
    bool first_in_component = true;
    for (const auto& s : e.components()[m]) {
      const auto* var = std::get_if<Variable>(&s);
      if (!var) throw ValidationError("flatten: word tuple contains terminal symbols");
      Link link = Link::adjacent;
      if (out.empty()) link = Link::start;
      else if (first_in_component) link = Link::gap;
      out.push_back({*var, link, m});
      first_in_component = false;
    }
  }
  return out;
}

/// ⟦e⟧(args): substitutes w_i^j for every x_i^j.
inline StringTuple apply_word_function(const WordTuple& e, std::span<const StringTuple> args) {
  if (args.size() != e.arity())
    throw ValidationError("word function of arity " + std::to_string(e.arity()) + " applied to " +
                          std::to_string(args.size()) + " arguments");
  for (std::size_t i = 0; i < args.size(); ++i)
    if (args[i].size() != e.kappa()[i])
      throw ValidationError("argument " + std::to_string(i + 1) + " has " +
                            std::to_string(args[i].size()) + " components, expected " +
                            std::to_string(e.kappa()[i]));
  StringTuple out;
  out.reserve(e.fanout());
  for (const auto& comp : e.components()) {
    Word w;
    for (const auto& s : comp) {
      if (const auto* v = std::get_if<Variable>(&s)) {
        const Word& part = args[v->child - 1][v->component - 1];
        w.insert(w.end(), part.begin(), part.end());
      } else {
        w.push_back(std::get<std::string>(s));
      }
    }
    out.push_back(std::move(w));
  }
  return out;
}

/// Splits word tuple text ("[x1.1 x2.1 , x3.1]", brackets optional) into
/// components of variables. Kappa is supplied by the caller.
inline std::vector<std::vector<Variable>> parse_word_tuple_components(std::string_view text) {
  std::string padded;
  for (char ch : text) {
    if (ch == '[' || ch == ']' || ch == ',') {
      padded += ' ';
      padded += ch;
      padded += ' ';
    } else {
      padded += ch;
    }
  }
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : padded) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) tokens.push_back(std::move(cur)), cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));

  std::size_t begin = 0, end = tokens.size();
  if (end > 0 && tokens.front() == "[") {
    if (tokens.back() != "]") throw SyntaxError(0, "unterminated word tuple");
    ++begin;
    --end;
  }
  std::vector<std::vector<Variable>> comps(1);
  for (std::size_t t = begin; t < end; ++t) {
    if (tokens[t] == ",") {
      comps.emplace_back();
    } else if (auto v = Variable::parse(tokens[t])) {
      comps.back().push_back(*v);
    } else {
      throw SyntaxError(0, "unexpected token '" + tokens[t] + "' in word tuple");
    }
  }
  return comps;
}

inline WordTuple parse_word_tuple(std::string_view text, std::vector<unsigned> kappa) {
  return WordTuple::make(std::move(kappa), parse_word_tuple_components(text));
}

}  // namespace ctaparse
