// Command-line front end for the ctaparse library.

#include <cstddef>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ctaparse/ctaparse.hpp"

namespace {

enum Exit : int { ok = 0, usage = 1, invalid = 2, inapplicable = 3, too_large = 4 };

struct Options {
  std::string file;
  std::string input;
  std::string format = "json";
  bool decorate = false;
  unsigned base = 1;
  std::optional<std::size_t> max_size;
  bool count = false;
  std::size_t cap = 10000;
};

ctaparse::Word tokens(const std::string& input) {
  std::istringstream in(input);
  return {std::istream_iterator<std::string>(in), std::istream_iterator<std::string>()};
}

void warn_all(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

// Multi-segment trees get one unused index between segments.
void emit(const std::set<ctaparse::Pct>& trees, const Options& o) {
  if (o.decorate || o.format == "bracket") {
    std::vector<std::string> lines;
    for (const auto& p : trees) lines.push_back(ctaparse::to_bracket(ctaparse::decorate_with_gaps(p, o.base, 1)));
    for (const auto& l : lines) std::cout << l << '\n';
    return;
  }
  std::cout << ctaparse::to_json(trees).dump(2) << '\n';
}

std::string tuple_text(const ctaparse::StringTuple& t) {
  std::string out;
  for (std::size_t m = 0; m < t.size(); ++m) {
    if (m) out += " ,";
    for (const auto& a : t[m]) out += (out.empty() ? "" : " ") + a;
  }
  return out;
}

int cmd_validate(const Options& o) {
  const auto c = ctaparse::load_cta(o.file);
  std::vector<std::string> warnings;
  ctaparse::build_a_rtg(c, &warnings);
  warn_all(warnings);
  std::cout << "ok: " << c.states.size() << " states, " << c.terminals.size() << " terminals, "
            << c.transitions.size() << " transitions\n";
  const auto a = ctaparse::check_applicability(c);
  std::cout << "applicability: " << a.message() << '\n';
  return ok;
}

int cmd_parse(const Options& o) {
  const auto c = ctaparse::load_cta(o.file);
  const auto u = tokens(o.input);
  if (o.count) {
    std::cout << ctaparse::count_parses(c, u) << '\n';
    return ok;
  }
  ctaparse::ParseOptions po;
  po.result_cap = o.cap == 0 ? std::nullopt : std::optional<std::size_t>(o.cap);
  emit(ctaparse::parse(c, u, po), o);
  return ok;
}

int cmd_recognize(const Options& o) {
  const auto c = ctaparse::load_cta(o.file);
  std::cout << (ctaparse::recognize(c, tokens(o.input)) ? "true" : "false") << '\n';
  return ok;
}

int cmd_oracle(const Options& o) {
  const auto c = ctaparse::load_cta(o.file);
  const auto u = tokens(o.input);
  const auto bound = o.max_size ? ctaparse::EnumerationBound(*o.max_size) : ctaparse::sufficient_bound(c, u.size());
  std::vector<std::string> warnings;
  auto trees = ctaparse::oracle_parse(c, u, bound, &warnings);
  warn_all(warnings);
  emit(trees, o);
  return ok;
}

int cmd_language(const Options& o) {
  const auto c = ctaparse::load_cta(o.file);
  const auto yields = ctaparse::oracle_language(c, ctaparse::EnumerationBound(o.max_size.value_or(20)));
  if (o.format == "json") {
    std::cout << nlohmann::json(yields).dump() << '\n';
  } else {
    for (const auto& y : yields) std::cout << tuple_text(y) << '\n';
  }
  return ok;
}

int cmd_decorate(const Options& o) {
  std::string text;
  if (o.file == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(o.file);
    if (!in) throw ctaparse::Error("cannot read '" + o.file + "'");
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ctaparse::SyntaxError(0, e.what());
  }
  if (!j.is_array()) j = nlohmann::json::array({j});
  for (const auto& record : j)
    std::cout << ctaparse::to_bracket(ctaparse::decorate(ctaparse::pct_from_json(record), o.base)) << '\n';
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constituency parsing for constituent tree automata"};
  app.require_subcommand(1);
  Options o;

  auto file_arg = [&](CLI::App* sub, const char* what) { sub->add_option("file", o.file, what)->required(); };
  auto tree_output = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "bracket"}));
    sub->add_flag("--decorate", o.decorate, "print constituent trees with leaf indices");
    sub->add_option("--base", o.base, "first leaf index when decorating")->check(CLI::PositiveNumber);
  };

  auto* validate = app.add_subcommand("validate", "check a CTA file");
  file_arg(validate, "CTA file");

  auto* parse = app.add_subcommand("parse", "all partitioned constituent trees for an input");
  file_arg(parse, "CTA file");
  parse->add_option("--input", o.input, "whitespace-separated tokens")->required();
  tree_output(parse);
  parse->add_flag("--count", o.count, "print only the number of parses");
  parse->add_option("--cap", o.cap, "abort when the result exceeds this many trees (0: no cap)");

  auto* recognize = app.add_subcommand("recognize", "membership of an input in the yield language");
  file_arg(recognize, "CTA file");
  recognize->add_option("--input", o.input, "whitespace-separated tokens")->required();

  auto* oracle = app.add_subcommand("oracle", "parse by exhaustive enumeration");
  file_arg(oracle, "CTA file");
  oracle->add_option("--input", o.input, "whitespace-separated tokens")->required();
  oracle->add_option("--max-size", o.max_size, "largest derivation size to enumerate")->check(CLI::PositiveNumber);
  tree_output(oracle);

  auto* language = app.add_subcommand("language", "yields of all derivations up to a size");
  file_arg(language, "CTA file");
  language->add_option("--max-size", o.max_size, "largest derivation size to enumerate (default 20)")
      ->check(CLI::PositiveNumber);
  language->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "text"}));

  auto* decorate = app.add_subcommand("decorate", "index the leaves of tree records");
  file_arg(decorate, "JSON file with one record or an array of records ('-' for stdin)");
  decorate->add_option("--base", o.base, "first leaf index")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }
  if (language->parsed() && !language->count("--format")) o.format = "text";

  try {
    if (validate->parsed()) return cmd_validate(o);
    if (parse->parsed()) return cmd_parse(o);
    if (recognize->parsed()) return cmd_recognize(o);
    if (oracle->parsed()) return cmd_oracle(o);
    if (language->parsed()) return cmd_language(o);
    if (decorate->parsed()) return cmd_decorate(o);
  } catch (const ctaparse::SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << '\n';
    return usage;
  } catch (const ctaparse::ValidationError& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return invalid;
  } catch (const ctaparse::ApplicabilityError& e) {
    std::cerr << "not applicable: " << e.what() << '\n';
    return inapplicable;
  } catch (const ctaparse::ResultTooLarge& e) {
    std::cerr << "error: " << e.what() << '\n';
    return too_large;
  } catch (const ctaparse::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  }
  return usage;
}
