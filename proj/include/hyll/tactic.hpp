#ifndef HYLL_TACTIC_HPP
#define HYLL_TACTIC_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyll/kernel.hpp"
#include "hyll/parser.hpp"

namespace hyll {

// One element of a split hint: a delta index or a judgement pattern whose
// world part is optional. Patterns are kept as text and parsed against the
// goal when the tactic runs.
struct SplitItem {
  std::optional<int> index;
  std::string pattern;
};

struct Tactic {
  enum class Kind { Prim, Then, ThenAll, OrElse, Repeat, Try, Cases, Auto, Skip };
  Kind kind = Kind::Skip;

  // Prim
  Rule rule = Rule::Init;
  std::optional<int> index;       // #k, or a bare index for copy
  std::string label;              // copy label
  std::optional<std::vector<SplitItem>> split;
  std::string witness;            // raw text; empty or "_" means a fresh metavariable
  std::string fresh;              // eigenvariable name for forallR/existsL
  std::string cut;                // cut judgement text
  int cut_kind = 1;

  // Auto
  int depth = 4;
  std::optional<std::vector<std::string>> using_labels;

  std::vector<Tactic> subs;

  std::string to_string() const;
};

// Parameterised tactic abbreviation: `tactic name(a, b) := body`.
struct TacticMacro {
  std::vector<std::string> params;
  std::vector<Token> body;
};

using TacticMacros = std::map<std::string, TacticMacro>;

// Parses a tactic expression. Grammar, loosest first:
//   expr   := seq ('||' seq)*
//   seq    := unary (';' (unary | '[' expr (',' expr)* ']'))*
//   unary  := 'try' unary | 'repeat' unary | atom
//   atom   := '(' expr ')' | 'skip' | 'cases' | 'auto' [n] ['using' label+]
//           | macro-name ['(' args ')'] | rule hints*
Tactic parse_tactic(const std::string& text, const TacticMacros& macros = {}, int line = 1);

// Registers `name(params) := body` from the text after the `tactic` keyword.
void define_tactic_macro(const std::string& text, TacticMacros& macros, int line = 1);

}  // namespace hyll

#endif
