#ifndef HYLL_PARSER_HPP
#define HYLL_PARSER_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hyll/formula.hpp"

namespace hyll {

enum class TokKind { Ident, Number, Meta, Var, Sym, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  int line = 1;
  int col = 1;
};

// Shared tokenizer for formulas, sequents, tactics and the model DSL.
// `--` starts a comment that runs to the end of the line.
std::vector<Token> tokenize(const std::string& text, int first_line = 1);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}
  const Token& peek(std::size_t k = 0) const;
  Token next();
  bool at_end() const { return peek().kind == TokKind::End; }
  bool is(const std::string& sym, std::size_t k = 0) const;
  bool is_ident(const std::string& word, std::size_t k = 0) const;
  bool accept(const std::string& sym);
  void expect(const std::string& sym);
  [[noreturn]] void fail(std::vector<std::string> expected, const std::string& msg) const;
  std::size_t position() const { return pos_; }
  void reset(std::size_t p) { pos_ = p; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

struct Macro {
  enum class Kind { Terms, Formulas };
  Kind kind = Kind::Terms;
  int arity = 1;  // -1 accepts any number of arguments
  std::function<Formula(const std::vector<Term>&)> on_terms;
  std::function<Formula(const std::vector<Formula>&)> on_formulas;
};

struct ParseContext {
  Signature signature;
  std::map<std::string, Formula> abbreviations;
  std::map<std::string, Macro> macros;
  // Names that stand for a list of judgements inside a sequent zone.
  std::map<std::string, std::vector<Judgement>> zone_aliases;
  bool allow_metas = true;
  bool allow_slots = true;
};

class FormulaParser {
 public:
  FormulaParser(TokenStream& ts, const ParseContext& ctx) : ts_(ts), ctx_(ctx) {}
  Formula formula();
  WorldExpr world();
  Term term();
  Judgement judgement();
  std::vector<Judgement> zone();
  Sequent sequent();

 private:
  struct Scope {
    std::string name;
    bool world;
  };
  TokenStream& ts_;
  const ParseContext& ctx_;
  std::vector<Scope> scope_;

  Formula limp();
  Formula oplus();
  Formula with();
  Formula tensor();
  Formula unary();
  Formula postfix();
  Formula primary();
  WorldExpr world_comp();
  WorldExpr world_atom();
  std::string binder_name(bool world);
  int lookup(const std::string& name, bool& is_world) const;
};

Formula parse_formula(const std::string& text, const ParseContext& ctx);
WorldExpr parse_world(const std::string& text, const ParseContext& ctx = {});
Term parse_term(const std::string& text, const ParseContext& ctx = {});
Judgement parse_judgement(const std::string& text, const ParseContext& ctx);
Sequent parse_sequent(const std::string& text, const ParseContext& ctx);

bool is_reserved_word(const std::string& s);

}  // namespace hyll

#endif
