#include "hyll/parser.hpp"

#include <cctype>
#include <set>

#include "hyll/derived.hpp"

namespace hyll {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

bool is_reserved_word(const std::string& s) {
  static const std::set<std::string> r = {"all", "ex", "allw", "exw", "dn", "box",
                                          "dia", "dag", "delay", "top", "i"};
  return r.count(s) > 0;
}

std::vector<Token> tokenize(const std::string& text, int first_line) {
  std::vector<Token> out;
  int line = first_line;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  static const char* multi[] = {"=>c", "|-", "@@", "-o", "=>", ":=", "<="};
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      t.kind = TokKind::Ident;
      t.text = text.substr(i, j - i);
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = TokKind::Number;
      t.text = text.substr(i, j - i);
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if ((c == '?' || c == '\'') && i + 1 < text.size() && ident_start(text[i + 1])) {
      std::size_t j = i + 1;
      while (j < text.size() && ident_char(text[j])) ++j;
      t.kind = c == '?' ? TokKind::Meta : TokKind::Var;
      t.text = text.substr(i + 1, j - i - 1);
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    bool matched = false;
    for (const char* m : multi) {
      std::string s(m);
      if (text.compare(i, s.size(), s) != 0) continue;
      // "-o" and "=>c" must not swallow the start of an identifier.
      if (ident_char(s.back()) && i + s.size() < text.size() && ident_char(text[i + s.size()])) continue;
      t.kind = TokKind::Sym;
      t.text = s;
      advance(s.size());
      out.push_back(std::move(t));
      matched = true;
      break;
    }
    if (matched) continue;
    static const std::string singles = "()[]{},;.*&+-!@:|#=?<>_/";
    if (singles.find(c) == std::string::npos)
      throw ParseError(line, col, {}, std::string("unexpected character '") + c + "'");
    t.kind = TokKind::Sym;
    t.text = std::string(1, c);
    advance(1);
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = TokKind::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

const Token& TokenStream::peek(std::size_t k) const {
  std::size_t p = pos_ + k;
  return p < toks_.size() ? toks_[p] : toks_.back();
}

Token TokenStream::next() {
  Token t = peek();
  if (pos_ + 1 < toks_.size()) ++pos_;
  return t;
}

bool TokenStream::is(const std::string& sym, std::size_t k) const {
  const Token& t = peek(k);
  return t.kind == TokKind::Sym && t.text == sym;
}

bool TokenStream::is_ident(const std::string& word, std::size_t k) const {
  const Token& t = peek(k);
  return t.kind == TokKind::Ident && t.text == word;
}

bool TokenStream::accept(const std::string& sym) {
  if (!is(sym)) return false;
  next();
  return true;
}

void TokenStream::expect(const std::string& sym) {
  if (!accept(sym)) fail({"'" + sym + "'"}, "unexpected token");
}

void TokenStream::fail(std::vector<std::string> expected, const std::string& msg) const {
  const Token& t = peek();
  std::string found = t.kind == TokKind::End ? "end of input" : "'" + t.text + "'";
  throw ParseError(t.line, t.col, std::move(expected), msg + ", found " + found);
}

int FormulaParser::lookup(const std::string& name, bool& is_world) const {
  for (std::size_t k = scope_.size(); k-- > 0;) {
    if (scope_[k].name == name) {
      is_world = scope_[k].world;
      return static_cast<int>(scope_.size() - 1 - k);
    }
  }
  return -1;
}

std::string FormulaParser::binder_name(bool world) {
  const Token& t = ts_.peek();
  if (t.kind != TokKind::Ident || is_reserved_word(t.text))
    ts_.fail({world ? "world variable" : "term variable"}, "expected a binder name");
  std::string n = ts_.next().text;
  ts_.expect(".");
  return n;
}

Formula FormulaParser::formula() { return limp(); }

Formula FormulaParser::limp() {
  Formula a = oplus();
  if (ts_.accept("-o")) return Formula::limp(a, limp());
  return a;
}

Formula FormulaParser::oplus() {
  Formula a = with();
  if (ts_.accept("+")) return Formula::oplus(a, oplus());
  return a;
}

Formula FormulaParser::with() {
  Formula a = tensor();
  if (ts_.accept("&")) return Formula::with(a, with());
  return a;
}

Formula FormulaParser::tensor() {
  Formula a = unary();
  if (ts_.accept("*")) return Formula::tensor(a, tensor());
  return a;
}

Formula FormulaParser::unary() {
  if (ts_.accept("!")) return Formula::bang(unary());
  const Token& t = ts_.peek();
  if (t.kind == TokKind::Ident) {
    static const std::map<std::string, Conn> binders = {{"all", Conn::ForallT},
                                                        {"ex", Conn::ExistsT},
                                                        {"allw", Conn::ForallW},
                                                        {"exw", Conn::ExistsW},
                                                        {"dn", Conn::Down}};
    auto b = binders.find(t.text);
    if (b != binders.end()) {
      ts_.next();
      bool world = is_world_binder(b->second);
      std::string n = binder_name(world);
      scope_.push_back({n, world});
      Formula body = formula();
      scope_.pop_back();
      return Formula::binder(b->second, n, body);
    }
    // Derived connectives expand on the spot; their operand is bound under
    // fresh binders, so it is parsed first and shifted by the expansion.
    if (t.text == "box" || t.text == "dia" || t.text == "dag") {
      std::string k = ts_.next().text;
      Formula a = unary();
      if (a.has_loose())
        ts_.fail({}, "operand of '" + k + "' must not mention enclosing binders");
      return k == "box" ? box(a) : k == "dia" ? diamond(a) : dagger(a);
    }
    if (t.text == "delay") {
      ts_.next();
      ts_.expect("(");
      WorldExpr v = world();
      ts_.expect(")");
      if (v.has_bound()) ts_.fail({}, "delay amount must not mention enclosing binders");
      Formula a = unary();
      if (a.has_loose()) ts_.fail({}, "operand of 'delay' must not mention enclosing binders");
      return delay(v, a);
    }
  }
  return postfix();
}

Formula FormulaParser::postfix() {
  Formula a = primary();
  while (ts_.accept("@@")) a = Formula::at(a, world());
  return a;
}

Formula FormulaParser::primary() {
  const Token& t = ts_.peek();
  if (ts_.accept("(")) {
    Formula f = formula();
    ts_.expect(")");
    return f;
  }
  if (t.kind == TokKind::Number) {
    if (t.text == "1") {
      ts_.next();
      return Formula::one();
    }
    if (t.text == "0") {
      ts_.next();
      return Formula::zero();
    }
    ts_.fail({"'0'", "'1'"}, "only 0 and 1 are formula constants");
  }
  if (t.kind != TokKind::Ident)
    ts_.fail({"formula", "'('", "'!'", "binder"}, "expected a formula");
  if (t.text == "top") {
    ts_.next();
    return Formula::top();
  }
  if (is_reserved_word(t.text)) ts_.fail({"formula"}, "reserved word '" + t.text + "'");
  std::string name = ts_.next().text;

  if (ts_.is("[")) {
    if (!ctx_.allow_slots) ts_.fail({"formula"}, "rule-indexed placeholders are not allowed here");
    ts_.next();
    const Token& v = ts_.peek();
    if (v.kind != TokKind::Ident) ts_.fail({"identifier"}, "expected a rule variable");
    std::string var = ts_.next().text;
    ts_.expect("]");
    return Formula::slot(name, var);
  }

  auto m = ctx_.macros.find(name);
  if (m != ctx_.macros.end()) {
    const Macro& mac = m->second;
    if (mac.kind == Macro::Kind::Formulas) {
      std::vector<Formula> args;
      if (ts_.accept("(")) {
        if (!ts_.is(")")) {
          args.push_back(formula());
          while (ts_.accept(",")) args.push_back(formula());
        }
        ts_.expect(")");
      }
      if (mac.arity >= 0 && static_cast<int>(args.size()) != mac.arity)
        throw Error(ErrorKind::Arity, "'" + name + "' expects " + std::to_string(mac.arity) + " arguments");
      for (const auto& a : args)
        if (a.has_loose()) ts_.fail({}, "arguments of '" + name + "' must not mention enclosing binders");
      return mac.on_formulas(args);
    }
    std::vector<Term> args;
    if (ts_.accept("(")) {
      if (!ts_.is(")")) {
        args.push_back(term());
        while (ts_.accept(",")) args.push_back(term());
      }
      ts_.expect(")");
    }
    if (mac.arity >= 0 && static_cast<int>(args.size()) != mac.arity)
      throw Error(ErrorKind::Arity, "'" + name + "' expects " + std::to_string(mac.arity) + " arguments");
    for (const auto& a : args)
      if (a.has_bound()) ts_.fail({}, "arguments of '" + name + "' must not mention enclosing binders");
    return mac.on_terms(args);
  }

  if (!ts_.is("(")) {
    auto ab = ctx_.abbreviations.find(name);
    if (ab != ctx_.abbreviations.end()) return ab->second;
  }

  std::vector<Term> args;
  if (ts_.accept("(")) {
    args.push_back(term());
    while (ts_.accept(",")) args.push_back(term());
    ts_.expect(")");
  }
  if (!ctx_.signature.empty()) {
    auto s = ctx_.signature.find(name);
    if (s == ctx_.signature.end())
      throw Error(ErrorKind::UndeclaredPredicate, "undeclared predicate '" + name + "' at " +
                                                      std::to_string(t.line) + ":" + std::to_string(t.col));
    if (s->second != static_cast<int>(args.size()))
      throw Error(ErrorKind::Arity, "predicate '" + name + "' has arity " + std::to_string(s->second) + ", got " +
                                        std::to_string(args.size()));
  }
  return Formula::atom(name, std::move(args));
}

Term FormulaParser::term() {
  const Token& t = ts_.peek();
  switch (t.kind) {
    case TokKind::Var: return Term::var(ts_.next().text);
    case TokKind::Meta:
      if (!ctx_.allow_metas) ts_.fail({"term"}, "metavariables are not allowed here");
      return Term::meta(ts_.next().text);
    case TokKind::Number: return Term::constant(ts_.next().text);
    case TokKind::Ident: {
      if (is_reserved_word(t.text)) ts_.fail({"term"}, "reserved word '" + t.text + "'");
      std::string n = ts_.next().text;
      bool is_world = false;
      int idx = lookup(n, is_world);
      if (idx >= 0) {
        if (is_world) ts_.fail({"term"}, "world variable '" + n + "' cannot be used in a term");
        return Term::bound(static_cast<std::uint32_t>(idx));
      }
      if (ts_.accept("(")) {
        std::vector<Term> args{term()};
        while (ts_.accept(",")) args.push_back(term());
        ts_.expect(")");
        return Term::app(n, std::move(args));
      }
      return Term::constant(n);
    }
    default: ts_.fail({"term"}, "expected a term");
  }
}

WorldExpr FormulaParser::world() {
  WorldExpr w = world_comp();
  // "-o" is a separate token, so a bare '-' here is always subtraction.
  while (ts_.accept("-")) w = saturating_sub(w, world_comp());
  return w;
}

WorldExpr FormulaParser::world_comp() {
  WorldExpr w = world_atom();
  while (ts_.accept(".")) w = compose(w, world_atom());
  return w;
}

WorldExpr FormulaParser::world_atom() {
  const Token& t = ts_.peek();
  switch (t.kind) {
    case TokKind::Number: {
      std::string s = ts_.next().text;
      if (s.size() > 18) ts_.fail({"world"}, "world literal too large");
      return WorldExpr::nat(std::stoull(s));
    }
    case TokKind::Meta:
      if (!ctx_.allow_metas) ts_.fail({"world"}, "metavariables are not allowed here");
      return WorldExpr::meta(ts_.next().text);
    case TokKind::Ident: {
      if (t.text == "i") {
        ts_.next();
        return WorldExpr::iota();
      }
      if (is_reserved_word(t.text)) ts_.fail({"world"}, "reserved word '" + t.text + "'");
      std::string n = ts_.next().text;
      bool is_world = false;
      int idx = lookup(n, is_world);
      if (idx >= 0) {
        if (!is_world) ts_.fail({"world"}, "term variable '" + n + "' cannot be used as a world");
        return WorldExpr::bound(static_cast<std::uint32_t>(idx));
      }
      return WorldExpr::free(n);
    }
    case TokKind::Sym:
      if (t.text == "(") {
        ts_.next();
        WorldExpr w = world();
        ts_.expect(")");
        return w;
      }
      [[fallthrough]];
    default: ts_.fail({"world", "number", "'i'", "'('"}, "expected a world");
  }
}

Judgement FormulaParser::judgement() {
  Formula f = formula();
  ts_.expect("@");
  return {f, world()};
}

std::vector<Judgement> FormulaParser::zone() {
  std::vector<Judgement> out;
  if (ts_.accept(".")) return out;
  if (ts_.is(";") || ts_.is("|-")) return out;
  for (;;) {
    const Token& t = ts_.peek();
    auto al = t.kind == TokKind::Ident ? ctx_.zone_aliases.find(t.text) : ctx_.zone_aliases.end();
    if (al != ctx_.zone_aliases.end() && (ts_.is(",", 1) || ts_.is(";", 1) || ts_.is("|-", 1))) {
      ts_.next();
      out.insert(out.end(), al->second.begin(), al->second.end());
    } else {
      out.push_back(judgement());
    }
    if (!ts_.accept(",")) break;
  }
  return out;
}

Sequent FormulaParser::sequent() {
  Sequent s;
  s.gamma = zone();
  if (ts_.accept(";")) {
    s.delta = zone();
  } else {
    // A single zone before the turnstile is the linear one.
    s.delta = std::move(s.gamma);
    s.gamma.clear();
  }
  ts_.expect("|-");
  s.goal = judgement();
  return s;
}

namespace {

template <class T, class F>
T parse_all(const std::string& text, const ParseContext& ctx, F f) {
  TokenStream ts(tokenize(text));
  FormulaParser p(ts, ctx);
  T out = f(p);
  if (!ts.at_end()) ts.fail({"end of input"}, "trailing input");
  return out;
}

}  // namespace

Formula parse_formula(const std::string& text, const ParseContext& ctx) {
  return parse_all<Formula>(text, ctx, [](FormulaParser& p) { return p.formula(); });
}

WorldExpr parse_world(const std::string& text, const ParseContext& ctx) {
  return parse_all<WorldExpr>(text, ctx, [](FormulaParser& p) { return p.world(); });
}

Term parse_term(const std::string& text, const ParseContext& ctx) {
  return parse_all<Term>(text, ctx, [](FormulaParser& p) { return p.term(); });
}

Judgement parse_judgement(const std::string& text, const ParseContext& ctx) {
  return parse_all<Judgement>(text, ctx, [](FormulaParser& p) { return p.judgement(); });
}

Sequent parse_sequent(const std::string& text, const ParseContext& ctx) {
  return parse_all<Sequent>(text, ctx, [](FormulaParser& p) { return p.sequent(); });
}

}  // namespace hyll
