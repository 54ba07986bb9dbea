#include "hyll/tactic.hpp"

namespace hyll {

namespace {

std::string token_text(const Token& t) {
  switch (t.kind) {
    case TokKind::Meta: return "?" + t.text;
    case TokKind::Var: return "'" + t.text;
    default: return t.text;
  }
}

std::string join(const std::vector<Token>& toks) {
  std::string out;
  for (const auto& t : toks) {
    if (!out.empty()) out += ' ';
    out += token_text(t);
  }
  return out;
}

class TacticParser {
 public:
  TacticParser(TokenStream& ts, const TacticMacros& macros, int depth) : ts_(ts), macros_(macros), depth_(depth) {}

  Tactic expr() {
    Tactic t = seq();
    while (is_orelse()) {
      ts_.next();
      ts_.next();
      Tactic r = seq();
      Tactic o;
      o.kind = Tactic::Kind::OrElse;
      o.subs = {std::move(t), std::move(r)};
      t = std::move(o);
    }
    return t;
  }

  void finish() {
    if (!ts_.at_end()) ts_.fail({"end of tactic"}, "unexpected '" + token_text(ts_.peek()) + "'");
  }

 private:
  TokenStream& ts_;
  const TacticMacros& macros_;
  int depth_;

  bool is_orelse() const { return ts_.is("|") && ts_.is("|", 1); }

  // Tokens that end a primitive's hint list at bracket depth zero.
  bool at_terminator() const {
    return ts_.at_end() || ts_.is(";") || ts_.is(",") || ts_.is("]") || ts_.is(")") || is_orelse();
  }

  Tactic seq() {
    Tactic t = unary();
    while (ts_.accept(";")) {
      Tactic s;
      if (ts_.accept("[")) {
        s.kind = Tactic::Kind::ThenAll;
        s.subs.push_back(std::move(t));
        if (!ts_.is("]")) {
          s.subs.push_back(expr());
          while (ts_.accept(",")) s.subs.push_back(expr());
        }
        ts_.expect("]");
      } else {
        s.kind = Tactic::Kind::Then;
        s.subs = {std::move(t), unary()};
      }
      t = std::move(s);
    }
    return t;
  }

  Tactic unary() {
    if (ts_.is_ident("try") || ts_.is_ident("repeat")) {
      bool is_try = ts_.next().text == "try";
      Tactic t;
      t.kind = is_try ? Tactic::Kind::Try : Tactic::Kind::Repeat;
      t.subs.push_back(unary());
      return t;
    }
    return atom();
  }

  Tactic atom() {
    if (ts_.accept("(")) {
      Tactic t = expr();
      ts_.expect(")");
      return t;
    }
    const Token& tok = ts_.peek();
    if (tok.kind != TokKind::Ident) ts_.fail({"tactic"}, "expected a tactic");
    std::string word = tok.text;
    if (word == "skip" || word == "cases") {
      ts_.next();
      Tactic t;
      t.kind = word == "skip" ? Tactic::Kind::Skip : Tactic::Kind::Cases;
      return t;
    }
    if (word == "auto") {
      ts_.next();
      Tactic t;
      t.kind = Tactic::Kind::Auto;
      if (ts_.peek().kind == TokKind::Number) t.depth = std::stoi(ts_.next().text);
      if (ts_.is_ident("using")) {
        ts_.next();
        t.using_labels.emplace();
        while (!at_terminator()) {
          const Token& l = ts_.peek();
          if (l.kind != TokKind::Ident && l.kind != TokKind::Number) ts_.fail({"label"}, "expected a hypothesis label");
          t.using_labels->push_back(ts_.next().text);
        }
      }
      return t;
    }
    if (auto m = macros_.find(word); m != macros_.end()) return expand(m->second);
    auto rule = rule_from_name(word);
    if (!rule) ts_.fail({"tactic"}, "unknown tactic '" + word + "'");
    ts_.next();
    return primitive(*rule);
  }

  Tactic expand(const TacticMacro& m) {
    Token head = ts_.next();
    if (depth_ > 64) throw ParseError(head.line, head.col, {}, "tactic macro expansion is too deep");
    std::vector<std::vector<Token>> args;
    if (!m.params.empty()) {
      ts_.expect("(");
      std::vector<Token> cur;
      int level = 0;
      for (;;) {
        const Token& t = ts_.peek();
        if (t.kind == TokKind::End) ts_.fail({")"}, "unterminated macro arguments");
        if (level == 0 && t.kind == TokKind::Sym && (t.text == "," || t.text == ")")) {
          args.push_back(cur);
          cur.clear();
          if (ts_.next().text == ")") break;
          continue;
        }
        if (t.kind == TokKind::Sym && (t.text == "(" || t.text == "{" || t.text == "[")) ++level;
        if (t.kind == TokKind::Sym && (t.text == ")" || t.text == "}" || t.text == "]")) --level;
        cur.push_back(ts_.next());
      }
      if (args.size() != m.params.size())
        throw ParseError(head.line, head.col, {},
                         "macro '" + head.text + "' expects " + std::to_string(m.params.size()) + " arguments");
    }
    std::vector<Token> body;
    for (const auto& t : m.body) {
      bool replaced = false;
      if (t.kind == TokKind::Ident) {
        for (std::size_t i = 0; i < m.params.size(); ++i) {
          if (m.params[i] == t.text) {
            for (Token a : args[i]) {
              a.line = head.line;
              a.col = head.col;
              body.push_back(a);
            }
            replaced = true;
            break;
          }
        }
      }
      if (!replaced) {
        Token c = t;
        c.line = head.line;
        c.col = head.col;
        body.push_back(c);
      }
    }
    Token end;
    end.kind = TokKind::End;
    end.line = head.line;
    end.col = head.col;
    body.push_back(end);
    TokenStream sub(body);
    TacticParser p(sub, macros_, depth_ + 1);
    Tactic t = p.expr();
    p.finish();
    return t;
  }

  std::vector<Token> collect_until_hint() {
    std::vector<Token> out;
    int level = 0;
    while (!ts_.at_end()) {
      if (level == 0 && (at_terminator() || ts_.is("#") || ts_.is("{") || ts_.is_ident("as"))) break;
      const Token& t = ts_.peek();
      if (t.kind == TokKind::Sym && (t.text == "(" || t.text == "[")) ++level;
      if (t.kind == TokKind::Sym && (t.text == ")" || t.text == "]")) --level;
      out.push_back(ts_.next());
    }
    return out;
  }

  int signed_number() {
    bool neg = ts_.accept("-");
    const Token& n = ts_.peek();
    if (n.kind != TokKind::Number) ts_.fail({"number"}, "expected an index");
    int v = std::stoi(ts_.next().text);
    return neg ? -v : v;
  }

  std::vector<SplitItem> split_items() {
    ts_.expect("{");
    std::vector<SplitItem> items;
    if (ts_.accept("}")) return items;
    for (;;) {
      std::vector<Token> cur;
      int level = 0;
      while (!(level == 0 && (ts_.is(",") || ts_.is("}")))) {
        if (ts_.at_end()) ts_.fail({"}"}, "unterminated split");
        const Token& t = ts_.peek();
        if (t.kind == TokKind::Sym && (t.text == "(" || t.text == "[" || t.text == "{")) ++level;
        if (t.kind == TokKind::Sym && (t.text == ")" || t.text == "]" || t.text == "}")) --level;
        cur.push_back(ts_.next());
      }
      SplitItem item;
      if (cur.size() == 1 && cur[0].kind == TokKind::Number) {
        item.index = std::stoi(cur[0].text);
      } else if (cur.size() == 2 && cur[0].kind == TokKind::Sym && cur[0].text == "-" &&
                 cur[1].kind == TokKind::Number) {
        item.index = -std::stoi(cur[1].text);
      } else {
        if (cur.empty()) ts_.fail({"split item"}, "empty split item");
        item.pattern = join(cur);
      }
      items.push_back(std::move(item));
      if (ts_.accept("}")) break;
      ts_.expect(",");
    }
    return items;
  }

  Tactic primitive(Rule r) {
    Tactic t;
    t.kind = Tactic::Kind::Prim;
    t.rule = r;
    while (!at_terminator()) {
      if (ts_.accept("#")) {
        t.index = signed_number();
      } else if (ts_.is("{")) {
        t.split = split_items();
      } else if (ts_.is_ident("as")) {
        ts_.next();
        if (ts_.peek().kind != TokKind::Ident) ts_.fail({"name"}, "expected an eigenvariable name");
        t.fresh = ts_.next().text;
      } else if (r == Rule::Copy && (ts_.peek().kind == TokKind::Number || ts_.is("-"))) {
        t.index = signed_number();
      } else if (r == Rule::Copy && ts_.peek().kind == TokKind::Ident) {
        t.label = ts_.next().text;
      } else if (r == Rule::Cut && ts_.is("!") && t.cut.empty()) {
        ts_.next();
        t.cut_kind = 2;
      } else if (r == Rule::ForallL || r == Rule::ExistsR || r == Rule::Cut) {
        std::vector<Token> toks = collect_until_hint();
        if (toks.empty()) ts_.fail({"hint"}, "unexpected '" + token_text(ts_.peek()) + "'");
        (r == Rule::Cut ? t.cut : t.witness) = join(toks);
      } else {
        ts_.fail({"#index", "{split}", "as"}, std::string("unexpected hint for ") + rule_name(r));
      }
    }
    return t;
  }
};

}  // namespace

Tactic parse_tactic(const std::string& text, const TacticMacros& macros, int line) {
  TokenStream ts(tokenize(text, line));
  TacticParser p(ts, macros, 0);
  Tactic t = p.expr();
  p.finish();
  return t;
}

void define_tactic_macro(const std::string& text, TacticMacros& macros, int line) {
  std::vector<Token> toks = tokenize(text, line);
  TokenStream ts(toks);
  const Token& name = ts.peek();
  if (name.kind != TokKind::Ident) ts.fail({"name"}, "expected a tactic name");
  std::string n = ts.next().text;
  if (rule_from_name(n) || n == "auto" || n == "cases" || n == "skip" || n == "try" || n == "repeat")
    throw ParseError(name.line, name.col, {}, "'" + n + "' is a built-in tactic");
  TacticMacro m;
  if (ts.accept("(")) {
    if (!ts.is(")")) {
      for (;;) {
        if (ts.peek().kind != TokKind::Ident) ts.fail({"parameter"}, "expected a parameter name");
        m.params.push_back(ts.next().text);
        if (!ts.accept(",")) break;
      }
    }
    ts.expect(")");
  }
  ts.expect(":=");
  while (!ts.at_end()) m.body.push_back(ts.next());
  if (m.body.empty()) ts.fail({"tactic"}, "empty tactic definition");
  macros[n] = std::move(m);
}

std::string Tactic::to_string() const {
  switch (kind) {
    case Kind::Skip: return "skip";
    case Kind::Cases: return "cases";
    case Kind::Auto: {
      std::string s = "auto " + std::to_string(depth);
      if (using_labels) {
        s += " using";
        for (const auto& l : *using_labels) s += " " + l;
      }
      return s;
    }
    case Kind::Try: return "try (" + subs[0].to_string() + ")";
    case Kind::Repeat: return "repeat (" + subs[0].to_string() + ")";
    case Kind::OrElse: return "(" + subs[0].to_string() + " || " + subs[1].to_string() + ")";
    case Kind::Then: return subs[0].to_string() + "; " + subs[1].to_string();
    case Kind::ThenAll: {
      std::string s = subs[0].to_string() + "; [";
      for (std::size_t i = 1; i < subs.size(); ++i) s += (i > 1 ? ", " : "") + subs[i].to_string();
      return s + "]";
    }
    case Kind::Prim: {
      std::string s = rule_name(rule);
      if (rule == Rule::Cut && cut_kind == 2) s += " !";
      if (!label.empty()) s += " " + label;
      if (index) s += " #" + std::to_string(*index);
      if (split) {
        s += " {";
        for (std::size_t i = 0; i < split->size(); ++i) {
          const auto& it = (*split)[i];
          s += (i ? ", " : "") + (it.index ? std::to_string(*it.index) : it.pattern);
        }
        s += "}";
      }
      if (!witness.empty()) s += " " + witness;
      if (!cut.empty()) s += " " + cut;
      if (!fresh.empty()) s += " as " + fresh;
      return s;
    }
  }
  return "";
}

}  // namespace hyll
