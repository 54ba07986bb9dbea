#include "hyll/script.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hyll/temporal.hpp"

namespace hyll {

namespace {

const char* const kDirectives[] = {"model", "let", "tactic", "goal", "prop"};

bool is_directive(const std::string& word) {
  for (const char* d : kDirectives)
    if (word == d) return true;
  return false;
}

std::string first_word(const std::string& line) {
  std::size_t i = 0;
  while (i < line.size() && (std::isalnum(static_cast<unsigned char>(line[i])) || line[i] == '_')) ++i;
  return line.substr(0, i);
}

std::string strip_comment(const std::string& line) {
  std::size_t c = line.find("--");
  return c == std::string::npos ? line : line.substr(0, c);
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r") == std::string::npos; }

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Directive {
  int line;
  std::string text;  // without the keyword
  std::string word;
};

class HeaderReader {
 public:
  HeaderReader(ProofScript& s, std::string base) : s_(s), base_(std::move(base)) {}

  void run(const Directive& d) {
    if (d.word == "model") model(d);
    else if (d.word == "let") let(d);
    else if (d.word == "tactic") define_tactic_macro(d.text, s_.macros, d.line);
    else if (d.word == "goal") goal(d);
    else prop(d);
  }

 private:
  ProofScript& s_;
  std::string base_;

  TokenStream stream(const Directive& d) const { return TokenStream(tokenize(d.text, d.line)); }

  void model(const Directive& d) {
    if (s_.model) throw ParseError(d.line, 1, {}, "only one model per script");
    std::string rel = trim(d.text);
    if (rel.empty()) throw ParseError(d.line, 1, {"path"}, "model needs a path");
    std::filesystem::path p = std::filesystem::path(rel).is_absolute() ? std::filesystem::path(rel)
                                                                        : std::filesystem::path(base_) / rel;
    s_.model = parse_model(read_file(p.string()));
    s_.compiled = compile_system(*s_.model);
    install_model(*s_.ctx, *s_.compiled);
  }

  void let(const Directive& d) {
    TokenStream ts = stream(d);
    const Token& name = ts.peek();
    if (name.kind != TokKind::Ident || is_reserved_word(name.text)) ts.fail({"name"}, "expected a name");
    std::string n = ts.next().text;
    ts.expect(":=");
    FormulaParser fp(ts, s_.ctx->parse);
    Formula f = fp.formula();
    if (!ts.at_end()) ts.fail({"end of definition"}, "unexpected '" + ts.peek().text + "'");
    s_.ctx->parse.abbreviations[n] = f;
  }

  void goal(const Directive& d) {
    TokenStream ts = stream(d);
    std::string label = "goal " + std::to_string(s_.goals.size() + 1);
    if (ts.peek().kind == TokKind::Ident && ts.is(":", 1)) label = ts.next().text;
    ts.expect(":");
    FormulaParser fp(ts, s_.ctx->parse);
    Sequent seq = fp.sequent();
    if (!ts.at_end()) ts.fail({"end of goal"}, "unexpected '" + ts.peek().text + "'");
    s_.goals.push_back(seq);
    s_.goal_labels.push_back(label);
  }

  void prop(const Directive& d) {
    TokenStream ts = stream(d);
    const Token& optok = ts.peek();
    auto op = optok.kind == TokKind::Ident ? temporal_op(optok.text) : std::nullopt;
    if (!op) ts.fail({"X", "F", "G", "U", "H", "O", "AX", "AG", "AF", "AU"}, "unknown temporal operator");
    ts.next();
    TemporalSpec spec;
    spec.op = *op;
    if (ts.peek().kind == TokKind::Number) spec.k = std::stoi(ts.next().text);
    bool over = false;
    if (ts.is_ident("over")) {
      ts.next();
      if (!ts.is_ident("model")) ts.fail({"model"}, "only `over model` is supported");
      ts.next();
      if (!s_.compiled) throw ParseError(d.line, optok.col, {}, "prop over model needs a model directive first");
      over = true;
      spec.ruleset = s_.compiled->fireable;
    }
    std::optional<Formula> given;
    FormulaParser fp(ts, s_.ctx->parse);
    if (ts.is_ident("given")) {
      ts.next();
      given = fp.formula();
    }
    ts.expect(":");
    spec.args.push_back(fp.formula());
    while (ts.accept(",")) spec.args.push_back(fp.formula());
    if (!ts.at_end()) ts.fail({"end of prop"}, "unexpected '" + ts.peek().text + "'");

    Sequent base;
    if (over) base.gamma = s_.compiled->gamma;
    base.goal.world = WorldExpr::free("w");
    auto push = [&](Formula f, const std::string& label) {
      Sequent seq = base;
      seq.goal.formula = given ? Formula::limp(*given, f) : f;
      s_.goals.push_back(seq);
      s_.goal_labels.push_back(label);
    };
    try {
      if (spec.op == TemporalOp::AX && over) {
        // One goal over rule slots; `cases` splits it per rule.
        if (spec.args.size() != 1) throw Error(ErrorKind::Arity, "AX expects one formula");
        push(guarded_template(s_.compiled->prefix, next(spec.args[0])), "AX");
        return;
      }
      Encoded e = encode(spec);
      for (std::size_t i = 0; i < e.obligations.size(); ++i) push(e.obligations[i], e.labels[i]);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ScriptError(e.kind(), d.line, e.what());
    }
  }
};

ProofState apply_step(const ProofState& ps, const ProofScript& s, const ScriptStep& step,
                      std::optional<int> goal = std::nullopt) {
  if (ps.complete()) throw ScriptError(ErrorKind::RuleNotApplicable, step.line, "no open goals");
  Tactic t = parse_tactic(step.text, s.macros, step.line);
  try {
    return apply_tactic(ps, t, goal);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ScriptError(e.kind(), step.line, e.what());
  }
}

void guarded_walk(const Derivation& d, std::vector<bool>& out) {
  if (d.rule == Rule::OplusR1 || d.rule == Rule::OplusR2) {
    const Formula& g = d.conclusion.goal.formula;
    if (g.conn() == Conn::Oplus && g.left().conn() == Conn::With) out.push_back(d.rule == Rule::OplusR1);
  }
  for (const auto& p : d.premises) guarded_walk(p, out);
}

}  // namespace

ScriptError::ScriptError(ErrorKind kind, int line, const std::string& msg)
    : Error(kind, "line " + std::to_string(line) + ": " + msg), line_(line), detail_(msg) {}

void install_model(ProverContext& ctx, const CompiledModel& c) {
  for (std::size_t i = 0; i < c.gamma.size(); ++i) ctx.labels.push_back({c.gamma_labels[i], c.gamma[i]});
  auto& fire = ctx.families[c.prefix + "fireable"];
  auto& nofire = ctx.families[c.prefix + "not_fireable"];
  fire.clear();
  nofire.clear();
  ctx.case_labels.clear();
  for (std::size_t i = 0; i < c.fireable.size(); ++i) {
    fire.push_back(c.fireable[i].fireable);
    nofire.push_back(c.fireable[i].not_fireable);
    ctx.case_labels.push_back("rule " + std::to_string(i + 1));
  }
  ctx.case_count = c.fireable.size();
  ctx.parse.zone_aliases["system"] = c.gamma;
  Macro dc;
  dc.on_terms = [](const std::vector<Term>& args) {
    if (args[0].kind() != TermKind::Const) throw Error(ErrorKind::Arity, "dont_care expects an entity name");
    return dont_care(args[0].name());
  };
  ctx.parse.macros["dont_care"] = dc;
}

ProofScript parse_script(const std::string& text, const std::string& base_dir) {
  ProofScript s;
  std::vector<Directive> directives;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool in_proof = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = strip_comment(raw);
    if (blank(line)) continue;
    bool indented = line[0] == ' ' || line[0] == '\t';
    std::string body = trim(line);
    std::string word = first_word(body);
    if (!in_proof && indented && !directives.empty()) {
      directives.back().text += "\n" + body;
      s.header.back() += " " + body;
      continue;
    }
    if (is_directive(word) && (body.size() == word.size() || !std::isalnum(static_cast<unsigned char>(body[word.size()])))) {
      if (in_proof) throw ParseError(lineno, 1, {"tactic"}, "directive '" + word + "' after the first proof line");
      std::string rest = body.substr(word.size());
      // Continuation lines keep their own line numbers via embedded newlines.
      directives.push_back({lineno, rest, word});
      s.header.push_back(body);
      continue;
    }
    in_proof = true;
    s.steps.push_back({lineno, body});
  }
  HeaderReader reader(s, base_dir);
  for (const auto& d : directives) reader.run(d);
  if (s.goals.empty()) throw ParseError(lineno == 0 ? 1 : lineno, 1, {"goal"}, "script declares no goal");
  return s;
}

ProofScript load_script(const std::string& path) {
  std::filesystem::path p(path);
  return parse_script(read_file(path), p.has_parent_path() ? p.parent_path().string() : ".");
}

ProofState start_session(const ProofScript& s) { return ProofState::create(s.ctx, s.goals, s.goal_labels); }

ProofState run_steps(const ProofScript& s) {
  ProofState ps = start_session(s);
  for (const auto& step : s.steps) ps = apply_step(ps, s, step);
  return ps;
}

Certificate run_script(const ProofScript& s) {
  ProofState ps = run_steps(s);
  int last = s.steps.empty() ? 1 : s.steps.back().line;
  try {
    return extract_certificate(ps);
  } catch (const Error& e) {
    throw ScriptError(e.kind(), last, e.what());
  }
}

Certificate run_script(const std::string& tactics, const Sequent& goal, std::shared_ptr<const ProverContext> ctx) {
  ProofScript s;
  s.ctx = std::const_pointer_cast<ProverContext>(ctx);
  s.goals = {goal};
  s.goal_labels = {"goal 1"};
  std::istringstream in(tactics);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string body = trim(strip_comment(raw));
    if (!body.empty()) s.steps.push_back({lineno, body});
  }
  return run_script(s);
}

Session::Session(ProofScript script) : script_(std::move(script)) { history_.push_back(start_session(script_)); }

void Session::apply(const std::string& tactic, std::optional<int> goal) {
  ScriptStep step{static_cast<int>(tactics_.size() + 1), trim(tactic)};
  const ProofState& cur = history_.back();
  bool off_front = goal && (cur.open_goals().empty() || *goal != cur.open_goals().front());
  history_.push_back(apply_step(cur, script_, step, goal));
  tactics_.push_back(step.text);
  off_front_.push_back(off_front);
}

bool Session::undo() {
  if (tactics_.empty()) return false;
  history_.pop_back();
  tactics_.pop_back();
  off_front_.pop_back();
  return true;
}

bool Session::replayable() const {
  for (bool b : off_front_)
    if (b) return false;
  return true;
}

std::string Session::transcript() const {
  std::string out;
  for (const auto& h : script_.header) out += h + "\n";
  for (const auto& t : tactics_) out += t + "\n";
  return out;
}

std::vector<bool> guarded_choices(const Derivation& d) {
  std::vector<bool> out;
  guarded_walk(d, out);
  return out;
}

}  // namespace hyll
