#include "hyll/temporal.hpp"

#include "hyll/derived.hpp"

namespace hyll {

namespace {

const char* const kNames[] = {"X", "F", "G", "U", "H", "O", "AX", "AG", "AF", "AU"};

void closed(const Formula& p, const char* what) {
  if (p.has_loose()) throw Error(ErrorKind::Parse, std::string(what) + ": operand has loose bound variables");
}

Formula shift(int j, const Formula& p) { return j == 0 ? p : delay(WorldExpr::nat(j), p); }

// Rule quantifier at step j: guards are read j-1 steps ahead.
Formula all_rules(int j, const std::vector<FireablePair>& rules, const Formula& body) {
  std::vector<Formula> parts;
  for (const auto& r : rules)
    parts.push_back(Formula::oplus(Formula::with(shift(j - 1, r.fireable), body), shift(j - 1, r.not_fireable)));
  return with_all(parts);
}

void need_rules(const std::vector<FireablePair>& rules) {
  if (rules.empty()) throw Error(ErrorKind::Arity, "path quantifier needs a nonempty rule set");
}

void need_bound(int k) {
  if (k < 1) throw Error(ErrorKind::Arity, "bounded expansion needs k >= 1");
}

}  // namespace

const char* to_string(TemporalOp op) { return kNames[static_cast<int>(op)]; }

std::optional<TemporalOp> temporal_op(const std::string& name) {
  for (int i = 0; i < 10; ++i)
    if (name == kNames[i]) return static_cast<TemporalOp>(i);
  return std::nullopt;
}

bool is_path_op(TemporalOp op) { return op >= TemporalOp::AX; }

Formula next(const Formula& p) { return delay(WorldExpr::nat(1), p); }
Formula eventually(const Formula& p) { return diamond(p); }
Formula globally(const Formula& p) { return box(p); }

Formula historically(const Formula& p) {
  closed(p, "H");
  Formula at = Formula::at(p, saturating_sub(WorldExpr::bound(1), WorldExpr::bound(0)));
  return Formula::binder(Conn::Down, "u", Formula::binder(Conn::ForallW, "w", at));
}

Formula once(const Formula& p) {
  closed(p, "O");
  Formula at = Formula::at(p, saturating_sub(WorldExpr::bound(1), WorldExpr::bound(0)));
  return Formula::binder(Conn::Down, "u", Formula::binder(Conn::ExistsW, "w", at));
}

Formula until(const Formula& p1, const Formula& p2, const WorldExpr& v) {
  closed(p1, "U");
  closed(p2, "U");
  if (!v.is_ground()) throw Error(ErrorKind::UnboundedBoundedQuantifier, "U: distance " + v.to_string() + " is not a numeral");
  WorldExpr u = WorldExpr::bound(0);
  std::vector<Formula> before;
  for (std::uint64_t j = 0; j < v.offset(); ++j) before.push_back(Formula::at(p1, compose(u, WorldExpr::nat(j))));
  Formula body = Formula::tensor(Formula::at(p2, compose(u, v)), with_all(before));
  return Formula::binder(Conn::Down, "u", body);
}

Formula guarded(const FireablePair& r, const Formula& body) {
  return Formula::oplus(Formula::with(r.fireable, body), r.not_fireable);
}

Formula guarded_template(const std::string& prefix, const Formula& body) {
  return Formula::oplus(Formula::with(Formula::slot(prefix + "fireable", "r"), body),
                        Formula::slot(prefix + "not_fireable", "r"));
}

std::vector<Formula> ax_obligations(const Formula& p, const std::vector<FireablePair>& rules) {
  need_rules(rules);
  std::vector<Formula> out;
  for (const auto& r : rules) out.push_back(guarded(r, next(p)));
  return out;
}

std::vector<Formula> ag_step_obligations(const Formula& l, const Formula& r, const std::vector<FireablePair>& rules) {
  std::vector<Formula> out;
  for (const auto& step : ax_obligations(r, rules)) out.push_back(Formula::limp(l, step));
  return out;
}

Formula af_expansion(const Formula& p, int k, const std::vector<FireablePair>& rules) {
  need_rules(rules);
  need_bound(k);
  Formula inner = all_rules(k, rules, shift(k, p));
  for (int j = k - 1; j >= 1; --j) inner = all_rules(j, rules, Formula::oplus(shift(j, p), inner));
  return Formula::oplus(p, inner);
}

Formula au_expansion(const Formula& p1, const Formula& p2, int k, const std::vector<FireablePair>& rules) {
  need_rules(rules);
  need_bound(k);
  Formula inner = all_rules(k, rules, shift(k, p2));
  for (int j = k - 1; j >= 1; --j)
    inner = all_rules(j, rules, Formula::oplus(shift(j, p2), Formula::tensor(shift(j, p1), inner)));
  return Formula::oplus(p2, Formula::tensor(p1, inner));
}

Encoded encode(const TemporalSpec& spec) {
  TemporalOp op = spec.op;
  std::size_t arity = (op == TemporalOp::U || op == TemporalOp::AU) ? 2 : 1;
  if (spec.args.size() != arity)
    throw Error(ErrorKind::Arity, std::string(to_string(op)) + " expects " + std::to_string(arity) + " formula(s)");
  const Formula& p = spec.args[0];
  if (is_path_op(op) && !spec.ruleset) throw Error(ErrorKind::Arity, std::string(to_string(op)) + " needs a rule set");
  if ((op == TemporalOp::AF || op == TemporalOp::AU) && !spec.k)
    throw Error(ErrorKind::Arity, std::string(to_string(op)) + " needs a bound k");

  Encoded out;
  auto single = [&](Formula f) {
    out.obligations = {std::move(f)};
    out.labels = {to_string(op)};
  };
  switch (op) {
    case TemporalOp::X: single(next(p)); break;
    case TemporalOp::F: single(eventually(p)); break;
    case TemporalOp::G: single(globally(p)); break;
    case TemporalOp::H: single(historically(p)); break;
    case TemporalOp::O: single(once(p)); break;
    case TemporalOp::U:
      if (!spec.k) throw Error(ErrorKind::UnboundedBoundedQuantifier, "U needs a ground distance");
      single(until(p, spec.args[1], WorldExpr::nat(static_cast<std::uint64_t>(*spec.k))));
      break;
    case TemporalOp::AX:
      out.obligations = ax_obligations(p, *spec.ruleset);
      for (std::size_t i = 0; i < out.obligations.size(); ++i) out.labels.push_back("rule " + std::to_string(i + 1));
      break;
    case TemporalOp::AG:
      out.obligations = {p};
      out.labels = {"base"};
      for (auto& f : ag_step_obligations(p, p, *spec.ruleset)) {
        out.obligations.push_back(f);
        out.labels.push_back("rule " + std::to_string(out.labels.size()));
      }
      break;
    case TemporalOp::AF: single(af_expansion(p, *spec.k, *spec.ruleset)); break;
    case TemporalOp::AU: single(au_expansion(p, spec.args[1], *spec.k, *spec.ruleset)); break;
  }
  return out;
}

Oscillation oscillation(const Formula& a, const Formula& b, const WorldExpr& u, const WorldExpr& v,
                        OscillationMode mode, const WorldExpr& w, const std::vector<Judgement>& gamma) {
  Oscillation out;
  switch (mode) {
    case OscillationMode::Formula1: out.formula = oscillate1(a, b, u, v); break;
    case OscillationMode::FormulaH: out.formula = oscillate_h(a, b, u, v); break;
    case OscillationMode::Meta: out.goals = oscillation_goals(a, b, u, v, w, gamma); break;
  }
  return out;
}

}  // namespace hyll
