#include "hyll/derived.hpp"

namespace hyll {

namespace {

void require_closed(const Formula& a, const char* what) {
  if (a.has_loose()) throw Error(ErrorKind::Parse, std::string(what) + ": operand has loose bound variables");
}

}  // namespace

Formula box(const Formula& a) {
  require_closed(a, "box");
  Formula at = Formula::at(a, compose(WorldExpr::bound(1), WorldExpr::bound(0)));
  return Formula::binder(Conn::Down, "u", Formula::binder(Conn::ForallW, "w", at));
}

Formula diamond(const Formula& a) {
  require_closed(a, "diamond");
  Formula at = Formula::at(a, compose(WorldExpr::bound(1), WorldExpr::bound(0)));
  return Formula::binder(Conn::Down, "u", Formula::binder(Conn::ExistsW, "w", at));
}

Formula delay(const WorldExpr& v, const Formula& a) {
  require_closed(a, "delay");
  if (v.has_bound()) throw Error(ErrorKind::Parse, "delay: amount has loose bound variables");
  return Formula::binder(Conn::Down, "u", Formula::at(a, compose(WorldExpr::bound(0), v)));
}

Formula dagger(const Formula& a) {
  require_closed(a, "dag");
  return Formula::binder(Conn::ForallW, "u", Formula::at(a, WorldExpr::bound(0)));
}

Formula oscillate1(const Formula& a, const Formula& b, const WorldExpr& u, const WorldExpr& v) {
  Formula excl = Formula::limp(Formula::with(a, b), Formula::zero());
  return Formula::with(a, Formula::with(delay(u, Formula::with(b, delay(v, a))), excl));
}

Formula oscillate_h(const Formula& a, const Formula& b, const WorldExpr& u, const WorldExpr& v) {
  Formula step = Formula::with(Formula::limp(a, delay(u, b)), Formula::limp(b, delay(v, a)));
  Formula excl = Formula::limp(Formula::with(a, b), Formula::zero());
  return Formula::with(dagger(step), excl);
}

std::vector<Sequent> oscillation_goals(const Formula& a, const Formula& b, const WorldExpr& u,
                                       const WorldExpr& v, const WorldExpr& w,
                                       const std::vector<Judgement>& gamma) {
  WorldExpr wu = compose(w, u);
  WorldExpr wuv = compose(wu, v);
  Formula excl = Formula::limp(Formula::with(a, b), Formula::zero());
  return {
      Sequent{gamma, {Judgement{a, w}}, Judgement{b, wu}},
      Sequent{gamma, {Judgement{b, wu}}, Judgement{a, wuv}},
      Sequent{gamma, {}, Judgement{excl, w}},
  };
}

Formula expand_derived(const std::string& name, const std::vector<Formula>& fs, const std::vector<WorldExpr>& ws) {
  auto need = [&](std::size_t nf, std::size_t nw) {
    if (fs.size() != nf || ws.size() != nw)
      throw Error(ErrorKind::Arity, name + " expects " + std::to_string(nf) + " formulas and " + std::to_string(nw) +
                                        " worlds");
  };
  if (name == "box") {
    need(1, 0);
    return box(fs[0]);
  }
  if (name == "diamond" || name == "dia") {
    need(1, 0);
    return diamond(fs[0]);
  }
  if (name == "delay") {
    need(1, 1);
    return delay(ws[0], fs[0]);
  }
  if (name == "dag" || name == "dagger") {
    need(1, 0);
    return dagger(fs[0]);
  }
  if (name == "oscillate1") {
    need(2, 2);
    return oscillate1(fs[0], fs[1], ws[0], ws[1]);
  }
  if (name == "oscillateH") {
    need(2, 2);
    return oscillate_h(fs[0], fs[1], ws[0], ws[1]);
  }
  throw Error(ErrorKind::Parse, "unknown derived connective '" + name + "'");
}

namespace {

Formula fold(const std::vector<Formula>& fs, Formula unit, Formula (*op)(Formula, Formula)) {
  if (fs.empty()) return unit;
  Formula acc = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) acc = op(fs[i], acc);
  return acc;
}

}  // namespace

Formula tensor_all(const std::vector<Formula>& fs) { return fold(fs, Formula::one(), &Formula::tensor); }
Formula with_all(const std::vector<Formula>& fs) { return fold(fs, Formula::top(), &Formula::with); }
Formula oplus_all(const std::vector<Formula>& fs) { return fold(fs, Formula::zero(), &Formula::oplus); }

}  // namespace hyll
