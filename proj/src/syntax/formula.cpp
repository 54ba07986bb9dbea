#include "hyll/formula.hpp"

#include <algorithm>
#include <functional>

namespace hyll {

bool is_binder(Conn c) {
  return c == Conn::ForallT || c == Conn::ExistsT || c == Conn::ForallW || c == Conn::ExistsW || c == Conn::Down;
}

bool is_world_binder(Conn c) { return c == Conn::ForallW || c == Conn::ExistsW || c == Conn::Down; }

const char* conn_name(Conn c) {
  switch (c) {
    case Conn::Atom: return "atom";
    case Conn::Tensor: return "tensor";
    case Conn::One: return "one";
    case Conn::Limp: return "limp";
    case Conn::With: return "with";
    case Conn::Top: return "top";
    case Conn::Oplus: return "oplus";
    case Conn::Zero: return "zero";
    case Conn::Bang: return "bang";
    case Conn::ForallT: return "forall";
    case Conn::ExistsT: return "exists";
    case Conn::ForallW: return "forall-world";
    case Conn::ExistsW: return "exists-world";
    case Conn::At: return "at";
    case Conn::Down: return "down";
    case Conn::Slot: return "slot";
  }
  return "?";
}

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

std::size_t hash_term(const Term& t) {
  std::size_t h = static_cast<std::size_t>(t.kind());
  if (t.kind() == TermKind::Bound) return mix(h, t.index());
  h = mix(h, std::hash<std::string>{}(t.name()));
  for (const auto& a : t.args()) h = mix(h, hash_term(a));
  return h;
}

std::size_t hash_world(const WorldExpr& w) {
  std::size_t h = std::hash<std::uint64_t>{}(w.offset());
  for (const auto& [v, c] : w.vars()) {
    h = mix(h, static_cast<std::size_t>(v.kind));
    h = mix(h, v.kind == VarKind::Bound ? v.index : std::hash<std::string>{}(v.name));
    h = mix(h, c);
  }
  for (const auto& s : w.subs()) {
    h = mix(h, hash_world(s->left));
    h = mix(h, hash_world(s->right) * 31);
  }
  return h;
}

std::uint32_t term_loose(const Term& t) {
  std::uint32_t m = t.kind() == TermKind::Bound ? t.index() + 1 : 0;
  for (const auto& a : t.args()) m = std::max(m, term_loose(a));
  return m;
}

std::uint32_t world_loose(const WorldExpr& w) {
  std::uint32_t m = 0;
  for (const auto& [v, c] : w.vars())
    if (v.kind == VarKind::Bound) m = std::max(m, v.index + 1);
  for (const auto& s : w.subs()) m = std::max({m, world_loose(s->left), world_loose(s->right)});
  return m;
}

}  // namespace

Formula make_node(FormulaNode n) {
  std::size_t h = static_cast<std::size_t>(n.conn) * 1315423911u;
  std::size_t size = 1;
  bool metas = false;
  bool slots = n.conn == Conn::Slot;
  switch (n.conn) {
    case Conn::Atom:
      h = mix(h, std::hash<std::string>{}(n.name));
      for (const auto& a : n.args) {
        h = mix(h, hash_term(a));
        metas = metas || a.has_metas();
      }
      break;
    case Conn::Slot:
      h = mix(h, std::hash<std::string>{}(n.name));
      h = mix(h, std::hash<std::string>{}(n.aux));
      break;
    case Conn::At:
      h = mix(h, hash_world(n.world));
      metas = n.world.has_metas();
      break;
    default: break;
  }
  if (n.a.valid()) {
    h = mix(h, n.a.hash());
    size += n.a.size();
    metas = metas || n.a.has_metas();
    slots = slots || n.a.has_slots();
  }
  if (n.b.valid()) {
    h = mix(h, n.b.hash() * 7);
    size += n.b.size();
    metas = metas || n.b.has_metas();
    slots = slots || n.b.has_slots();
  }
  std::uint32_t lm = 0;
  if (n.conn == Conn::Atom) {
    for (const auto& a : n.args) lm = std::max(lm, term_loose(a));
  } else if (is_binder(n.conn)) {
    lm = n.a.node()->loose_max > 0 ? n.a.node()->loose_max - 1 : 0;
  } else {
    if (n.conn == Conn::At) lm = world_loose(n.world);
    if (n.a.valid()) lm = std::max(lm, n.a.node()->loose_max);
    if (n.b.valid()) lm = std::max(lm, n.b.node()->loose_max);
  }
  n.hash = h;
  n.size = size;
  n.metas = metas;
  n.slots = slots;
  n.loose_max = lm;
  n.loose = lm > 0;
  return Formula(std::make_shared<const FormulaNode>(std::move(n)));
}

Conn Formula::conn() const { return node_->conn; }
const std::string& Formula::name() const { return node_->name; }
const std::string& Formula::slot_var() const { return node_->aux; }
const std::vector<Term>& Formula::args() const { return node_->args; }
const WorldExpr& Formula::world() const { return node_->world; }
const Formula& Formula::left() const { return node_->a; }
const Formula& Formula::right() const { return node_->b; }
std::size_t Formula::hash() const { return node_->hash; }
std::size_t Formula::size() const { return node_->size; }
bool Formula::has_metas() const { return node_->metas; }
bool Formula::has_slots() const { return node_->slots; }
bool Formula::has_loose() const { return node_->loose; }

Formula Formula::atom(std::string pred, std::vector<Term> args) {
  FormulaNode n;
  n.conn = Conn::Atom;
  n.name = std::move(pred);
  n.args = std::move(args);
  return make_node(std::move(n));
}

namespace {

Formula nullary(Conn c) {
  FormulaNode n;
  n.conn = c;
  return make_node(std::move(n));
}

Formula binary(Conn c, Formula a, Formula b) {
  FormulaNode n;
  n.conn = c;
  n.a = std::move(a);
  n.b = std::move(b);
  return make_node(std::move(n));
}

}  // namespace

Formula Formula::one() {
  static const Formula f = nullary(Conn::One);
  return f;
}
Formula Formula::top() {
  static const Formula f = nullary(Conn::Top);
  return f;
}
Formula Formula::zero() {
  static const Formula f = nullary(Conn::Zero);
  return f;
}
Formula Formula::tensor(Formula a, Formula b) { return binary(Conn::Tensor, std::move(a), std::move(b)); }
Formula Formula::limp(Formula a, Formula b) { return binary(Conn::Limp, std::move(a), std::move(b)); }
Formula Formula::with(Formula a, Formula b) { return binary(Conn::With, std::move(a), std::move(b)); }
Formula Formula::oplus(Formula a, Formula b) { return binary(Conn::Oplus, std::move(a), std::move(b)); }

Formula Formula::bang(Formula a) {
  FormulaNode n;
  n.conn = Conn::Bang;
  n.a = std::move(a);
  return make_node(std::move(n));
}

Formula Formula::at(Formula a, WorldExpr w) {
  FormulaNode n;
  n.conn = Conn::At;
  n.a = std::move(a);
  n.world = std::move(w);
  return make_node(std::move(n));
}

Formula Formula::slot(std::string family, std::string var) {
  FormulaNode n;
  n.conn = Conn::Slot;
  n.name = std::move(family);
  n.aux = std::move(var);
  return make_node(std::move(n));
}

Formula Formula::binder(Conn c, std::string hint, Formula body) {
  FormulaNode n;
  n.conn = c;
  n.name = std::move(hint);
  n.a = std::move(body);
  return make_node(std::move(n));
}

Formula Formula::bind_term(Conn c, const std::string& hint, const std::string& v, const Formula& body) {
  return binder(c, hint, close_term(body, v, 0));
}

Formula Formula::bind_world(Conn c, const std::string& hint, const std::string& v, const Formula& body) {
  return binder(c, hint, close_world(body, WorldVar::free(v), 0));
}

Formula Formula::instantiate(const Term& t) const { return open(body(), 0, &t, nullptr); }
Formula Formula::instantiate(const WorldExpr& w) const { return open(body(), 0, nullptr, &w); }

bool alpha_equal(const Formula& a, const Formula& b) {
  if (a.node() == b.node()) return true;
  if (!a.valid() || !b.valid()) return false;
  if (a.hash() != b.hash() || a.conn() != b.conn() || a.size() != b.size()) return false;
  switch (a.conn()) {
    case Conn::Atom:
      if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (compare(a.args()[i], b.args()[i]) != 0) return false;
      return true;
    case Conn::Slot: return a.name() == b.name() && a.slot_var() == b.slot_var();
    case Conn::One:
    case Conn::Top:
    case Conn::Zero: return true;
    case Conn::At: return a.world() == b.world() && alpha_equal(a.left(), b.left());
    default: break;
  }
  if (!alpha_equal(a.left(), b.left())) return false;
  if (a.right().valid()) return alpha_equal(a.right(), b.right());
  return true;
}

namespace {

// Rebuilds f, applying tf to every term and wf to every world, both given
// the number of binders crossed so far. prune(g) returns true when g cannot
// change.
template <typename TF, typename WF, typename P>
Formula rebuild(const Formula& f, std::uint32_t depth, TF& tf, WF& wf, P& prune) {
  if (prune(f)) return f;
  const FormulaNode* n = f.node();
  FormulaNode m;
  m.conn = n->conn;
  m.name = n->name;
  m.aux = n->aux;
  switch (n->conn) {
    case Conn::Atom:
      m.args.reserve(n->args.size());
      for (const auto& t : n->args) m.args.push_back(tf(t, depth));
      return make_node(std::move(m));
    case Conn::At:
      m.world = wf(n->world, depth);
      m.a = rebuild(n->a, depth, tf, wf, prune);
      return make_node(std::move(m));
    case Conn::One:
    case Conn::Top:
    case Conn::Zero:
    case Conn::Slot: return f;
    default: break;
  }
  std::uint32_t inner = is_binder(n->conn) ? depth + 1 : depth;
  m.a = rebuild(n->a, inner, tf, wf, prune);
  if (n->b.valid()) m.b = rebuild(n->b, inner, tf, wf, prune);
  if (m.a.node() == n->a.node() && (!n->b.valid() || m.b.node() == n->b.node()))
    return f;
  return make_node(std::move(m));
}

}  // namespace

Formula open(const Formula& f, std::uint32_t depth, const Term* t, const WorldExpr* w) {
  auto tf = [&](const Term& x, std::uint32_t d) { return t ? x.open(d, *t) : x; };
  auto wf = [&](const WorldExpr& x, std::uint32_t d) { return w ? x.open(d, *w) : x; };
  auto prune = [](const Formula& g) { return !g.has_loose(); };
  return rebuild(f, depth, tf, wf, prune);
}

Formula close_term(const Formula& f, const std::string& v, std::uint32_t depth) {
  auto tf = [&](const Term& x, std::uint32_t d) { return x.close_var(v, d); };
  auto wf = [&](const WorldExpr& x, std::uint32_t d) { return x.shift(d, 1); };
  auto prune = [](const Formula&) { return false; };
  return rebuild(f, depth, tf, wf, prune);
}

Formula close_world(const Formula& f, const WorldVar& v, std::uint32_t depth) {
  auto tf = [&](const Term& x, std::uint32_t d) { return x.shift(d, 1); };
  auto wf = [&](const WorldExpr& x, std::uint32_t d) { return x.close(v, d); };
  auto prune = [](const Formula&) { return false; };
  return rebuild(f, depth, tf, wf, prune);
}

Formula substitute_world(const Formula& f, const WorldVar& v, const WorldExpr& r) {
  auto tf = [](const Term& x, std::uint32_t) { return x; };
  auto wf = [&](const WorldExpr& x, std::uint32_t d) { return x.substitute(v, r.shift(0, d)); };
  auto prune = [](const Formula&) { return false; };
  return rebuild(f, 0, tf, wf, prune);
}

Formula substitute_term(const Formula& f, TermKind k, const std::string& nm, const Term& r) {
  auto tf = [&](const Term& x, std::uint32_t d) { return x.substitute(k, nm, r.shift(0, d)); };
  auto wf = [](const WorldExpr& x, std::uint32_t) { return x; };
  auto prune = [](const Formula&) { return false; };
  return rebuild(f, 0, tf, wf, prune);
}

Formula resolve(const Formula& f, const WorldBindings& wb, const TermBindings& tb) {
  if (!f.has_metas()) return f;
  auto tf = [&](const Term& x, std::uint32_t) { return resolve(x, tb); };
  auto wf = [&](const WorldExpr& x, std::uint32_t) { return resolve(x, wb); };
  auto prune = [](const Formula& g) { return !g.has_metas(); };
  return rebuild(f, 0, tf, wf, prune);
}

void collect_names(const WorldExpr& w, FreeNames& out) {
  std::set<WorldVar> vs;
  w.collect(vs);
  for (const auto& v : vs) {
    if (v.kind == VarKind::Free) out.world_free.insert(v.name);
    if (v.kind == VarKind::Meta) out.world_metas.insert(v.name);
  }
}

void collect_names(const Formula& f, FreeNames& out) {
  const FormulaNode* n = f.node();
  switch (n->conn) {
    case Conn::Atom:
      out.preds.insert(n->name);
      for (const auto& t : n->args) t.collect(out.term_vars, out.term_metas, out.consts);
      return;
    case Conn::At:
      collect_names(n->world, out);
      collect_names(n->a, out);
      return;
    default: break;
  }
  if (n->a.valid()) collect_names(n->a, out);
  if (n->b.valid()) collect_names(n->b, out);
}

namespace {

void loose_rec(const Formula& f, std::uint32_t depth, std::set<std::uint32_t>& out) {
  if (!f.has_loose()) return;
  const FormulaNode* n = f.node();
  switch (n->conn) {
    case Conn::Atom:
      for (const auto& t : n->args) t.loose(depth, out);
      return;
    case Conn::At: {
      std::set<WorldVar> vs;
      n->world.collect(vs);
      for (const auto& v : vs)
        if (v.kind == VarKind::Bound && v.index >= depth) out.insert(v.index - depth);
      loose_rec(n->a, depth, out);
      return;
    }
    default: break;
  }
  std::uint32_t inner = is_binder(n->conn) ? depth + 1 : depth;
  if (n->a.valid()) loose_rec(n->a, inner, out);
  if (n->b.valid()) loose_rec(n->b, inner, out);
}

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> r = {"all", "ex", "allw", "exw", "dn", "box", "dia", "dag", "delay", "top", "i"};
  return r;
}

const char* binder_keyword(Conn c) {
  switch (c) {
    case Conn::ForallT: return "all";
    case Conn::ExistsT: return "ex";
    case Conn::ForallW: return "allw";
    case Conn::ExistsW: return "exw";
    case Conn::Down: return "dn";
    default: return "?";
  }
}

enum class Ctx { Top, Body, Left, Right, BangOp, AtOp };

int precedence(Conn c) {
  switch (c) {
    case Conn::Limp: return 1;
    case Conn::Oplus: return 2;
    case Conn::With: return 3;
    case Conn::Tensor: return 4;
    default: return 6;
  }
}

const char* op_text(Conn c) {
  switch (c) {
    case Conn::Limp: return " -o ";
    case Conn::Oplus: return " + ";
    case Conn::With: return " & ";
    case Conn::Tensor: return " * ";
    default: return " ? ";
  }
}

struct Printer {
  std::vector<std::string> stack;

  std::string bound_name(std::uint32_t i) const {
    if (i < stack.size()) return stack[stack.size() - 1 - i];
    return "#" + std::to_string(i);
  }

  std::string choose_name(const Formula& binder) const {
    const Formula& body = binder.body();
    std::set<std::string> avoid = reserved_words();
    FreeNames names;
    collect_names(body, names);
    avoid.insert(names.world_free.begin(), names.world_free.end());
    avoid.insert(names.consts.begin(), names.consts.end());
    for (std::uint32_t j : loose_indices(body))
      if (j >= 1) avoid.insert(bound_name(j - 1));
    std::string hint = binder.name().empty() ? (is_world_binder(binder.conn()) ? "u" : "x") : binder.name();
    if (!avoid.count(hint)) return hint;
    for (int k = 1;; ++k) {
      std::string c = hint + std::to_string(k);
      if (!avoid.count(c)) return c;
    }
  }

  std::string world(const WorldExpr& w) const {
    return w.to_string([this](std::uint32_t i) { return bound_name(i); });
  }

  std::string term(const Term& t) const {
    return t.to_string([this](std::uint32_t i) { return bound_name(i); });
  }

  std::string print(const Formula& f, Ctx ctx, int outer = 0) {
    const FormulaNode* n = f.node();
    Conn c = n->conn;
    if (is_binder(c)) {
      std::string nm = choose_name(f);
      stack.push_back(nm);
      std::string s = std::string(binder_keyword(c)) + " " + nm + ". " + print(n->a, Ctx::Body);
      stack.pop_back();
      return (ctx == Ctx::Top || ctx == Ctx::Body) ? s : "(" + s + ")";
    }
    switch (c) {
      case Conn::Atom: {
        if (n->args.empty()) return n->name;
        std::string s = n->name + "(";
        for (std::size_t i = 0; i < n->args.size(); ++i) {
          if (i) s += ",";
          s += term(n->args[i]);
        }
        return s + ")";
      }
      case Conn::One: return "1";
      case Conn::Zero: return "0";
      case Conn::Top: return "top";
      case Conn::Slot: return n->name + "[" + n->aux + "]";
      case Conn::At: return "(" + print(n->a, Ctx::AtOp) + " @@ " + world(n->world) + ")";
      case Conn::Bang: {
        std::string s = "!" + print(n->a, Ctx::BangOp);
        return ctx == Ctx::AtOp ? "(" + s + ")" : s;
      }
      default: break;
    }
    int p = precedence(c);
    std::string s = print(n->a, Ctx::Left, p) + op_text(c) + print(n->b, Ctx::Right, p);
    bool paren = ctx == Ctx::AtOp || ctx == Ctx::BangOp || (ctx == Ctx::Left && outer >= p) ||
                 (ctx == Ctx::Right && outer > p);
    return paren ? "(" + s + ")" : s;
  }
};

}  // namespace

std::set<std::uint32_t> loose_indices(const Formula& f) {
  std::set<std::uint32_t> out;
  loose_rec(f, 0, out);
  return out;
}

std::string to_string(const Formula& f) {
  if (!f.valid()) return "<null>";
  Printer p;
  return p.print(f, Ctx::Top);
}

bool operator==(const Judgement& a, const Judgement& b) {
  return a.world == b.world && alpha_equal(a.formula, b.formula);
}

std::string to_string(const Judgement& j) { return to_string(j.formula) + " @ " + j.world.to_string(); }

namespace {

std::string zone(const std::vector<Judgement>& js) {
  if (js.empty()) return ".";
  std::string s;
  for (std::size_t i = 0; i < js.size(); ++i) {
    if (i) s += ", ";
    s += to_string(js[i]);
  }
  return s;
}

}  // namespace

std::string to_string(const Sequent& s) { return zone(s.gamma) + " ; " + zone(s.delta) + " |- " + to_string(s.goal); }

bool multiset_equal(const std::vector<Judgement>& a, const std::vector<Judgement>& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& x : a) {
    bool found = false;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (!used[i] && x == b[i]) {
        used[i] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

void collect_names(const Judgement& j, FreeNames& out) {
  collect_names(j.formula, out);
  collect_names(j.world, out);
}

void collect_names(const Sequent& s, FreeNames& out) {
  for (const auto& j : s.gamma) collect_names(j, out);
  for (const auto& j : s.delta) collect_names(j, out);
  collect_names(s.goal, out);
}

Judgement resolve(const Judgement& j, const WorldBindings& wb, const TermBindings& tb) {
  return {resolve(j.formula, wb, tb), resolve(j.world, wb)};
}

Sequent resolve(const Sequent& s, const WorldBindings& wb, const TermBindings& tb) {
  Sequent out;
  out.gamma.reserve(s.gamma.size());
  out.delta.reserve(s.delta.size());
  for (const auto& j : s.gamma) out.gamma.push_back(resolve(j, wb, tb));
  for (const auto& j : s.delta) out.delta.push_back(resolve(j, wb, tb));
  out.goal = resolve(s.goal, wb, tb);
  return out;
}

}  // namespace hyll
