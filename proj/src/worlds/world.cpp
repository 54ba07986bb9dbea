#include "hyll/world.hpp"

#include <algorithm>
#include <functional>

namespace hyll {

int compare(const WorldVar& a, const WorldVar& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  if (a.kind == VarKind::Bound) {
    if (a.index == b.index) return 0;
    return a.index > b.index ? -1 : 1;
  }
  return a.name.compare(b.name) < 0 ? -1 : (a.name == b.name ? 0 : 1);
}

namespace {

int compare_sub(const SatSub& a, const SatSub& b) {
  int c = compare(a.left, b.left);
  if (c != 0) return c;
  return compare(a.right, b.right);
}

}  // namespace

int compare(const WorldExpr& a, const WorldExpr& b) {
  if (a.offset_ != b.offset_) return a.offset_ < b.offset_ ? -1 : 1;
  std::size_t n = std::min(a.vars_.size(), b.vars_.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(a.vars_[i].first, b.vars_[i].first);
    if (c != 0) return c;
    if (a.vars_[i].second != b.vars_[i].second) return a.vars_[i].second < b.vars_[i].second ? -1 : 1;
  }
  if (a.vars_.size() != b.vars_.size()) return a.vars_.size() < b.vars_.size() ? -1 : 1;
  n = std::min(a.subs_.size(), b.subs_.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare_sub(*a.subs_[i], *b.subs_[i]);
    if (c != 0) return c;
  }
  if (a.subs_.size() != b.subs_.size()) return a.subs_.size() < b.subs_.size() ? -1 : 1;
  return 0;
}

WorldExpr WorldExpr::nat(std::uint64_t n) {
  WorldExpr w;
  w.offset_ = n;
  return w;
}

WorldExpr WorldExpr::var(const WorldVar& v) {
  WorldExpr w;
  w.vars_.emplace_back(v, 1);
  return w;
}

void WorldExpr::add_var(const WorldVar& v, std::uint32_t count) {
  if (count == 0) return;
  auto it = std::lower_bound(vars_.begin(), vars_.end(), v,
                             [](const auto& p, const WorldVar& x) { return compare(p.first, x) < 0; });
  if (it != vars_.end() && compare(it->first, v) == 0) {
    it->second += count;
  } else {
    vars_.insert(it, {v, count});
  }
}

void WorldExpr::add_sub(std::shared_ptr<const SatSub> s) {
  auto it = std::lower_bound(subs_.begin(), subs_.end(), s,
                             [](const auto& p, const auto& x) { return compare_sub(*p, *x) < 0; });
  subs_.insert(it, std::move(s));
}

std::optional<WorldVar> WorldExpr::as_single_var() const {
  if (offset_ == 0 && subs_.empty() && vars_.size() == 1 && vars_[0].second == 1) return vars_[0].first;
  return std::nullopt;
}

bool WorldExpr::has_metas() const {
  for (const auto& [v, c] : vars_)
    if (v.kind == VarKind::Meta) return true;
  for (const auto& s : subs_)
    if (s->left.has_metas() || s->right.has_metas()) return true;
  return false;
}

bool WorldExpr::has_bound() const {
  for (const auto& [v, c] : vars_)
    if (v.kind == VarKind::Bound) return true;
  for (const auto& s : subs_)
    if (s->left.has_bound() || s->right.has_bound()) return true;
  return false;
}

bool WorldExpr::mentions(const WorldVar& v) const {
  for (const auto& [x, c] : vars_)
    if (compare(x, v) == 0) return true;
  for (const auto& s : subs_)
    if (s->left.mentions(v) || s->right.mentions(v)) return true;
  return false;
}

void WorldExpr::collect(std::set<WorldVar>& out) const {
  for (const auto& [x, c] : vars_) out.insert(x);
  for (const auto& s : subs_) {
    s->left.collect(out);
    s->right.collect(out);
  }
}

template <typename F>
WorldExpr WorldExpr::map_vars(F&& f) const {
  WorldExpr out = nat(offset_);
  for (const auto& [v, c] : vars_) {
    std::optional<WorldExpr> r = f(v);
    if (!r) {
      out.add_var(v, c);
    } else {
      for (std::uint32_t i = 0; i < c; ++i) out = compose(out, *r);
    }
  }
  for (const auto& s : subs_) {
    out = compose(out, saturating_sub(s->left.map_vars(f), s->right.map_vars(f)));
  }
  return out;
}

WorldExpr WorldExpr::substitute(const WorldVar& v, const WorldExpr& r) const {
  if (!mentions(v)) return *this;
  return map_vars([&](const WorldVar& x) -> std::optional<WorldExpr> {
    if (compare(x, v) == 0) return r;
    return std::nullopt;
  });
}

WorldExpr WorldExpr::open(std::uint32_t depth, const WorldExpr& r) const {
  if (!has_bound()) return *this;
  return map_vars([&](const WorldVar& x) -> std::optional<WorldExpr> {
    if (x.kind != VarKind::Bound) return std::nullopt;
    if (x.index == depth) return r.shift(0, depth);
    if (x.index > depth) return WorldExpr::bound(x.index - 1);
    return std::nullopt;
  });
}

WorldExpr WorldExpr::close(const WorldVar& v, std::uint32_t depth) const {
  return map_vars([&](const WorldVar& x) -> std::optional<WorldExpr> {
    if (compare(x, v) == 0) return WorldExpr::bound(depth);
    if (x.kind == VarKind::Bound && x.index >= depth) return WorldExpr::bound(x.index + 1);
    return std::nullopt;
  });
}

WorldExpr WorldExpr::shift(std::uint32_t cutoff, std::uint32_t k) const {
  if (k == 0 || !has_bound()) return *this;
  return map_vars([&](const WorldVar& x) -> std::optional<WorldExpr> {
    if (x.kind == VarKind::Bound && x.index >= cutoff) return WorldExpr::bound(x.index + k);
    return std::nullopt;
  });
}

WorldExpr compose(const WorldExpr& a, const WorldExpr& b) {
  WorldExpr out = a;
  out.offset_ += b.offset_;
  for (const auto& [v, c] : b.vars_) out.add_var(v, c);
  for (const auto& s : b.subs_) out.add_sub(s);
  return out;
}

WorldExpr saturating_sub(const WorldExpr& a, const WorldExpr& b) {
  WorldExpr l = a;
  WorldExpr r = b;
  // (x + k) - (x + m) = k - m holds in N, so common parts cancel.
  std::uint64_t m = std::min(l.offset_, r.offset_);
  l.offset_ -= m;
  r.offset_ -= m;
  for (auto& [v, c] : l.vars_) {
    for (auto& [w, d] : r.vars_) {
      if (compare(v, w) == 0) {
        std::uint32_t k = std::min(c, d);
        c -= k;
        d -= k;
      }
    }
  }
  auto drop_zero = [](auto& vs) {
    vs.erase(std::remove_if(vs.begin(), vs.end(), [](const auto& p) { return p.second == 0; }), vs.end());
  };
  drop_zero(l.vars_);
  drop_zero(r.vars_);
  for (std::size_t i = 0; i < l.subs_.size();) {
    auto it = std::find_if(r.subs_.begin(), r.subs_.end(),
                           [&](const auto& s) { return compare_sub(*s, *l.subs_[i]) == 0; });
    if (it != r.subs_.end()) {
      r.subs_.erase(it);
      l.subs_.erase(l.subs_.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  if (r.is_iota()) return l;
  if (l.is_iota()) return WorldExpr::iota();
  WorldExpr out;
  out.subs_.push_back(std::make_shared<const SatSub>(SatSub{l, r}));
  return out;
}

std::string WorldExpr::to_string() const {
  return to_string([](std::uint32_t i) { return "#" + std::to_string(i); });
}

std::string WorldExpr::to_string(const std::function<std::string(std::uint32_t)>& bound_name) const {
  std::vector<std::string> parts;
  for (const auto& [v, c] : vars_) {
    std::string s;
    switch (v.kind) {
      case VarKind::Free: s = v.name; break;
      case VarKind::Meta: s = "?" + v.name; break;
      case VarKind::Bound: s = bound_name(v.index); break;
    }
    for (std::uint32_t i = 0; i < c; ++i) parts.push_back(s);
  }
  auto operand = [&](const WorldExpr& e) {
    std::string s = e.to_string(bound_name);
    bool lone_sub = e.vars_.empty() && e.offset_ == 0 && e.subs_.size() == 1;
    return lone_sub ? "(" + s + ")" : s;
  };
  bool lone = vars_.empty() && offset_ == 0 && subs_.size() == 1;
  for (const auto& s : subs_) {
    std::string body = operand(s->left) + " - " + operand(s->right);
    parts.push_back(lone ? body : "(" + body + ")");
  }
  if (offset_ != 0 || parts.empty()) parts.push_back(std::to_string(offset_));
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ".";
    out += parts[i];
  }
  return out;
}

std::optional<WorldExpr> reachable_witness(const WorldExpr& u, const WorldExpr& w) {
  if (!u.is_ground() || !w.is_ground())
    throw Error(ErrorKind::NotGround, "reachability needs ground worlds, got " + u.to_string() + " and " + w.to_string());
  if (u.offset() > w.offset()) return std::nullopt;
  return WorldExpr::nat(w.offset() - u.offset());
}

WorldExpr resolve(const WorldExpr& w, const WorldBindings& b) {
  if (b.empty() || !w.has_metas()) return w;
  WorldExpr cur = w;
  for (int guard = 0; guard < 1000; ++guard) {
    std::set<WorldVar> vs;
    cur.collect(vs);
    bool changed = false;
    for (const auto& v : vs) {
      if (v.kind != VarKind::Meta) continue;
      auto it = b.find(v.name);
      if (it == b.end()) continue;
      cur = cur.substitute(v, it->second);
      changed = true;
    }
    if (!changed) return cur;
  }
  return cur;
}

namespace {

// Linear form: coefficient per atom (variable or opaque pending subtraction).
struct Linear {
  std::vector<std::pair<WorldVar, std::int64_t>> vars;
  std::vector<std::pair<std::shared_ptr<const SatSub>, std::int64_t>> subs;
  std::int64_t offset = 0;

  void add(const WorldExpr& e, std::int64_t sign) {
    offset += sign * static_cast<std::int64_t>(e.offset());
    for (const auto& [v, c] : e.vars()) {
      auto it = std::find_if(vars.begin(), vars.end(), [&](const auto& p) { return compare(p.first, v) == 0; });
      if (it == vars.end()) vars.emplace_back(v, sign * c);
      else it->second += sign * c;
    }
    for (const auto& s : e.subs()) {
      auto it = std::find_if(subs.begin(), subs.end(), [&](const auto& p) {
        return compare(p.first->left, s->left) == 0 && compare(p.first->right, s->right) == 0;
      });
      if (it == subs.end()) subs.emplace_back(s, sign);
      else it->second += sign;
    }
  }
};

}  // namespace

WorldUnifyResult unify_worlds(const WorldExpr& a0, const WorldExpr& b0, const WorldBindings& current) {
  WorldUnifyResult res;
  WorldExpr a = resolve(a0, current);
  WorldExpr b = resolve(b0, current);
  if (a == b) {
    res.ok = true;
    return res;
  }
  auto bind_single = [&](const WorldExpr& x, const WorldExpr& y) {
    auto v = x.as_single_var();
    if (v && v->kind == VarKind::Meta && !y.mentions(*v)) {
      res.ok = true;
      res.added[v->name] = y;
      return true;
    }
    return false;
  };
  if (bind_single(a, b) || bind_single(b, a)) return res;

  Linear lin;
  lin.add(a, 1);
  lin.add(b, -1);
  std::vector<std::pair<WorldVar, std::int64_t>> unknowns;
  for (const auto& [v, c] : lin.vars)
    if (v.kind == VarKind::Meta && c != 0) unknowns.emplace_back(v, c);
  if (unknowns.size() > 1) {
    res.failure = UnifyFailure::NonLinear;
    return res;
  }
  if (unknowns.empty()) {
    res.failure = UnifyFailure::NoSolution;
    return res;
  }
  const auto& [m, c] = unknowns[0];
  // c*m + rest = 0, so m = -rest / c, which must be a natural combination.
  auto solve = [&](std::int64_t k, std::int64_t& out) {
    if ((-k) % c != 0) return false;
    out = (-k) / c;
    return out >= 0;
  };
  WorldExpr sol;
  std::int64_t q = 0;
  if (!solve(lin.offset, q)) return res;
  sol = WorldExpr::nat(static_cast<std::uint64_t>(q));
  for (const auto& [v, k] : lin.vars) {
    if (compare(v, m) == 0 || k == 0) continue;
    if (!solve(k, q)) return res;
    for (std::int64_t i = 0; i < q; ++i) sol = compose(sol, WorldExpr::var(v));
  }
  for (const auto& [s, k] : lin.subs) {
    if (k == 0) continue;
    if (!solve(k, q)) return res;
    for (std::int64_t i = 0; i < q; ++i) sol = compose(sol, saturating_sub(s->left, s->right));
  }
  if (sol.mentions(m)) return res;
  res.ok = true;
  res.added[m.name] = sol;
  return res;
}

}  // namespace hyll
