#include "hyll/term.hpp"

namespace hyll {

bool Term::has_metas() const {
  if (kind_ == TermKind::Meta) return true;
  for (const auto& a : args_)
    if (a.has_metas()) return true;
  return false;
}

bool Term::has_bound() const {
  if (kind_ == TermKind::Bound) return true;
  for (const auto& a : args_)
    if (a.has_bound()) return true;
  return false;
}

bool Term::mentions(TermKind k, const std::string& n) const {
  if (kind_ == k && name_ == n) return true;
  for (const auto& a : args_)
    if (a.mentions(k, n)) return true;
  return false;
}

void Term::collect(std::set<std::string>& vars, std::set<std::string>& metas, std::set<std::string>& consts) const {
  switch (kind_) {
    case TermKind::Var: vars.insert(name_); break;
    case TermKind::Meta: metas.insert(name_); break;
    case TermKind::Const: consts.insert(name_); break;
    default: break;
  }
  for (const auto& a : args_) a.collect(vars, metas, consts);
}

Term Term::substitute(TermKind k, const std::string& n, const Term& r) const {
  if (kind_ == k && name_ == n) return r;
  if (args_.empty()) return *this;
  Term t = *this;
  for (auto& a : t.args_) a = a.substitute(k, n, r);
  return t;
}

Term Term::open(std::uint32_t depth, const Term& r) const {
  if (kind_ == TermKind::Bound) {
    if (index_ == depth) return r.shift(0, depth);
    if (index_ > depth) return bound(index_ - 1);
    return *this;
  }
  if (args_.empty()) return *this;
  Term t = *this;
  for (auto& a : t.args_) a = a.open(depth, r);
  return t;
}

Term Term::close_var(const std::string& n, std::uint32_t depth) const {
  if (kind_ == TermKind::Var && name_ == n) return bound(depth);
  if (kind_ == TermKind::Bound) return index_ >= depth ? bound(index_ + 1) : *this;
  if (args_.empty()) return *this;
  Term t = *this;
  for (auto& a : t.args_) a = a.close_var(n, depth);
  return t;
}

Term Term::shift(std::uint32_t cutoff, std::uint32_t k) const {
  if (k == 0) return *this;
  if (kind_ == TermKind::Bound) return index_ >= cutoff ? bound(index_ + k) : *this;
  if (args_.empty()) return *this;
  Term t = *this;
  for (auto& a : t.args_) a = a.shift(cutoff, k);
  return t;
}

void Term::loose(std::uint32_t depth, std::set<std::uint32_t>& out) const {
  if (kind_ == TermKind::Bound && index_ >= depth) out.insert(index_ - depth);
  for (const auto& a : args_) a.loose(depth, out);
}

std::string Term::to_string(const std::function<std::string(std::uint32_t)>& bound_name) const {
  switch (kind_) {
    case TermKind::Var: return "'" + name_;
    case TermKind::Meta: return "?" + name_;
    case TermKind::Const: return name_;
    case TermKind::Bound: return bound_name(index_);
    case TermKind::App: {
      std::string s = name_ + "(";
      for (std::size_t i = 0; i < args_.size(); ++i) {
        if (i) s += ",";
        s += args_[i].to_string(bound_name);
      }
      return s + ")";
    }
  }
  return {};
}

std::string Term::to_string() const {
  return to_string([](std::uint32_t i) { return "#" + std::to_string(i); });
}

int compare(const Term& a, const Term& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (a.kind() == TermKind::Bound) {
    if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
    return 0;
  }
  int c = a.name().compare(b.name());
  if (c != 0) return c < 0 ? -1 : 1;
  if (a.args().size() != b.args().size()) return a.args().size() < b.args().size() ? -1 : 1;
  for (std::size_t i = 0; i < a.args().size(); ++i) {
    c = compare(a.args()[i], b.args()[i]);
    if (c != 0) return c;
  }
  return 0;
}

Term resolve(const Term& t, const TermBindings& b) {
  if (b.empty() || !t.has_metas()) return t;
  if (t.kind() == TermKind::Meta) {
    auto it = b.find(t.name());
    return it == b.end() ? t : resolve(it->second, b);
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(resolve(a, b));
  return Term::app(t.name(), std::move(args));
}

}  // namespace hyll
