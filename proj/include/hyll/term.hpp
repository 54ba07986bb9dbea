#ifndef HYLL_TERM_HPP
#define HYLL_TERM_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace hyll {

// First-order terms. Var is a free (eigen)variable, Meta a unification
// variable, Bound a de Bruijn index shared with world binders.
enum class TermKind : std::uint8_t { Var, Const, App, Meta, Bound };

class Term {
 public:
  Term() = default;
  static Term var(std::string n) { return Term(TermKind::Var, std::move(n)); }
  static Term constant(std::string n) { return Term(TermKind::Const, std::move(n)); }
  static Term meta(std::string n) { return Term(TermKind::Meta, std::move(n)); }
  static Term bound(std::uint32_t i) {
    Term t(TermKind::Bound, {});
    t.index_ = i;
    return t;
  }
  static Term app(std::string f, std::vector<Term> args) {
    Term t(TermKind::App, std::move(f));
    t.args_ = std::move(args);
    return t;
  }

  TermKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  std::uint32_t index() const { return index_; }
  const std::vector<Term>& args() const { return args_; }

  bool has_metas() const;
  bool has_bound() const;
  bool mentions(TermKind k, const std::string& n) const;
  void collect(std::set<std::string>& vars, std::set<std::string>& metas, std::set<std::string>& consts) const;

  Term substitute(TermKind k, const std::string& n, const Term& r) const;
  Term open(std::uint32_t depth, const Term& r) const;
  Term close_var(const std::string& n, std::uint32_t depth) const;
  Term shift(std::uint32_t cutoff, std::uint32_t k) const;
  void loose(std::uint32_t depth, std::set<std::uint32_t>& out) const;

  std::string to_string(const std::function<std::string(std::uint32_t)>& bound_name) const;
  std::string to_string() const;

 private:
  Term(TermKind k, std::string n) : kind_(k), name_(std::move(n)) {}
  TermKind kind_ = TermKind::Const;
  std::string name_;
  std::uint32_t index_ = 0;
  std::vector<Term> args_;
};

int compare(const Term& a, const Term& b);
inline bool operator==(const Term& a, const Term& b) { return compare(a, b) == 0; }
inline bool operator!=(const Term& a, const Term& b) { return compare(a, b) != 0; }

using TermBindings = std::map<std::string, Term>;
Term resolve(const Term& t, const TermBindings& b);

}  // namespace hyll

#endif
