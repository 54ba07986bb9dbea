#ifndef HYLL_WORLD_HPP
#define HYLL_WORLD_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hyll/error.hpp"

namespace hyll {

// Variables inside a world expression. Bound variables are de Bruijn indices
// counted over all enclosing binders of a formula; Free and Meta carry names.
enum class VarKind : std::uint8_t { Free, Meta, Bound };

struct WorldVar {
  VarKind kind = VarKind::Free;
  std::string name;
  std::uint32_t index = 0;

  static WorldVar free(std::string n) { return {VarKind::Free, std::move(n), 0}; }
  static WorldVar meta(std::string n) { return {VarKind::Meta, std::move(n), 0}; }
  static WorldVar bound(std::uint32_t i) { return {VarKind::Bound, {}, i}; }
};

// Canonical order: Free < Meta < Bound; names ascending; bound indices
// descending so that outer binders print first.
int compare(const WorldVar& a, const WorldVar& b);
inline bool operator<(const WorldVar& a, const WorldVar& b) { return compare(a, b) < 0; }
inline bool operator==(const WorldVar& a, const WorldVar& b) { return compare(a, b) == 0; }

struct SatSub;

// Element of the monoid <N,+,0> written as offset + sum of variables + sum of
// pending saturating subtractions. Always kept in canonical form.
class WorldExpr {
 public:
  WorldExpr() = default;
  static WorldExpr iota() { return {}; }
  static WorldExpr nat(std::uint64_t n);
  static WorldExpr var(const WorldVar& v);
  static WorldExpr free(const std::string& n) { return var(WorldVar::free(n)); }
  static WorldExpr meta(const std::string& n) { return var(WorldVar::meta(n)); }
  static WorldExpr bound(std::uint32_t i) { return var(WorldVar::bound(i)); }

  std::uint64_t offset() const { return offset_; }
  const std::vector<std::pair<WorldVar, std::uint32_t>>& vars() const { return vars_; }
  const std::vector<std::shared_ptr<const SatSub>>& subs() const { return subs_; }

  bool is_ground() const { return vars_.empty() && subs_.empty(); }
  bool is_iota() const { return is_ground() && offset_ == 0; }
  // True when the expression is exactly one variable with multiplicity one.
  std::optional<WorldVar> as_single_var() const;

  bool has_metas() const;
  bool has_bound() const;
  bool mentions(const WorldVar& v) const;
  void collect(std::set<WorldVar>& out) const;

  // Replace every occurrence of v by r, re-canonicalising pending subtractions.
  WorldExpr substitute(const WorldVar& v, const WorldExpr& r) const;
  // Locally nameless helpers: open replaces Bound(depth) by r and lowers
  // higher indices; close turns the free variable v into Bound(depth).
  WorldExpr open(std::uint32_t depth, const WorldExpr& r) const;
  WorldExpr close(const WorldVar& v, std::uint32_t depth) const;
  // Add k to every bound index >= cutoff.
  WorldExpr shift(std::uint32_t cutoff, std::uint32_t k) const;

  std::string to_string() const;
  std::string to_string(const std::function<std::string(std::uint32_t)>& bound_name) const;

  friend WorldExpr compose(const WorldExpr& a, const WorldExpr& b);
  friend WorldExpr saturating_sub(const WorldExpr& a, const WorldExpr& b);
  friend int compare(const WorldExpr& a, const WorldExpr& b);

 private:
  std::uint64_t offset_ = 0;
  std::vector<std::pair<WorldVar, std::uint32_t>> vars_;
  std::vector<std::shared_ptr<const SatSub>> subs_;

  void add_var(const WorldVar& v, std::uint32_t count);
  void add_sub(std::shared_ptr<const SatSub> s);
  template <typename F>
  WorldExpr map_vars(F&& f) const;
};

struct SatSub {
  WorldExpr left;
  WorldExpr right;
};

WorldExpr compose(const WorldExpr& a, const WorldExpr& b);
WorldExpr saturating_sub(const WorldExpr& a, const WorldExpr& b);
int compare(const WorldExpr& a, const WorldExpr& b);
inline bool operator==(const WorldExpr& a, const WorldExpr& b) { return compare(a, b) == 0; }
inline bool operator!=(const WorldExpr& a, const WorldExpr& b) { return compare(a, b) != 0; }
inline bool operator<(const WorldExpr& a, const WorldExpr& b) { return compare(a, b) < 0; }

// v with u.v = w, for ground u and w.
std::optional<WorldExpr> reachable_witness(const WorldExpr& u, const WorldExpr& w);

using WorldBindings = std::map<std::string, WorldExpr>;

// Apply meta bindings until no bound meta remains.
WorldExpr resolve(const WorldExpr& w, const WorldBindings& b);

enum class UnifyFailure { NonLinear, NoSolution };

struct WorldUnifyResult {
  bool ok = false;
  UnifyFailure failure = UnifyFailure::NoSolution;
  WorldBindings added;  // new bindings, keyed by meta name
};

// Solve a = b for the metavariables of a and b modulo <N,+,0>. Pending
// subtractions are compared structurally.
WorldUnifyResult unify_worlds(const WorldExpr& a, const WorldExpr& b, const WorldBindings& current);

}  // namespace hyll

#endif
