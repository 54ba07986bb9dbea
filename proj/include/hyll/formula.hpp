#ifndef HYLL_FORMULA_HPP
#define HYLL_FORMULA_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "hyll/term.hpp"
#include "hyll/world.hpp"

namespace hyll {

enum class Conn : std::uint8_t {
  Atom, Tensor, One, Limp, With, Top, Oplus, Zero, Bang,
  ForallT, ExistsT, ForallW, ExistsW, At, Down,
  // Rule-indexed placeholder such as fireable[r]; only the prover sees it.
  Slot,
};

bool is_binder(Conn c);
bool is_world_binder(Conn c);
const char* conn_name(Conn c);

struct FormulaNode;

// Immutable, shared formula. Binders are nameless; the stored name is only a
// printing hint, so structural equality is alpha-equivalence.
class Formula {
 public:
  Formula() = default;

  static Formula atom(std::string pred, std::vector<Term> args = {});
  static Formula one();
  static Formula top();
  static Formula zero();
  static Formula tensor(Formula a, Formula b);
  static Formula limp(Formula a, Formula b);
  static Formula with(Formula a, Formula b);
  static Formula oplus(Formula a, Formula b);
  static Formula bang(Formula a);
  static Formula at(Formula a, WorldExpr w);
  static Formula slot(std::string family, std::string var);
  // Raw binder node; body already uses Bound(0) for the bound variable.
  static Formula binder(Conn c, std::string hint, Formula body);
  // Binder that abstracts the free term variable (Var) named v in body.
  static Formula bind_term(Conn c, const std::string& hint, const std::string& v, const Formula& body);
  // Binder that abstracts the free world variable named v in body.
  static Formula bind_world(Conn c, const std::string& hint, const std::string& v, const Formula& body);

  bool valid() const { return node_ != nullptr; }
  Conn conn() const;
  const std::string& name() const;  // predicate, binder hint or slot family
  const std::string& slot_var() const;
  const std::vector<Term>& args() const;
  const WorldExpr& world() const;
  const Formula& left() const;   // first operand, or body of unary nodes
  const Formula& right() const;
  const Formula& body() const { return left(); }
  std::size_t hash() const;
  std::size_t size() const;

  bool has_metas() const;
  bool has_slots() const;
  bool has_loose() const;

  // Instantiate the bound variable of a binder node.
  Formula instantiate(const Term& t) const;
  Formula instantiate(const WorldExpr& w) const;

  const FormulaNode* node() const { return node_.get(); }

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const FormulaNode> node_;
  friend Formula make_node(FormulaNode n);
};

struct FormulaNode {
  Conn conn = Conn::One;
  std::string name;
  std::string aux;
  std::vector<Term> args;
  WorldExpr world;
  Formula a;
  Formula b;
  std::size_t hash = 0;
  std::size_t size = 1;
  bool metas = false;
  bool slots = false;
  bool loose = false;
  std::uint32_t loose_max = 0;
};

Formula make_node(FormulaNode n);

bool alpha_equal(const Formula& a, const Formula& b);
inline bool operator==(const Formula& a, const Formula& b) { return alpha_equal(a, b); }
inline bool operator!=(const Formula& a, const Formula& b) { return !alpha_equal(a, b); }

// Generic traversals.
Formula open(const Formula& f, std::uint32_t depth, const Term* t, const WorldExpr* w);
Formula close_term(const Formula& f, const std::string& v, std::uint32_t depth);
Formula close_world(const Formula& f, const WorldVar& v, std::uint32_t depth);
Formula substitute_world(const Formula& f, const WorldVar& v, const WorldExpr& r);
Formula substitute_term(const Formula& f, TermKind k, const std::string& n, const Term& r);
Formula resolve(const Formula& f, const WorldBindings& wb, const TermBindings& tb);

struct FreeNames {
  std::set<std::string> world_free;
  std::set<std::string> world_metas;
  std::set<std::string> term_vars;
  std::set<std::string> term_metas;
  std::set<std::string> consts;
  std::set<std::string> preds;
};
void collect_names(const Formula& f, FreeNames& out);
void collect_names(const WorldExpr& w, FreeNames& out);
// Loose de Bruijn indices of f, relative to its root.
std::set<std::uint32_t> loose_indices(const Formula& f);

std::string to_string(const Formula& f);

struct Judgement {
  Formula formula;
  WorldExpr world;
};

bool operator==(const Judgement& a, const Judgement& b);
inline bool operator!=(const Judgement& a, const Judgement& b) { return !(a == b); }
std::string to_string(const Judgement& j);

struct Sequent {
  std::vector<Judgement> gamma;
  std::vector<Judgement> delta;
  Judgement goal;
};

std::string to_string(const Sequent& s);
bool multiset_equal(const std::vector<Judgement>& a, const std::vector<Judgement>& b);
void collect_names(const Judgement& j, FreeNames& out);
void collect_names(const Sequent& s, FreeNames& out);

Judgement resolve(const Judgement& j, const WorldBindings& wb, const TermBindings& tb);
Sequent resolve(const Sequent& s, const WorldBindings& wb, const TermBindings& tb);

// Predicate arities.
using Signature = std::map<std::string, int>;

}  // namespace hyll

#endif
