#ifndef HYLL_TRANSFORM_HPP
#define HYLL_TRANSFORM_HPP

#include "hyll/kernel.hpp"

namespace hyll {

// Extends gamma of every node by extra. Eigenvariables that clash with names
// in extra are renamed.
Derivation weaken(const Derivation& d, const std::vector<Judgement>& extra);

// Drops one copy of j from gamma. Throws NotDuplicated unless j occurs at
// least twice in the conclusion's gamma.
Derivation contract(const Derivation& d, const Judgement& j);

// Shifts the conclusion's linear zone and goal by the ground world u. The
// derivation must be anchored: some free world variable x has coefficient one
// in every delta and goal world, and occurs nowhere else in the conclusion.
// x is then replaced by x.u throughout. Throws RelocationUnsupported otherwise.
Derivation relocate(const Derivation& d, const WorldExpr& u);

// Renames the eigenvariable 'from' (term variable or free world variable) to
// 'to' throughout d.
Derivation rename_free(const Derivation& d, const std::string& from, const std::string& to, bool world);

}  // namespace hyll

#endif
