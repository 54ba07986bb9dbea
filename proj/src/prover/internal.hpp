#ifndef HYLL_PROVER_INTERNAL_HPP
#define HYLL_PROVER_INTERNAL_HPP

#include <optional>

#include "hyll/prover.hpp"

namespace hyll {

struct SearchTree {
  struct Node {
    Sequent conclusion;
    Instance inst;
    std::vector<int> kids;
  };
  std::vector<Node> nodes;  // nodes[0] is the root
};

// Bounded backward search. Bindings made by a successful search stay in ms.
std::optional<SearchTree> search(const Sequent& goal, MetaStore& ms, const ProverContext& ctx, const AutoOptions& opt);

}  // namespace hyll

#endif
