#ifndef HYLL_TESTS_FORMULA_GEN_HPP
#define HYLL_TESTS_FORMULA_GEN_HPP

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hyll/formula.hpp"

namespace hyll {

// Closed, meta-free formulas over a small vocabulary, built in named form and
// then abstracted.
struct ClosedGen {
  std::mt19937 rng;
  std::vector<std::pair<std::string, bool>> scope;
  int counter = 0;

  explicit ClosedGen(unsigned seed) : rng(seed) {}
  int roll(int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); }

  Term term() {
    std::vector<std::string> vs;
    for (const auto& [n, world] : scope)
      if (!world) vs.push_back(n);
    if (!vs.empty() && roll(2)) return Term::var(vs[static_cast<std::size_t>(roll(static_cast<int>(vs.size())))]);
    return Term::constant(roll(2) ? "a" : "b");
  }

  WorldExpr world() {
    WorldExpr w = WorldExpr::nat(static_cast<std::uint64_t>(roll(3)));
    std::vector<std::string> ws;
    for (const auto& [n, isw] : scope)
      if (isw) ws.push_back(n);
    if (!ws.empty() && roll(3)) w = compose(w, WorldExpr::free(ws[static_cast<std::size_t>(roll(static_cast<int>(ws.size())))]));
    return w;
  }

  Formula formula(int depth) {
    switch (roll(depth <= 0 ? 3 : 16)) {
      case 0: return Formula::atom("p");
      case 1: return Formula::atom("q", {term()});
      case 2: {
        int k = roll(3);
        return k == 0 ? Formula::one() : k == 1 ? Formula::zero() : Formula::top();
      }
      case 3: return Formula::tensor(formula(depth - 1), formula(depth - 1));
      case 4: return Formula::limp(formula(depth - 1), formula(depth - 1));
      case 5: return Formula::with(formula(depth - 1), formula(depth - 1));
      case 6: return Formula::oplus(formula(depth - 1), formula(depth - 1));
      case 7: return Formula::bang(formula(depth - 1));
      case 8: return Formula::at(formula(depth - 1), world());
      case 9:
      case 10: {
        Conn c = roll(2) ? Conn::ForallT : Conn::ExistsT;
        std::string x = "x" + std::to_string(counter++);
        scope.emplace_back(x, false);
        Formula body = formula(depth - 1);
        scope.pop_back();
        return Formula::bind_term(c, "x", x, body);
      }
      case 11:
      case 12:
      case 13: {
        int k = roll(3);
        Conn c = k == 0 ? Conn::ForallW : k == 1 ? Conn::ExistsW : Conn::Down;
        std::string u = "u" + std::to_string(counter++);
        scope.emplace_back(u, true);
        Formula body = formula(depth - 1);
        scope.pop_back();
        return Formula::bind_world(c, "u", u, body);
      }
      default: return Formula::atom("q", {term()});
    }
  }

  Formula sized(std::size_t limit) {
    for (;;) {
      Formula f = formula(4);
      if (f.size() <= limit) return f;
    }
  }
};

}  // namespace hyll

#endif
