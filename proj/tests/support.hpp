// Shared fixtures for the test binaries: hand-entered groups and small
// deterministic random generators.
#pragma once

#include <random>

#include "carnot/derham.hpp"

namespace fixtures {

using namespace carnot;

inline StratifiedAlgebra algebra(std::vector<std::string> labels, std::vector<int> weights,
                                 std::vector<std::tuple<int, int, int, int>> brackets) {
  StratifiedAlgebra a(std::move(labels), std::move(weights));
  for (auto [i, j, k, c] : brackets) {
    Vector v(a.dim());
    v[k] = c;
    Vector old = a.bracket(i, j);
    for (std::size_t t = 0; t < a.dim(); ++t) v[t] += old[t];
    a.set_bracket(i, j, v);
  }
  return a;
}

inline GroupPtr h1() {
  return make_group(algebra({"X1", "X2", "T"}, {1, 1, 2}, {{0, 1, 2, 1}}), "h1", {"x1", "x2", "t"},
                    {"θ1", "θ2", "τ"});
}

inline GroupPtr h1xR() {
  return make_group(algebra({"X1", "X2", "X3", "T"}, {1, 1, 1, 2}, {{0, 1, 3, 1}}), "h1xR",
                    {"x1", "x2", "x3", "t"}, {"θ1", "θ2", "θ3", "τ"});
}

// [X1,X2]=T, [X1,T]=W, [X2,X3]=W with the grading (1,1,2,2,3).
inline GroupPtr nonstrat5() {
  return make_group(
      algebra({"X1", "X2", "X3", "T", "W"}, {1, 1, 2, 2, 3}, {{0, 1, 3, 1}, {0, 3, 4, 1}, {1, 2, 4, 1}}),
      "nonstrat5", {"x1", "x2", "x3", "t", "w"}, {"θ1", "θ2", "θ3", "τ", "σ"});
}

inline GroupPtr abelian(int n) {
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i) labels.push_back("X" + std::to_string(i));
  return make_group(algebra(labels, std::vector<int>(n, 1), {}), "R" + std::to_string(n));
}

// Engel algebra: [X1,X2]=X3, [X1,X3]=X4, step 3.
inline GroupPtr engel() {
  return make_group(algebra({"X1", "X2", "X3", "X4"}, {1, 1, 2, 3}, {{0, 1, 2, 1}, {0, 2, 3, 1}}), "engel");
}

// Second Heisenberg algebra: [X1,X2]=[X3,X4]=T.
inline GroupPtr h2() {
  return make_group(algebra({"X1", "X2", "X3", "X4", "T"}, {1, 1, 1, 1, 2}, {{0, 1, 4, 1}, {2, 3, 4, 1}}), "h2");
}

// Free nilpotent algebra of rank 2 and step 3 (dimension 5).
inline GroupPtr free23() {
  return make_group(
      algebra({"X1", "X2", "Y", "Z1", "Z2"}, {1, 1, 2, 3, 3}, {{0, 1, 2, 1}, {0, 2, 3, 1}, {1, 2, 4, 1}}),
      "free23");
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

  Rational rational(int num = 5, int den = 3) {
    Rational q(uniform(-num, num), uniform(1, den));
    q.canonicalize();
    return q;
  }

  Rational nonzero_rational(int num = 5, int den = 3) {
    for (;;) {
      Rational q = rational(num, den);
      if (sgn(q) != 0) return q;
    }
  }

  // Random polynomial with up to `terms` monomials of weighted degree <= maxdeg.
  WeightedPoly poly(const RingPtr& ring, int maxdeg, int terms) {
    WeightedPoly p(ring);
    for (int t = 0; t < terms; ++t) {
      auto monos = monomials_of_weight(*ring, uniform(0, maxdeg));
      if (monos.empty()) continue;
      p.add_term(monos[uniform(0, static_cast<int>(monos.size()) - 1)], rational());
    }
    return p;
  }

  WeightedPoly homogeneous(const RingPtr& ring, int deg, int terms) {
    WeightedPoly p(ring);
    auto monos = monomials_of_weight(*ring, deg);
    if (monos.empty()) return p;
    for (int t = 0; t < terms; ++t)
      p.add_term(monos[uniform(0, static_cast<int>(monos.size()) - 1)], rational());
    return p;
  }

  FiberForm fiber_form(std::size_t n, int k) {
    FiberForm f(n, k);
    for (Mask m : masks_of_degree(n, k))
      if (uniform(0, 2) > 0) f.add(m, rational());
    return f;
  }

  PolyForm poly_form(const Group& g, int k, int maxdeg, int terms) {
    PolyForm f(g.dim(), k);
    auto masks = masks_of_degree(g.dim(), k);
    if (masks.empty()) return f;
    for (int t = 0; t < terms; ++t)
      f.add(masks[uniform(0, static_cast<int>(masks.size()) - 1)], poly(g.ring(), maxdeg, 2));
    return f;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace fixtures
