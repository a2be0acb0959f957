#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace fixtures;

namespace {

std::vector<GroupPtr> zoo() { return {h1(), h1xR(), nonstrat5(), engel(), h2(), free23(), abelian(3)}; }

FiberForm theta(std::size_t n, std::vector<int> idx, Rational c = 1) {
  return FiberForm::single(n, mask_of(idx), c);
}

}  // namespace

TEST_CASE("wedge signs") {
  CHECK(wedge_sign(mask_of({0}), mask_of({1})) == 1);
  CHECK(wedge_sign(mask_of({1}), mask_of({0})) == -1);
  CHECK(wedge_sign(mask_of({0, 2}), mask_of({1})) == -1);
  CHECK(wedge_sign(mask_of({0}), mask_of({0})) == 0);
  CHECK(masks_of_degree(4, 2).size() == 6);
  CHECK(mask_to_string(mask_of({0, 2}), {"θ1", "θ2", "τ"}) == "θ1∧τ");
  CHECK(mask_to_string(0, {}) == "1");
}

TEST_CASE("Heisenberg fiber operators") {
  auto g = h1();
  const auto& fc = g->fiber();
  CHECK(fc.d0(theta(3, {2})) == theta(3, {0, 1}, -1));
  CHECK(fc.d0(theta(3, {0})).is_zero());
  CHECK(fc.delta0(theta(3, {0, 1})) == theta(3, {2}, -1));
  CHECK(fc.d0_pinv(theta(3, {0, 1})) == theta(3, {2}, -1));
  CHECK(fc.pi0(theta(3, {2})).is_zero());
  CHECK(fc.pi0(theta(3, {0})) == theta(3, {0}));
  CHECK(g->to_string(fc.d0(theta(3, {2}))) == "-θ1∧θ2");

  auto h1d = fc.hodge_decompose(1, 1);
  CHECK(h1d.harmonic.dimension() == 2);
  CHECK(fc.hodge_decompose(1, 2).harmonic.dimension() == 0);
  CHECK(fc.hodge_decompose(2, 2).harmonic.dimension() == 0);
  CHECK(fc.hodge_decompose(2, 3).harmonic.dimension() == 2);
  CHECK(non_splitting(fc));
  CHECK_FALSE(non_splitting(h1xR()->fiber()));
}

TEST_CASE("property: d0 squares to zero and is an antiderivation") {
  Rng rng(21);
  for (const auto& g : zoo()) {
    const auto& fc = g->fiber();
    std::size_t n = g->dim();
    for (int it = 0; it < 10; ++it) {
      int k = rng.uniform(0, static_cast<int>(n) - 1);
      auto a = rng.fiber_form(n, k);
      CHECK(fc.d0(fc.d0(a)).is_zero());
      int l = rng.uniform(0, static_cast<int>(n) - k);
      auto b = rng.fiber_form(n, l);
      auto lhs = fc.d0(wedge(a, b));
      auto rhs = wedge(fc.d0(a), b);
      auto second = wedge(a, fc.d0(b));
      if (k % 2) second *= -1;
      rhs += second;
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("property: delta0 is the Hodge adjoint of d0") {
  Rng rng(22);
  for (const auto& g : zoo()) {
    const auto& fc = g->fiber();
    int n = static_cast<int>(g->dim());
    for (int k = 1; k <= n; ++k)
      for (int it = 0; it < 3; ++it) {
        auto a = rng.fiber_form(n, k);
        auto lhs = fc.delta0(a);
        auto rhs = fc.star(fc.d0(fc.star(a)));
        if ((n * (k - 1) + 1) % 2) rhs *= -1;
        CHECK(lhs == rhs);
        auto ss = fc.star(fc.star(a));
        if ((k * (n - k)) % 2) ss *= -1;
        CHECK(ss == a);
      }
  }
}

TEST_CASE("property: Hodge decomposition and the Rumin projector") {
  Rng rng(23);
  for (const auto& g : zoo()) {
    const auto& fc = g->fiber();
    int n = static_cast<int>(g->dim());
    for (int k = 0; k <= n; ++k)
      for (int p : fc.weights_in_degree(k)) {
        auto h = fc.hodge_decompose(k, p);
        CHECK(h.image_d0.dimension() + h.harmonic.dimension() + h.image_delta0.dimension() ==
              h.basis.size());
        CHECK(h.image_d0.intersect(h.harmonic).dimension() == 0);
        for (const auto& v : h.harmonic.basis()) {
          auto f = fc.from_vector(v, k, p);
          CHECK(fc.d0(f).is_zero());
          CHECK(fc.delta0(f).is_zero());
          CHECK(fc.box0(f).is_zero());
          CHECK(fc.pi0(f) == f);
        }
      }
    for (int it = 0; it < 10; ++it) {
      int k = rng.uniform(0, n);
      auto a = rng.fiber_form(n, k);
      auto p = fc.pi0(a);
      CHECK(fc.pi0(p) == p);
      CHECK(fc.d0(p).is_zero());
      CHECK(fc.delta0(p).is_zero());
      CHECK(fc.d0(fc.d0_pinv(fc.d0(a))) == fc.d0(a));
      CHECK(fc.d0_pinv(fc.d0(fc.d0_pinv(a))) == fc.d0_pinv(a));
      // every form splits as Pi0 a + d0 d0^-1 a + d0^-1 d0 a
      auto rest = fc.d0(fc.d0_pinv(a));
      rest += fc.d0_pinv(fc.d0(a));
      rest += p;
      CHECK(rest == a);
      CHECK(fc.box0(fc.d0(a)) == fc.d0(fc.box0(a)));
    }
  }
}

TEST_CASE("property: d0 preserves weight") {
  Rng rng(24);
  for (const auto& g : zoo()) {
    const auto& fc = g->fiber();
    int n = static_cast<int>(g->dim());
    for (int it = 0; it < 10; ++it) {
      int k = rng.uniform(0, n - 1);
      auto masks = masks_of_degree(n, k);
      Mask m = masks[rng.uniform(0, static_cast<int>(masks.size()) - 1)];
      int w = mask_weight(m, g->weights());
      auto image = fc.d0_basis(m);
      for (const auto& [mm, c] : image.terms()) CHECK(mask_weight(mm, g->weights()) == w);
    }
  }
}
