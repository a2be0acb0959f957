#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace fixtures;

namespace {

std::vector<GroupPtr> zoo() { return {h1(), h1xR(), nonstrat5(), engel(), h2(), free23()}; }

PolyForm instantiate(const Group& g, const OperatorForm& op, const WeightedPoly& f) {
  PolyForm out(g.dim(), op.degree());
  for (const auto& [m, c] : op.terms()) out.add(m, c.apply(g.frame(), f));
  return out;
}

OperatorForm normalized(const Group& g, const OperatorForm& op) {
  OperatorForm out(g.dim(), op.degree());
  for (const auto& [m, c] : op.terms()) out.add(m, c.normalized(g.algebra()));
  return out;
}

}  // namespace

TEST_CASE("differential of a function on the Heisenberg group") {
  auto g = h1();
  PolyForm t = g->form(0, g->poly("t"));
  CHECK(g->to_string(exterior_derivative(*g, t)) == "-1/2·x2·θ1 + 1/2·x1·θ2 + τ");
  PolyForm f = g->form(mask_of({1}), g->poly("x1"));
  CHECK(g->to_string(exterior_derivative(*g, f)) == "θ1∧θ2");
  CHECK(g->to_string(exterior_derivative(*g, g->form(mask_of({2}), g->constant(1)))) == "-θ1∧θ2");
  CHECK(g->to_string(g->form(mask_of({0}), g->poly("x1 + t"))) == "(t + x1)·θ1");
  CHECK(g->to_string(PolyForm(3, 1)) == "0");
}

TEST_CASE("property: d squares to zero and obeys Leibniz") {
  Rng rng(31);
  for (const auto& g : zoo()) {
    int n = static_cast<int>(g->dim());
    for (int it = 0; it < 6; ++it) {
      int k = rng.uniform(0, n - 1);
      auto a = rng.poly_form(*g, k, 3, 2);
      CHECK(exterior_derivative(*g, exterior_derivative(*g, a)).is_zero());
      int l = rng.uniform(0, n - 1 - k);
      auto b = rng.poly_form(*g, l, 2, 2);
      auto lhs = exterior_derivative(*g, wedge(a, b));
      auto rhs = wedge(exterior_derivative(*g, a), b);
      auto second = wedge(a, exterior_derivative(*g, b));
      if (k % 2) second *= -1;
      rhs += second;
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("property: d_i raises weight by i and lowers coefficient degree by i") {
  Rng rng(32);
  for (const auto& g : zoo()) {
    int n = static_cast<int>(g->dim());
    for (int it = 0; it < 8; ++it) {
      int k = rng.uniform(0, n - 1);
      auto masks = masks_of_degree(n, k);
      Mask m = masks[rng.uniform(0, static_cast<int>(masks.size()) - 1)];
      int p = mask_weight(m, g->weights());
      int e = rng.uniform(0, 4);
      auto a = g->form(m, rng.homogeneous(g->ring(), e, 3));
      auto parts = weight_split_d(*g, a, p);
      PolyForm total(g->dim(), k + 1);
      for (int i = 0; i < static_cast<int>(parts.size()); ++i) {
        total += parts[i];
        for (const auto& [mm, c] : parts[i].terms()) {
          CHECK(mask_weight(mm, g->weights()) == p + i);
          CHECK(*c.weighted_degree() == e - i);
        }
      }
      CHECK(total == exterior_derivative(*g, a));
    }
  }
}

TEST_CASE("invariant forms: d restricts to d0") {
  Rng rng(33);
  for (const auto& g : zoo()) {
    int n = static_cast<int>(g->dim());
    for (int it = 0; it < 5; ++it) {
      auto a = rng.fiber_form(n, rng.uniform(0, n - 1));
      CHECK(exterior_derivative(*g, g->lift(a)) == g->lift(g->fiber().d0(a)));
    }
  }
}

TEST_CASE("multicomplex identities on truncations") {
  for (const auto& g : {h1(), h1xR(), engel(), nonstrat5()}) {
    auto r = multicomplex_check(*g, 0, static_cast<int>(g->dim()), 3);
    CHECK_MESSAGE(r.ok, g->name() << ": " << r.first_violation.value_or(""));
    CHECK(r.elements_checked > 0);
  }
}

TEST_CASE("truncation spaces") {
  auto g = h1();
  CHECK(enumerate_truncation(*g, 0, std::nullopt, 2).basis.size() == 7);
  CHECK(enumerate_truncation(*g, 1, 1, 1).basis.size() == 6);
  CHECK(enumerate_truncation(*g, 1, 2, 0).basis.size() == 1);
  CHECK_THROWS_AS(enumerate_truncation(*g, 1, 1, -1), DomainError);
}

TEST_CASE("weights and coefficient degrees") {
  auto g = h1();
  PolyForm a = g->form(mask_of({0}), g->poly("x1^2 + t + 1"));
  a += g->form(mask_of({1}), g->poly("x2"));
  CHECK(form_weight(*g, a) == 1);
  CHECK(max_coefficient_degree(a) == 2);
  auto parts = split_by_coefficient_degree(a);
  CHECK(parts.size() == 3);
  PolyForm sum(3, 1);
  for (const auto& [e, f] : parts) sum += f;
  CHECK(sum == a);
  a += g->form(mask_of({2}), g->constant(1));
  CHECK_THROWS_AS(form_weight(*g, a), DomainError);
  CHECK_THROWS_AS(weight_split_d(*g, a, 1), DomainError);
}

TEST_CASE("property: operator forms agree with concrete coefficients") {
  Rng rng(34);
  for (const auto& g : {h1(), h1xR(), engel()}) {
    int n = static_cast<int>(g->dim());
    for (int k = 0; k < n; ++k)
      for (Mask m : masks_of_degree(n, k)) {
        auto op = OperatorForm::single(n, m, FrameOperator::identity());
        auto f = rng.poly(g->ring(), 3, 3);
        auto dop = exterior_derivative(*g, op);
        CHECK(instantiate(*g, dop, f) == exterior_derivative(*g, g->form(m, f)));
        CHECK(normalized(*g, exterior_derivative(*g, dop)).is_zero());
        for (int i = 0; i <= g->step(); ++i)
          CHECK(instantiate(*g, d_component(*g, op, i), f) == d_component(*g, g->form(m, f), i));
      }
  }
}

TEST_CASE("operator form text") {
  auto g = h1();
  auto op = OperatorForm::single(3, mask_of({1}), FrameOperator::identity());
  CHECK(g->to_string(exterior_derivative(*g, op)) == "X1f·θ1∧θ2 - Tf·θ2∧τ");
  auto dt = exterior_derivative(*g, OperatorForm::single(3, mask_of({2}), FrameOperator::identity()));
  CHECK(g->to_string(dt) == "-f·θ1∧θ2 + X1f·θ1∧τ + X2f·θ2∧τ");
}
