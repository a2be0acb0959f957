#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "carnot/extensions.hpp"
#include "generators.hpp"

using namespace fixtures;

namespace {

Mask th(std::vector<int> idx) { return mask_of(idx); }

FiberForm two_form(std::size_t n, std::vector<std::pair<Mask, Rational>> terms) {
  FiberForm f(n, 2);
  for (const auto& [m, c] : terms) f.add(m, c);
  return f;
}

bool same_brackets(const StratifiedAlgebra& a, const StratifiedAlgebra& b) {
  if (a.dim() != b.dim()) return false;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      for (std::size_t k = 0; k < a.dim(); ++k)
        if (a.structure_constant(i, j, k) != b.structure_constant(i, j, k)) return false;
  return true;
}

FiberForm constant_eta(const PolyForm& f) {
  FiberForm out(f.dim(), f.degree());
  for (const auto& [m, c] : f.terms()) {
    REQUIRE(c.is_constant());
    out.add(m, c.constant_term());
  }
  return out;
}

bool jacobi_ok(const StratifiedAlgebra& a) {
  for (const auto& f : validate_algebra(a).failures)
    if (f.rfind("Jacobi", 0) == 0 || f.rfind("antisymmetry", 0) == 0) return false;
  return true;
}

// harmonic part plus an exact part: always d0-closed
FiberForm random_cocycle(Rng& rng, const Group& g) {
  FiberForm out(g.dim(), 2);
  for (int p : g.fiber().weights_in_degree(2))
    for (Mask m : g.fiber().basis(2, p)) {
      FiberForm e = FiberForm::single(g.dim(), m, rng.rational());
      out += g.fiber().pi0(e);
    }
  out += g.fiber().d0(rng.fiber_form(g.dim(), 1));
  return out;
}

}  // namespace

TEST_CASE("cocycles and coboundaries") {
  auto r2 = abelian(2);
  auto area = two_form(2, {{th({0, 1}), 1}});
  CHECK(cocycle_check(*r2, area));
  CHECK_FALSE(coboundary_solve(*r2, area));

  auto g = h1xR();
  auto omega = two_form(4, {{th({1, 2}), 1}, {th({0, 3}), 1}});
  CHECK(cocycle_check(*g, omega));
  CHECK_FALSE(cocycle_check(*g, two_form(4, {{th({2, 3}), 1}})));

  auto h = h1();
  auto w = two_form(3, {{th({0, 1}), 1}});
  CHECK(cocycle_check(*h, w));
  auto eta = coboundary_solve(*h, w);
  REQUIRE(eta);
  CHECK(h->to_string(*eta) == "-τ");
  auto zero = coboundary_solve(*h, FiberForm(3, 2));
  REQUIRE(zero);
  CHECK(zero->is_zero());
}

TEST_CASE("the plane extended by its area form is the Heisenberg algebra") {
  auto r2 = abelian(2);
  auto e = central_extend(r2, two_form(2, {{th({0, 1}), 1}}), false, "T");
  CHECK(*e.extended == h1()->algebra());
  CHECK(e.homogeneous);
  CHECK(e.graded);
  CHECK(e.stratifiable);
  CHECK(e.layer_one_generates);
  CHECK_FALSE(e.trivial);
}

TEST_CASE("non-homogeneous extension of H1 x R") {
  auto g = h1xR();
  auto e = central_extend(g, two_form(4, {{th({1, 2}), 1}, {th({0, 3}), 1}}));
  REQUIRE(e.extended->dim() == 5);
  CHECK(e.extended->labels() == std::vector<std::string>{"X1", "X2", "X3", "T", "W"});
  CHECK(same_brackets(*e.extended, nonstrat5()->algebra()));
  CHECK_FALSE(e.homogeneous);
  CHECK_FALSE(e.stratifiable);
  CHECK(e.graded);
  CHECK(e.extended->weights() == std::vector<int>{1, 1, 2, 2, 3});
  CHECK_FALSE(e.layer_one_generates);
  CHECK(validate_algebra(*e.extended).lie_algebra_ok());
  auto big = extension_group(e, "ext");
  CHECK(big->dim() == 5);
}

TEST_CASE("trivial extensions and the Id + μ isomorphism") {
  auto h = h1();
  auto w = two_form(3, {{th({0, 1}), 1}});
  auto e = central_extend(h, w);
  CHECK(e.trivial);
  REQUIRE(e.primitive);
  auto split = central_extend(h, FiberForm(3, 2));
  auto iso = coboundary_isomorphism(e, split, *e.primitive);
  CHECK(iso.ok());
  CHECK(iso.matrix(3, 2) == -1);
  CHECK_THROWS_AS(coboundary_isomorphism(e, split, FiberForm(3, 1)), DomainError);
}

TEST_CASE("property: Jacobi of the extension holds exactly for cocycles") {
  Rng rng(21);
  for (const auto& g : {h1(), h1xR(), engel(), h2(), free23(), abelian(3)}) {
    for (int trial = 0; trial < 8; ++trial) {
      FiberForm w = rng.fiber_form(g->dim(), 2);
      auto e = central_extend(g, w, true);
      CHECK(jacobi_ok(*e.extended) == cocycle_check(*g, w));
      auto c = random_cocycle(rng, *g);
      CHECK(cocycle_check(*g, c));
      CHECK(jacobi_ok(*central_extend(g, c).extended));
    }
  }
}

TEST_CASE("property: cohomologous cocycles give isomorphic extensions") {
  Rng rng(22);
  for (const auto& g : {h1(), h1xR(), engel(), h2()}) {
    for (int trial = 0; trial < 6; ++trial) {
      auto w = random_cocycle(rng, *g);
      auto mu = rng.fiber_form(g->dim(), 1);
      FiberForm shifted = w + g->fiber().d0(mu);
      auto iso = coboundary_isomorphism(central_extend(g, shifted), central_extend(g, w), mu);
      CHECK(iso.ok());
      // the wrong sign of μ is not an isomorphism unless d0 μ = 0
      if (!g->fiber().d0(mu).is_zero()) {
        auto bad = central_extend(g, w);
        auto e2 = central_extend(g, shifted);
        Matrix m = iso.matrix;
        for (std::size_t j = 0; j < g->dim(); ++j) m(g->dim(), j) = -m(g->dim(), j);
        CHECK_FALSE(hom_check(*e2.extended, *bad.extended, m).brackets_ok);
      }
    }
  }
}

TEST_CASE("property: homogeneous cocycles give graded extensions") {
  Rng rng(23);
  for (const auto& g : {h1(), h1xR(), engel(), h2(), free23()}) {
    for (int p : g->fiber().weights_in_degree(2)) {
      FiberForm w(g->dim(), 2);
      for (Mask m : g->fiber().basis(2, p)) w.add(m, rng.rational());
      w = g->fiber().pi0(w) + g->fiber().d0(rng.fiber_form(g->dim(), 1).weight_component(g->weights(), p));
      if (w.is_zero()) continue;
      auto e = central_extend(g, w);
      CHECK(e.homogeneous);
      CHECK(e.graded);
      CHECK(e.extended->weights().back() == p);
    }
  }
}

TEST_CASE("lifting the Jacobian of a planar map") {
  auto r2 = abelian(2);
  auto area = two_form(2, {{th({0, 1}), 1}});
  Matrix j(2, 2);
  j(0, 0) = 2, j(0, 1) = 3, j(1, 0) = 1, j(1, 1) = 2;
  auto res = lift_homomorphism(*r2, *r2, j, area, area);
  REQUIRE(res.ok());
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      Rational want = a < 2 && b < 2 ? j(a, b) : Rational(a == b ? 1 : 0);
      CHECK(res.lift->matrix[a][b] == r2->constant(want));
    }
  CHECK(res.lift->hom.ok());

  j(1, 1) = 5;  // det 7
  CHECK_FALSE(lift_homomorphism(*r2, *r2, j, area, area).ok());
  auto scaled = lift_homomorphism(*r2, *r2, j, area, area, {.rescale = true});
  REQUIRE(scaled.ok());
  CHECK(scaled.lift->scale == r2->constant(7));

  auto zero = lift_homomorphism(*r2, *r2, Matrix(2, 2), area, area);
  CHECK_FALSE(zero.ok());
  REQUIRE(zero.obstruction);
  CHECK(r2->to_string(*zero.obstruction) == "θ1∧θ2");
}

TEST_CASE("property: lifted planar Jacobians match Pansu derivatives of contact lifts") {
  auto r2 = abelian(2);
  auto h = h1();
  auto area = two_form(2, {{th({0, 1}), 1}});
  Rng rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    auto contact = random_h1_contact(h, rng);
    // the planar part only involves x1, x2
    std::vector<WeightedPoly> planar;
    auto to_plane = std::vector<WeightedPoly>{WeightedPoly::variable(r2->ring(), 0),
                                              WeightedPoly::variable(r2->ring(), 1), WeightedPoly(r2->ring())};
    for (int i = 0; i < 2; ++i) planar.push_back(poly_substitute(contact.components[i], to_plane, r2->ring()));
    auto flat = make_map(r2, r2, planar);
    auto res = lift_homomorphism(*r2, *r2, adapted_jacobian(flat), area, area, {.rescale = true});
    REQUIRE(res.ok());
    CHECK(res.lift->hom.brackets_ok);
    CHECK(res.lift->projection_ok);
    auto dp = pansu_derivative(contact);
    std::vector<WeightedPoly> up = {WeightedPoly::variable(h->ring(), 0), WeightedPoly::variable(h->ring(), 1)};
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b)
        CHECK(poly_substitute(res.lift->matrix[a][b], up, h->ring()) == dp.matrix[a][b]);
  }
}

TEST_CASE("property: lifts of graded automorphisms are homomorphisms over the projection") {
  auto h = h1();
  Rng rng(25);
  for (int trial = 0; trial < 10; ++trial) {
    auto phi = h1_automorphism(h, rng);
    auto dp = pansu_derivative(phi);
    auto zeta = random_cocycle(rng, *h);
    auto pulled = pull_invariant(*h, dp.matrix, zeta);
    FiberForm omega1(3, 2);
    for (const auto& [m, c] : pulled.terms()) omega1.add(m, c.constant_term());
    omega1 += h->fiber().d0(rng.fiber_form(3, 1));
    auto res = lift_homomorphism(*h, *h, dp.matrix, omega1, zeta);
    REQUIRE(res.ok());
    CHECK(res.lift->hom.ok());
    CHECK(res.lift->projection_ok);
    CHECK(h->fiber().d0(constant_eta(res.lift->eta)) == omega1 - constant_eta(pulled));
  }
}

TEST_CASE("lifting workflow on H1 x R") {
  auto g = h1xR();
  auto omega = two_form(4, {{th({1, 2}), 1}, {th({0, 3}), 1}});
  auto id = lift_pansu_workflow(identity_map(g), omega, 4);
  REQUIRE(id.ok());
  CHECK(id.left_invariant);
  CHECK(id.commutes_mod_d0);
  REQUIRE(id.steps.size() == 2);
  for (const auto& s : id.steps) {
    REQUIRE(s.alpha);
    auto split = dc_weight_split(*g, *s.alpha);
    CHECK(split[s.weight - 1] == g->lift(s.component));
  }
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = 0; b < 5; ++b) CHECK(id.lift->matrix[a][b] == g->constant(a == b ? 1 : 0));
  CHECK(same_brackets(*id.source_extension->extended, *id.target_extension->extended));
  CHECK_FALSE(id.target_extension->stratifiable);

  auto phi = parse_map(g, g, {"x1", "x2", "x2 + x3", "t"});
  auto w = lift_pansu_workflow(phi, omega, 4);
  REQUIRE(w.ok());
  CHECK(g->to_string(w.zeta_prime) == "θ1∧τ + θ2∧θ3");
  CHECK(w.lift->hom.brackets_ok);
  CHECK(w.lift->matrix[4][4] == g->constant(1));

  auto low = lift_pansu_workflow(phi, omega, 1);
  CHECK_FALSE(low.ok());
  CHECK(low.failure);
}

TEST_CASE("lifting workflow for graded homomorphisms and vanishing pullbacks") {
  auto h = h1();
  Rng rng(26);
  auto omega = two_form(3, {{th({0, 2}), 1}});
  for (int trial = 0; trial < 5; ++trial) {
    auto phi = h1_automorphism(h, rng);
    auto w = lift_pansu_workflow(phi, omega, 3);
    REQUIRE(w.ok());
    CHECK(w.commutes_mod_d0);
    CHECK(w.lift->hom.ok());
  }
  // a horizontal line in H1: the weight-3 form pulls back to zero on the plane
  auto r2 = abelian(2);
  auto line = parse_map(r2, h, {"x1", "0", "0"});
  auto w = lift_pansu_workflow(line, omega, 3);
  REQUIRE(w.ok());
  CHECK(w.zeta_prime.is_zero());
  CHECK(w.pulled_omega.is_zero());
  CHECK(w.source_extension->trivial);
}
