#include "carnot/pansu.hpp"

#include <algorithm>
#include <random>

#include "carnot/error.hpp"

namespace carnot {

namespace {

using Op = FiberComplex::Op;

void check_map(const PolyMap& phi) {
  if (!phi.source || !phi.target) throw DomainError("map: missing source or target group");
  if (phi.components.size() != phi.target->dim())
    throw DomainError("map: need one component per target coordinate");
  for (const auto& c : phi.components)
    if (!c.is_zero() && !same_ring(c.ring(), phi.source->ring()))
      throw DomainError("map: components must be polynomials in the source coordinates");
}

PolyForm scale(const PolyForm& a, const WeightedPoly& f) {
  PolyForm out(a.dim(), a.degree());
  for (const auto& [m, c] : a.terms()) out.add(m, c * f);
  return out;
}

// Σ_j M_ij θ_j on the source, one per target covector.
std::vector<PolyForm> pulled_covectors(const PolyMap& phi, const PolyMatrix& m) {
  const std::size_t n1 = phi.source->dim();
  std::vector<PolyForm> out;
  for (std::size_t i = 0; i < phi.target->dim(); ++i) {
    PolyForm f(n1, 1);
    for (std::size_t j = 0; j < n1; ++j) f.add(Mask{1} << j, m[i][j]);
    out.push_back(std::move(f));
  }
  return out;
}

HomCheck sampled_hom_check(const PolyMap& phi, const PolyMatrix& m) {
  std::mt19937_64 eng(0x5eed);
  std::uniform_int_distribution<int> num(-7, 7), den(1, 4);
  HomCheck r;
  for (int s = 0; s < 25 && r.brackets_ok; ++s) {
    std::vector<Rational> point;
    for (std::size_t j = 0; j < phi.source->dim(); ++j) point.push_back(make_rational(num(eng), den(eng)));
    HomCheck h = hom_check(phi.source->algebra(), phi.target->algebra(), evaluate(m, point));
    r.brackets_ok = h.brackets_ok;
    r.block_diagonal = r.block_diagonal && h.block_diagonal;
    r.failing_pair = h.failing_pair;
  }
  return r;
}

}  // namespace

PolyMap make_map(GroupPtr source, GroupPtr target, std::vector<WeightedPoly> components) {
  PolyMap phi{std::move(source), std::move(target), std::move(components)};
  for (auto& c : phi.components)
    if (c.is_zero()) c = WeightedPoly(phi.source->ring());
  check_map(phi);
  return phi;
}

PolyMap parse_map(GroupPtr source, GroupPtr target, const std::vector<std::string>& components) {
  std::vector<WeightedPoly> cs;
  for (const auto& s : components) cs.push_back(source->poly(s));
  return make_map(std::move(source), std::move(target), std::move(cs));
}

PolyMap identity_map(GroupPtr g) {
  std::vector<WeightedPoly> cs;
  for (std::size_t j = 0; j < g->dim(); ++j) cs.push_back(WeightedPoly::variable(g->ring(), j));
  return make_map(g, g, std::move(cs));
}

PolyMap compose(const PolyMap& phi, const PolyMap& psi) {
  check_map(phi);
  check_map(psi);
  if (!(psi.target->algebra() == phi.source->algebra()))
    throw DomainError("compose: target of the inner map is not the source of the outer map");
  std::vector<WeightedPoly> cs;
  for (const auto& c : phi.components) cs.push_back(poly_substitute(c, psi.components, psi.source->ring()));
  return make_map(psi.source, phi.target, std::move(cs));
}

PolyMap left_translation(GroupPtr g, const std::vector<Rational>& a) {
  if (a.size() != g->dim()) throw DomainError("left_translation: wrong point dimension");
  std::vector<WeightedPoly> x, y;
  for (std::size_t j = 0; j < g->dim(); ++j) {
    x.push_back(g->constant(a[j]));
    y.push_back(WeightedPoly::variable(g->ring(), j));
  }
  return make_map(g, g, bch_product(g->algebra(), x, y));
}

PolyMap linear_map(GroupPtr source, GroupPtr target, const Matrix& m) {
  if (m.rows() != target->dim() || m.cols() != source->dim())
    throw DomainError("linear_map: matrix must be target dim x source dim");
  std::vector<WeightedPoly> cs;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    WeightedPoly c(source->ring());
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (sgn(m(i, j)) != 0) c += WeightedPoly::variable(source->ring(), j) * m(i, j);
    cs.push_back(std::move(c));
  }
  return make_map(std::move(source), std::move(target), std::move(cs));
}

WeightedPoly pull_function(const PolyMap& phi, const WeightedPoly& f) {
  if (f.is_zero()) return WeightedPoly(phi.source->ring());
  if (!same_ring(f.ring(), phi.target->ring()))
    throw DomainError("pull_function: function is not on the target group");
  return poly_substitute(f, phi.components, phi.source->ring());
}

PolyMatrix adapted_jacobian(const PolyMap& phi) {
  check_map(phi);
  const auto& src = *phi.source;
  const auto& tgt = phi.target->algebra();
  const std::size_t n1 = src.dim(), n2 = tgt.dim();
  PolyMatrix out(n2, std::vector<WeightedPoly>(n1, WeightedPoly(src.ring())));
  for (std::size_t j = 0; j < n1; ++j) {
    std::vector<WeightedPoly> term(n2);
    for (std::size_t k = 0; k < n2; ++k) term[k] = src.frame().apply(j, phi.components[k]);
    for (int m = 0;; ++m) {
      bool zero = true;
      for (std::size_t i = 0; i < n2; ++i) {
        if (term[i].is_zero()) continue;
        zero = false;
        Rational c = Rational(m % 2 == 0 ? 1 : -1) / factorial(m + 1);
        out[i][j] += term[i] * c;
      }
      if (zero || m >= tgt.step()) break;
      term = tgt.bracket(phi.components, term);
    }
  }
  return out;
}

ContactReport contact_check(const PolyMap& phi, const PolyMatrix& a, bool layer_one_only) {
  ContactReport r;
  r.layer_one_only = layer_one_only;
  const auto& w1 = phi.source->weights();
  const auto& w2 = phi.target->weights();
  for (std::size_t i = 0; i < w2.size(); ++i)
    for (std::size_t j = 0; j < w1.size(); ++j) {
      if (w1[j] >= w2[i] || (layer_one_only && w1[j] != 1)) continue;
      if (!a[i][j].is_zero()) r.violations.push_back({i, j, a[i][j]});
    }
  return r;
}

ContactReport contact_check(const PolyMap& phi, bool layer_one_only) {
  return contact_check(phi, adapted_jacobian(phi), layer_one_only);
}

int max_total_degree(const PolyMatrix& m) {
  int d = -1;
  for (const auto& row : m)
    for (const auto& e : row) d = std::max(d, e.total_degree());
  return d;
}

PansuDerivative pansu_derivative(const PolyMap& phi) {
  PolyMatrix a = adapted_jacobian(phi);
  ContactReport c = contact_check(phi, a, false);
  if (!c.ok()) {
    const auto& v = c.violations.front();
    throw ContactError("map violates the contact equations: entry (" + std::to_string(v.row + 1) + "," +
                           std::to_string(v.col + 1) + ") = " + to_string(v.value),
                       v);
  }
  const auto& w1 = phi.source->weights();
  const auto& w2 = phi.target->weights();
  PansuDerivative out;
  out.matrix = a;
  for (std::size_t i = 0; i < w2.size(); ++i)
    for (std::size_t j = 0; j < w1.size(); ++j)
      if (w1[j] != w2[i]) out.matrix[i][j] = WeightedPoly(phi.source->ring());
  if (max_total_degree(out.matrix) <= 6) {
    out.hom = hom_check(phi.source->algebra(), phi.target->algebra(), out.matrix);
    out.hom_mode = "identity";
  } else {
    out.hom = sampled_hom_check(phi, out.matrix);
    out.hom_mode = "sampled";
  }
  return out;
}

PolyForm pullback_with(const PolyMap& phi, const PolyMatrix& m, const PolyForm& alpha) {
  check_map(phi);
  if (alpha.dim() != phi.target->dim()) throw DomainError("pullback: form is not on the target group");
  const std::size_t n1 = phi.source->dim();
  auto theta = pulled_covectors(phi, m);
  PolyForm out(n1, alpha.degree());
  PolyForm one = PolyForm::single(n1, 0, phi.source->constant(1));
  for (const auto& [mask, f] : alpha.terms()) {
    PolyForm w = one;
    for (std::size_t i : mask_indices(mask)) w = wedge(w, theta[i]);
    out += scale(w, pull_function(phi, f));
  }
  return out;
}

PolyForm pansu_pullback(const PolyMap& phi, const PansuDerivative& dp, const PolyForm& alpha) {
  return pullback_with(phi, dp.matrix, alpha);
}

PolyForm pansu_pullback(const PolyMap& phi, const PolyForm& alpha) {
  return pullback_with(phi, pansu_derivative(phi).matrix, alpha);
}

PolyForm classical_pullback(const PolyMap& phi, const PolyForm& alpha) {
  return pullback_with(phi, adapted_jacobian(phi), alpha);
}

CommutativityReport commutativity_check(const PolyMap& phi, const WitnessChain& chain, int page,
                                        std::optional<int> D) {
  if (page < 1) throw DomainError("page index must be at least 1");
  SpectralEngine e2(phi.target), e1(phi.source);
  if (chain.order() < page || !e2.verify(chain)) throw DomainError("invalid witness chain");
  PansuDerivative dp = pansu_derivative(phi);
  const Group& g1 = *phi.source;
  const int k = chain.alpha.degree();

  CommutativityReport r;
  r.page = page;
  PolyForm pulled = pansu_pullback(phi, dp, chain.alpha);
  CosetForm image = e2.delta_r(chain, page, std::max(0, max_coefficient_degree(chain.alpha)));
  r.lhs = pansu_pullback(phi, dp, image.representative);

  const int dz = std::max({0, max_coefficient_degree(pulled), max_coefficient_degree(r.lhs)});
  r.bound = D.value_or(dz);
  r.pulled_chain = e1.z_membership(pulled, page, r.bound);
  if (!r.pulled_chain) return r;
  r.pullback_in_z = true;
  if (pulled.is_zero()) r.pulled_chain->weight = chain.weight;
  r.rhs = e1.delta_r(*r.pulled_chain, page, r.bound).representative;
  if (r.rhs.is_zero()) r.rhs = PolyForm(g1.dim(), k + 1);
  if (r.lhs.is_zero()) r.lhs = PolyForm(g1.dim(), k + 1);
  r.difference = r.lhs - r.rhs;
  if (!D) {
    for (const auto& [e, part] : split_by_coefficient_degree(r.difference))
      r.bound = std::max(r.bound, e1.required_bound_b(k + 1, chain.weight + page, e, page));
  }
  r.certificate = e1.b_membership(r.difference, page, r.bound);
  r.difference_in_b = r.certificate.has_value();
  return r;
}

BoundaryPullback boundary_pullback_check(const PolyMap& phi, const PolyForm& alpha, int page,
                                         std::optional<int> D) {
  SpectralEngine e2(phi.target), e1(phi.source);
  PolyForm pulled = pansu_pullback(phi, alpha);
  BoundaryPullback r;
  const int k = alpha.degree();
  if (D) {
    r.bound = *D;
  } else {
    int p = alpha.is_zero() ? 0 : *form_weight(*phi.target, alpha);
    for (const auto& [e, part] : split_by_coefficient_degree(alpha))
      r.bound = std::max(r.bound, e2.required_bound_b(k, p, e, page));
    for (const auto& [e, part] : split_by_coefficient_degree(pulled))
      r.bound = std::max(r.bound, e1.required_bound_b(k, p, e, page));
  }
  r.source_certificate = e2.b_membership(alpha, page, r.bound);
  if (r.source_certificate) r.image_certificate = e1.b_membership(pulled, page, r.bound);
  return r;
}

PolyForm exterior_discrepancy(const PolyMap& phi, const WeightedPoly& g) {
  PolyForm f = PolyForm::single(phi.target->dim(), 0, g);
  PolyForm lhs = exterior_derivative(*phi.source, pansu_pullback(phi, f));
  PolyForm rhs = pansu_pullback(phi, exterior_derivative(*phi.target, f));
  if (lhs.is_zero()) lhs = PolyForm(phi.source->dim(), 1);
  return lhs - rhs;
}

RuminDiscrepancy dc_noncommutativity_witness(const PolyMap& phi, const PolyForm& alpha) {
  const Group& g1 = *phi.source;
  const Group& g2 = *phi.target;
  if (!is_rumin_form(g2, alpha)) throw DomainError("dc_noncommutativity_witness: input is not a Rumin form");
  PansuDerivative dp = pansu_derivative(phi);
  RuminDiscrepancy r;
  r.pulled = pansu_pullback(phi, dp, alpha);
  r.lhs = rumin_dc(g1, apply_fiber(g1, Op::Pi0, r.pulled));
  r.rhs = pansu_pullback(phi, dp, rumin_dc(g2, alpha));
  const int k = alpha.degree() + 1;
  if (r.lhs.is_zero()) r.lhs = PolyForm(g1.dim(), k);
  if (r.rhs.is_zero()) r.rhs = PolyForm(g1.dim(), k);
  r.raw = r.lhs - r.rhs;
  r.projected = r.lhs - apply_fiber(g1, Op::Pi0, r.rhs);
  return r;
}

}  // namespace carnot
