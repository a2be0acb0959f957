#include "carnot/extensions.hpp"

#include <algorithm>
#include <numeric>

#include "carnot/error.hpp"

namespace carnot {

namespace {

using Op = FiberComplex::Op;

void check_two_form(const Group& g, const FiberForm& omega) {
  if (omega.dim() != g.dim() || (omega.degree() != 2 && !omega.is_zero()))
    throw DomainError("expected an invariant 2-form on " + (g.name().empty() ? "the group" : g.name()));
}

AlgebraPtr extended_algebra(const StratifiedAlgebra& a, const FiberForm& omega, std::vector<std::string> labels,
                            std::vector<int> weights) {
  StratifiedAlgebra out(std::move(labels), std::move(weights));
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Vector v(n + 1);
      Vector b = a.bracket(i, j);
      std::copy(b.begin(), b.end(), v.begin());
      if (const Rational* c = omega.find(mask_of({static_cast<int>(i), static_cast<int>(j)}))) v[n] = *c;
      out.set_bracket(i, j, v);
    }
  return std::make_shared<const StratifiedAlgebra>(std::move(out));
}

std::string fresh_label(const StratifiedAlgebra& a, std::string want) {
  if (want.empty()) want = "W";
  auto taken = [&](const std::string& s) {
    return std::find(a.labels().begin(), a.labels().end(), s) != a.labels().end();
  };
  if (!taken(want)) return want;
  for (int i = 2;; ++i)
    if (!taken(want + std::to_string(i))) return want + std::to_string(i);
}

bool all_constant(const PolyForm& f) {
  for (const auto& [m, c] : f.terms())
    if (!c.is_constant()) return false;
  return true;
}

FiberForm constant_part(const PolyForm& f) {
  FiberForm out(f.dim(), f.degree());
  for (const auto& [m, c] : f.terms()) out.add(m, c.constant_term());
  return out;
}

PolyForm scale(const PolyForm& a, const WeightedPoly& f) {
  PolyForm out(a.dim(), a.degree());
  for (const auto& [m, c] : a.terms()) out.add(m, c * f);
  return out;
}

}  // namespace

bool cocycle_check(const Group& g, const FiberForm& omega) {
  check_two_form(g, omega);
  return g.fiber().d0(omega).is_zero();
}

std::optional<FiberForm> coboundary_solve(const Group& g, const FiberForm& omega) {
  check_two_form(g, omega);
  if (omega.is_zero()) return FiberForm(g.dim(), 1);
  FiberForm eta = g.fiber().d0_pinv(omega);
  if (!(g.fiber().d0(eta) == omega)) return std::nullopt;
  return eta;
}

std::optional<std::vector<int>> find_positive_grading(const StratifiedAlgebra& a) {
  const std::size_t n = a.dim();
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (sgn(a.structure_constant(i, j, k)) != 0) {
          Vector r(n);
          r[k] += 1;
          r[i] -= 1;
          r[j] -= 1;
          rows.push_back(std::move(r));
        }
  std::vector<Vector> basis;
  if (rows.empty()) {
    for (std::size_t f = 0; f < n; ++f) {
      Vector v(n);
      v[f] = 1;
      basis.push_back(std::move(v));
    }
  } else {
    basis = nullspace(Matrix::from_rows(rows, n));
  }
  if (basis.empty()) return std::nullopt;
  const std::size_t m = basis.size();
  const int bound = m <= 4 ? 6 : (m <= 7 ? 3 : 1);
  std::optional<std::vector<int>> best;
  long best_sum = 0;
  std::vector<int> coef(m, 1);
  for (;;) {
    Vector w(n);
    for (std::size_t f = 0; f < m; ++f)
      for (std::size_t t = 0; t < n; ++t) w[t] += basis[f][t] * coef[f];
    bool good = true;
    std::vector<int> cand;
    long sum = 0;
    for (const auto& x : w) {
      if (sgn(x) <= 0 || x.get_den() != 1 || !x.get_num().fits_sint_p()) {
        good = false;
        break;
      }
      cand.push_back(static_cast<int>(x.get_num().get_si()));
      sum += cand.back();
    }
    if (good && (!best || sum < best_sum || (sum == best_sum && cand < *best))) {
      best = cand;
      best_sum = sum;
    }
    std::size_t f = 0;
    while (f < m && coef[f] == bound) coef[f++] = 1;
    if (f == m) break;
    ++coef[f];
  }
  if (best) {
    int g = 0;
    for (int x : *best) g = std::gcd(g, x);
    for (int& x : *best) x /= g;
  }
  return best;
}

CentralExtension central_extend(GroupPtr base, const FiberForm& omega, bool force, std::string central_label) {
  const Group& g = *base;
  check_two_form(g, omega);
  CentralExtension e;
  e.base = base;
  e.cocycle = omega.is_zero() ? FiberForm(g.dim(), 2) : omega;
  if (!force && !cocycle_check(g, omega))
    throw DomainError("central_extend: the 2-form is not a cocycle (d0 ω = " + g.to_string(g.fiber().d0(omega)) + ")");

  std::vector<std::string> labels = g.algebra().labels();
  labels.push_back(fresh_label(g.algebra(), std::move(central_label)));
  std::vector<int> weights = g.weights();
  auto ws = omega.weights(g.weights());
  e.homogeneous = ws.size() <= 1;
  weights.push_back(ws.empty() ? 1 : *ws.rbegin());
  e.extended = extended_algebra(g.algebra(), omega, labels, weights);
  if (!e.homogeneous) {
    if (auto found = find_positive_grading(*e.extended)) e.extended = extended_algebra(g.algebra(), omega, labels, *found);
  }
  auto v = validate_algebra(*e.extended);
  e.graded = v.failures.empty();
  e.layer_one_generates = v.generated_by_layer_one;
  e.stratifiable = e.homogeneous && validate_algebra(g.algebra()).ok(true);
  if (cocycle_check(g, omega)) {
    e.primitive = coboundary_solve(g, omega);
    e.trivial = e.primitive.has_value();
  }
  return e;
}

GroupPtr extension_group(const CentralExtension& e, std::string name) {
  if (!e.graded) throw DomainError("extension_group: the extended algebra has no positive grading");
  std::vector<std::string> coords = e.base->ring()->names();
  std::string w = "w";
  while (std::find(coords.begin(), coords.end(), w) != coords.end()) w += "'";
  coords.push_back(w);
  std::vector<std::string> covectors = e.base->covector_labels();
  std::string c = "σ";
  while (std::find(covectors.begin(), covectors.end(), c) != covectors.end()) c += "'";
  covectors.push_back(c);
  return make_group(*e.extended, std::move(name), std::move(coords), std::move(covectors));
}

PolyForm pull_invariant(const Group& g1, const PolyMatrix& m, const FiberForm& zeta) {
  const std::size_t n1 = g1.dim();
  std::vector<PolyForm> theta;
  for (const auto& row : m) {
    if (row.size() != n1) throw DomainError("pull_invariant: matrix does not match the source group");
    PolyForm f(n1, 1);
    for (std::size_t j = 0; j < n1; ++j) f.add(Mask{1} << j, row[j]);
    theta.push_back(std::move(f));
  }
  if (zeta.dim() != m.size()) throw DomainError("pull_invariant: form does not match the target");
  PolyForm out(n1, zeta.degree());
  for (const auto& [mask, c] : zeta.terms()) {
    PolyForm w = PolyForm::single(n1, 0, g1.constant(1));
    for (int i : mask_indices(mask)) w = wedge(w, theta[i]);
    out += w * c;
  }
  return out;
}

LiftResult lift_homomorphism(const Group& g1, const Group& g2, const PolyMatrix& phi, const FiberForm& omega1,
                             const FiberForm& zeta, LiftOptions opt) {
  check_two_form(g1, omega1);
  check_two_form(g2, zeta);
  if (phi.size() != g2.dim()) throw DomainError("lift_homomorphism: matrix must have one row per target basis vector");
  const std::size_t n1 = g1.dim(), n2 = g2.dim();
  PolyForm pulled = pull_invariant(g1, phi, zeta);
  PolyForm w1 = g1.lift(omega1.is_zero() ? FiberForm(n1, 2) : omega1);
  if (pulled.is_zero()) pulled = PolyForm(n1, 2);
  if (w1.is_zero()) w1 = PolyForm(n1, 2);

  auto solve = [&](const PolyForm& r) -> std::optional<PolyForm> {
    PolyForm eta = apply_fiber(g1, Op::D0Pinv, r);
    if (eta.is_zero()) eta = PolyForm(n1, 1);
    if (!(apply_fiber(g1, Op::D0, eta) == r)) return std::nullopt;
    return eta;
  };
  auto harmonic_part = [&](const PolyForm& r) {
    PolyForm p = r - apply_fiber(g1, Op::D0, apply_fiber(g1, Op::D0Pinv, r));
    return p;
  };

  LiftResult out;
  WeightedPoly c = g1.constant(1);
  std::optional<PolyForm> eta = solve(w1 - pulled);
  if (!eta && opt.rescale) {
    PolyForm h1 = harmonic_part(w1), hz = harmonic_part(pulled);
    if (!h1.is_zero()) {
      const auto& [m, c1] = *h1.terms().begin();
      const WeightedPoly* cz = hz.find(m);
      WeightedPoly cand = cz ? *cz * (Rational(1) / c1.constant_term()) : WeightedPoly(g1.ring());
      if (scale(h1, cand) == hz) {
        c = cand;
        eta = solve(scale(w1, c) - pulled);
      }
    }
  }
  if (!eta) {
    out.obstruction = harmonic_part(w1 - pulled);
    return out;
  }

  LiftedHom l;
  l.base = phi;
  l.eta = *eta;
  l.scale = c;
  WeightedPoly zero(g1.ring());
  l.matrix.assign(n2 + 1, std::vector<WeightedPoly>(n1 + 1, zero));
  for (std::size_t i = 0; i < n2; ++i)
    for (std::size_t j = 0; j < n1; ++j) l.matrix[i][j] = phi[i][j].is_zero() ? zero : phi[i][j];
  for (std::size_t j = 0; j < n1; ++j)
    if (const WeightedPoly* e = eta->find(Mask{1} << j)) l.matrix[n2][j] = *e;
  l.matrix[n2][n1] = c;

  auto a1 = extended_algebra(g1.algebra(), omega1, [&] {
    auto v = g1.algebra().labels();
    v.push_back(fresh_label(g1.algebra(), "W"));
    return v;
  }(), [&] {
    auto v = g1.weights();
    v.push_back(1);
    return v;
  }());
  auto a2 = extended_algebra(g2.algebra(), zeta, [&] {
    auto v = g2.algebra().labels();
    v.push_back(fresh_label(g2.algebra(), "W"));
    return v;
  }(), [&] {
    auto v = g2.weights();
    v.push_back(1);
    return v;
  }());
  l.hom = hom_check(*a1, *a2, l.matrix);
  // the W weights above are placeholders; block structure is judged on the bases
  l.hom.block_diagonal = hom_check(g1.algebra(), g2.algebra(), phi).block_diagonal;
  for (std::size_t i = 0; i < n2; ++i) {
    if (!l.matrix[i][n1].is_zero()) l.projection_ok = false;
    for (std::size_t j = 0; j < n1; ++j)
      if (!(l.matrix[i][j] - phi[i][j]).is_zero()) l.projection_ok = false;
  }
  out.lift = std::move(l);
  return out;
}

LiftResult lift_homomorphism(const Group& g1, const Group& g2, const Matrix& phi, const FiberForm& omega1,
                             const FiberForm& zeta, LiftOptions opt) {
  PolyMatrix pm(phi.rows(), std::vector<WeightedPoly>(phi.cols()));
  for (std::size_t i = 0; i < phi.rows(); ++i)
    for (std::size_t j = 0; j < phi.cols(); ++j) pm[i][j] = g1.constant(phi(i, j));
  return lift_homomorphism(g1, g2, pm, omega1, zeta, opt);
}

ExtensionIsomorphism coboundary_isomorphism(const CentralExtension& shifted, const CentralExtension& original,
                                            const FiberForm& mu) {
  const Group& g = *original.base;
  if (!(shifted.base->algebra() == g.algebra())) throw DomainError("coboundary_isomorphism: different base algebras");
  FiberForm expect = original.cocycle;
  if (!mu.is_zero()) expect += g.fiber().d0(mu);
  if (!(expect == shifted.cocycle))
    throw DomainError("coboundary_isomorphism: cocycles do not differ by d0 μ");
  const std::size_t n = g.dim();
  ExtensionIsomorphism out;
  out.matrix = Matrix::identity(n + 1);
  for (const auto& [m, c] : mu.terms()) out.matrix(n, static_cast<std::size_t>(mask_indices(m)[0])) = c;
  out.hom = hom_check(*shifted.extended, *original.extended, out.matrix);
  return out;
}

LiftWorkflow lift_pansu_workflow(const PolyMap& phi, const FiberForm& omega, int D) {
  const Group& g1 = *phi.source;
  const Group& g2 = *phi.target;
  check_two_form(g2, omega);
  LiftWorkflow out;
  out.zeta_prime = PolyForm(g1.dim(), 2);
  if (!cocycle_check(g2, omega)) {
    out.failure = "ω is not closed";
    return out;
  }
  PansuDerivative dp = pansu_derivative(phi);
  out.pulled_omega = pull_invariant(g1, dp.matrix, omega);
  SpectralEngine eng(phi.target);

  for (int s : omega.weights(g2.weights())) {
    PrimitiveStep step;
    step.weight = s;
    step.component = omega.weight_component(g2.weights(), s);
    step.pulled = PolyForm(g1.dim(), 1);
    step.image = PolyForm(g1.dim(), 2);
    const int e = s - 1;
    if (e > D) {
      out.failure = "primitive of the weight-" + std::to_string(s) + " part needs coefficient degree " +
                    std::to_string(e) + " > " + std::to_string(D);
      out.steps.push_back(std::move(step));
      continue;
    }
    const auto& basis = eng.cell_basis({1, 1, e});
    // rows: (page j, mask, exponent) of d_c^j applied to each basis element
    std::map<std::tuple<int, Mask, Exponent>, SparseVector> rows;
    for (std::size_t col = 0; col < basis.size(); ++col) {
      PolyForm b = g2.form(basis[col].first, WeightedPoly::monomial(g2.ring(), basis[col].second));
      for (const auto& [j, part] : dc_weight_split(g2, b)) {
        if (j > e) continue;
        for (const auto& [m, f] : part.terms())
          for (const auto& [x, c] : f.terms()) rows[{j, m, x}][col] = c;
      }
    }
    std::map<std::tuple<int, Mask, Exponent>, Rational> rhs;
    for (const auto& [m, c] : step.component.terms()) {
      auto key = std::make_tuple(e, m, Exponent(g2.dim(), 0));
      rhs[key] = c;
      rows.try_emplace(key);
    }
    SparseSystem sys(basis.size());
    for (auto& [key, row] : rows) {
      auto it = rhs.find(key);
      sys.add_equation(row, it == rhs.end() ? Rational(0) : it->second);
    }
    auto x = sys.particular();
    if (!x) {
      out.failure = "no horizontal primitive for the weight-" + std::to_string(s) + " part";
      out.steps.push_back(std::move(step));
      continue;
    }
    Vector v(basis.size());
    for (const auto& [col, c] : *x) v[col] = c;
    step.alpha = eng.from_vector(v, {1, 1, e});
    if (step.alpha->is_zero()) step.alpha = PolyForm(g2.dim(), 1);
    step.pulled = pansu_pullback(phi, dp, *step.alpha);
    auto split = dc_weight_split(g1, step.pulled);
    if (auto it = split.find(e); it != split.end() && !it->second.is_zero()) step.image = it->second;
    out.zeta_prime += step.image;
    out.steps.push_back(std::move(step));
  }
  if (out.failure) return out;

  PolyForm diff = out.pulled_omega - out.zeta_prime;
  out.commutes_mod_d0 = apply_fiber(g1, Op::D0, apply_fiber(g1, Op::D0Pinv, diff)) == diff;
  out.left_invariant = all_constant(out.zeta_prime);
  if (!out.left_invariant) {
    PolyForm res(g1.dim(), 2);
    for (const auto& [m, c] : out.zeta_prime.terms()) res.add(m, c - g1.constant(c.constant_term()));
    out.residual = res;
    return out;
  }
  FiberForm zeta = constant_part(out.zeta_prime);
  out.target_extension = central_extend(phi.target, omega);
  out.source_extension = central_extend(phi.source, zeta);
  auto lift = lift_homomorphism(g1, g2, dp.matrix, zeta, omega);
  if (lift.lift) out.lift = std::move(lift.lift);
  else out.failure = "ζ' − φ*ω is not d0-exact";
  return out;
}

}  // namespace carnot
