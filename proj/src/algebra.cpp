#include "carnot/algebra.hpp"

#include <algorithm>

#include "carnot/error.hpp"

namespace carnot {

StratifiedAlgebra::StratifiedAlgebra(std::vector<std::string> labels, std::vector<int> weights)
    : labels_(std::move(labels)), weights_(std::move(weights)) {
  if (labels_.size() != weights_.size())
    throw DomainError("algebra: labels and weights differ in length");
  if (labels_.empty()) throw DomainError("algebra: dimension must be positive");
  if (labels_.size() > 24) throw DomainError("algebra: dimension above 24 is not supported");
  for (int w : weights_)
    if (w <= 0) throw DomainError("algebra: weights must be positive integers");
  c_.assign(dim() * dim() * dim(), Rational(0));
}

int StratifiedAlgebra::step() const { return *std::max_element(weights_.begin(), weights_.end()); }

int StratifiedAlgebra::homogeneous_dimension() const {
  int q = 0;
  for (int w : weights_) q += w;
  return q;
}

void StratifiedAlgebra::set_bracket(std::size_t i, std::size_t j, const Vector& value) {
  if (i >= dim() || j >= dim() || value.size() != dim())
    throw DomainError("set_bracket: index out of range");
  for (std::size_t k = 0; k < dim(); ++k) {
    set_structure_constant(i, j, k, value[k]);
    set_structure_constant(j, i, k, -value[k]);
  }
}

Vector StratifiedAlgebra::bracket(std::size_t i, std::size_t j) const {
  Vector v(dim());
  for (std::size_t k = 0; k < dim(); ++k) v[k] = structure_constant(i, j, k);
  return v;
}

Vector StratifiedAlgebra::bracket(const Vector& a, const Vector& b) const {
  Vector out(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < dim(); ++j) {
      if (sgn(b[j]) == 0) continue;
      for (std::size_t k = 0; k < dim(); ++k)
        if (sgn(structure_constant(i, j, k)) != 0) out[k] += a[i] * b[j] * structure_constant(i, j, k);
    }
  }
  return out;
}

std::vector<WeightedPoly> StratifiedAlgebra::bracket(const std::vector<WeightedPoly>& a,
                                                     const std::vector<WeightedPoly>& b) const {
  std::vector<WeightedPoly> out(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < dim(); ++j) {
      if (b[j].is_zero() || i == j) continue;
      WeightedPoly ab;
      bool have = false;
      for (std::size_t k = 0; k < dim(); ++k) {
        const Rational& c = structure_constant(i, j, k);
        if (sgn(c) == 0) continue;
        if (!have) {
          ab = a[i] * b[j];
          have = true;
        }
        out[k] += ab * c;
      }
    }
  }
  return out;
}

std::string AlgebraValidation::summary() const {
  if (failures.empty() && generated_by_layer_one) return "valid Carnot algebra";
  std::string s;
  for (const auto& f : failures) s += (s.empty() ? "" : "; ") + f;
  if (failures.empty()) s = "graded (homogeneous) algebra, not generated by layer 1";
  return s;
}

AlgebraValidation validate_algebra(const StratifiedAlgebra& a) {
  AlgebraValidation r;
  const std::size_t n = a.dim();
  r.homogeneous_dimension = a.homogeneous_dimension();
  auto label = [&](std::size_t i) { return a.label(i); };

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (a.structure_constant(i, j, k) != -a.structure_constant(j, i, k)) {
          r.failures.push_back("antisymmetry fails for [" + label(i) + "," + label(j) + "]");
          goto antisym_done;
        }
antisym_done:

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t l = j + 1; l < n; ++l) {
        Vector e(n);
        auto unit = [&](std::size_t t) {
          Vector u(n);
          u[t] = 1;
          return u;
        };
        Vector s1 = a.bracket(a.bracket(i, j), unit(l));
        Vector s2 = a.bracket(a.bracket(j, l), unit(i));
        Vector s3 = a.bracket(a.bracket(l, i), unit(j));
        for (std::size_t k = 0; k < n; ++k) e[k] = s1[k] + s2[k] + s3[k];
        if (!carnot::is_zero(e)) {
          r.failures.push_back("Jacobi fails for (" + label(i) + "," + label(j) + "," + label(l) + ")");
          goto jacobi_done;
        }
      }
jacobi_done:

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (sgn(a.structure_constant(i, j, k)) != 0 && a.weight(k) != a.weight(i) + a.weight(j)) {
          r.failures.push_back("grading violated: [" + label(i) + "," + label(j) + "] has a " +
                               label(k) + " component of weight " + std::to_string(a.weight(k)) +
                               " != " + std::to_string(a.weight(i) + a.weight(j)));
          goto grading_done;
        }
grading_done:

  std::vector<Vector> layer1;
  for (std::size_t i = 0; i < n; ++i)
    if (a.weight(i) == 1) {
      Vector u(n);
      u[i] = 1;
      layer1.push_back(u);
    }
  Subspace total = Subspace::span(n, layer1);
  std::vector<Vector> current = layer1;
  for (std::size_t depth = 0; depth < n && !current.empty(); ++depth) {
    std::vector<Vector> next;
    for (const auto& g : layer1)
      for (const auto& v : current) next.push_back(a.bracket(g, v));
    Subspace s = Subspace::span(n, next);
    current = s.basis();
    Subspace grown = total.sum(s);
    if (grown.dimension() == total.dimension()) break;
    total = grown;
  }
  r.generated_by_layer_one = total.dimension() == n;
  return r;
}

const RingPtr& lambda_ring() {
  static const RingPtr ring = make_ring({"lambda"}, {1});
  return ring;
}

std::vector<WeightedPoly> dilation_apply(const StratifiedAlgebra& a, const Vector& v) {
  if (v.size() != a.dim()) throw DomainError("dilation: vector length mismatch");
  std::vector<WeightedPoly> out;
  for (std::size_t j = 0; j < a.dim(); ++j)
    out.push_back(WeightedPoly::monomial(lambda_ring(), {static_cast<std::uint16_t>(a.weight(j))}, v[j]));
  return out;
}

HomCheck hom_check(const StratifiedAlgebra& source, const StratifiedAlgebra& target,
                   const Matrix& m) {
  PolyMatrix pm(m.rows(), std::vector<WeightedPoly>(m.cols()));
  auto ring = make_ring({}, {});
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) pm[i][j] = WeightedPoly::constant(ring, m(i, j));
  return hom_check(source, target, pm);
}

HomCheck hom_check(const StratifiedAlgebra& source, const StratifiedAlgebra& target,
                   const PolyMatrix& m) {
  if (m.size() != target.dim()) throw DomainError("hom_check: row count must equal target dimension");
  for (const auto& row : m)
    if (row.size() != source.dim())
      throw DomainError("hom_check: column count must equal source dimension");
  HomCheck r;
  for (std::size_t a = 0; a < target.dim(); ++a)
    for (std::size_t b = 0; b < source.dim(); ++b)
      if (!m[a][b].is_zero() && target.weight(a) != source.weight(b)) r.block_diagonal = false;

  auto column = [&](std::size_t j) {
    std::vector<WeightedPoly> c(target.dim());
    for (std::size_t a = 0; a < target.dim(); ++a) c[a] = m[a][j];
    return c;
  };
  for (std::size_t i = 0; i < source.dim() && r.brackets_ok; ++i)
    for (std::size_t j = i + 1; j < source.dim(); ++j) {
      std::vector<WeightedPoly> lhs(target.dim());
      for (std::size_t k = 0; k < source.dim(); ++k) {
        const Rational& c = source.structure_constant(i, j, k);
        if (sgn(c) == 0) continue;
        for (std::size_t a = 0; a < target.dim(); ++a) lhs[a] += m[a][k] * c;
      }
      auto rhs = target.bracket(column(i), column(j));
      for (std::size_t a = 0; a < target.dim(); ++a)
        if (!(lhs[a] - rhs[a]).is_zero()) {
          r.brackets_ok = false;
          r.failing_pair = std::make_pair(i, j);
          break;
        }
      if (!r.brackets_ok) break;
    }
  return r;
}

Matrix evaluate(const PolyMatrix& m, std::span<const Rational> point) {
  Matrix out(m.size(), m.empty() ? 0 : m[0].size());
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) = m[i][j].evaluate(point);
  return out;
}

}  // namespace carnot
