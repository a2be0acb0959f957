#include "carnot/linalg.hpp"

#include <cassert>

#include "carnot/error.hpp"

namespace carnot {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vector>& cols, std::size_t rows) {
  Matrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  return m;
}

Vector Matrix::row(std::size_t i) const {
  return Vector(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
}

Vector Matrix::column(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_)
    if (sgn(x) != 0) return false;
  return true;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw DomainError("matrix product: shape mismatch");
  Matrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (sgn(a) == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j)
        if (sgn(o(k, j)) != 0) r(i, j) += a * o(k, j);
    }
  return r;
}

Vector Matrix::operator*(const Vector& v) const {
  if (cols_ != v.size()) throw DomainError("matrix-vector product: shape mismatch");
  Vector r(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k)
      if (sgn((*this)(i, k)) != 0 && sgn(v[k]) != 0) r[i] += (*this)(i, k) * v[k];
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError("matrix sum: shape mismatch");
  Matrix r(*this);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError("matrix difference: shape mismatch");
  Matrix r(*this);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
  return r;
}

Echelon rref(Matrix m) {
  Echelon e;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && sgn(m(piv, col)) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t j = 0; j < m.cols(); ++j) swap(m(piv, j), m(row, j));
    Rational inv = 1 / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || sgn(m(i, col)) == 0) continue;
      Rational f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j)
        if (sgn(m(row, j)) != 0) m(i, j) -= f * m(row, j);
    }
    e.pivots.push_back(col);
    ++row;
  }
  e.reduced = std::move(m);
  return e;
}

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

std::vector<Vector> nullspace(const Matrix& m) {
  Echelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vector> out;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(m.cols());
    v[f] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, f);
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<Vector> solve(const Matrix& m, const Vector& rhs) {
  if (rhs.size() != m.rows()) throw DomainError("solve: shape mismatch");
  Matrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = rhs[i];
  }
  Echelon e = rref(std::move(aug));
  Vector x(m.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] == m.cols()) return std::nullopt;
    x[e.pivots[r]] = e.reduced(r, m.cols());
  }
  return x;
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  std::size_t n = m.rows();
  Matrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  Echelon e = rref(std::move(aug));
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

Matrix pseudo_inverse(const Matrix& m) {
  Echelon e = rref(m);
  std::size_t r = e.pivots.size();
  if (r == 0) return Matrix(m.cols(), m.rows());
  Matrix c(m.rows(), r), f(r, m.cols());
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t i = 0; i < m.rows(); ++i) c(i, k) = m(i, e.pivots[k]);
    for (std::size_t j = 0; j < m.cols(); ++j) f(k, j) = e.reduced(k, j);
  }
  Matrix ct = c.transpose(), ft = f.transpose();
  auto a = inverse(f * ft);
  auto b = inverse(ct * c);
  assert(a && b);
  return ft * (*a) * (*b) * ct;
}

Rational dot(const Vector& a, const Vector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

bool is_zero(const Vector& v) {
  for (const auto& x : v)
    if (sgn(x) != 0) return false;
  return true;
}

Subspace Subspace::span(std::size_t dim, const std::vector<Vector>& vectors) {
  Subspace s(dim);
  if (vectors.empty()) return s;
  Echelon e = rref(Matrix::from_rows(vectors, dim));
  for (std::size_t r = 0; r < e.pivots.size(); ++r) s.basis_.push_back(e.reduced.row(r));
  return s;
}

Subspace Subspace::whole(std::size_t dim) {
  Subspace s(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    Vector v(dim);
    v[i] = 1;
    s.basis_.push_back(std::move(v));
  }
  return s;
}

bool Subspace::contains(const Vector& v) const {
  Vector w = v;
  for (const auto& b : basis_) {
    std::size_t p = 0;
    while (sgn(b[p]) == 0) ++p;
    if (sgn(w[p]) == 0) continue;
    Rational f = w[p];
    for (std::size_t j = p; j < dim_; ++j)
      if (sgn(b[j]) != 0) w[j] -= f * b[j];
  }
  return carnot::is_zero(w);
}

bool Subspace::contains(const Subspace& o) const {
  for (const auto& v : o.basis_)
    if (!contains(v)) return false;
  return true;
}

Subspace Subspace::sum(const Subspace& o) const {
  std::vector<Vector> all = basis_;
  all.insert(all.end(), o.basis_.begin(), o.basis_.end());
  return span(dim_, all);
}

Subspace Subspace::orthogonal_complement() const {
  if (basis_.empty()) return whole(dim_);
  return span(dim_, nullspace(Matrix::from_rows(basis_, dim_)));
}

Subspace Subspace::intersect(const Subspace& o) const {
  return orthogonal_complement().sum(o.orthogonal_complement()).orthogonal_complement();
}

void SparseSystem::reduce(Row& r) const {
  std::vector<std::pair<std::size_t, Rational>> hits;
  for (const auto& [c, v] : r.coeffs)
    if (pivots_.count(c)) hits.emplace_back(c, v);
  for (const auto& [c, f] : hits) {
    const Row& p = pivots_.at(c);
    for (const auto& [j, v] : p.coeffs) {
      auto [it, inserted] = r.coeffs.try_emplace(j, 0);
      it->second -= f * v;
      if (sgn(it->second) == 0) r.coeffs.erase(it);
    }
    r.rhs -= f * p.rhs;
  }
}

bool SparseSystem::add_equation(SparseVector row, Rational rhs) {
  for (auto it = row.begin(); it != row.end();) {
    if (it->first >= cols_) throw DomainError("sparse system: column out of range");
    it = sgn(it->second) == 0 ? row.erase(it) : std::next(it);
  }
  Row r{std::move(row), std::move(rhs)};
  reduce(r);
  if (r.coeffs.empty()) {
    if (sgn(r.rhs) != 0) consistent_ = false;
    return sgn(r.rhs) == 0;
  }
  std::size_t piv = r.coeffs.begin()->first;
  Rational inv = 1 / r.coeffs.begin()->second;
  for (auto& [j, v] : r.coeffs) v *= inv;
  r.rhs *= inv;
  for (auto& [c, other] : pivots_) {
    auto hit = other.coeffs.find(piv);
    if (hit == other.coeffs.end()) continue;
    Rational f = hit->second;
    for (const auto& [j, v] : r.coeffs) {
      auto [it, inserted] = other.coeffs.try_emplace(j, 0);
      it->second -= f * v;
      if (sgn(it->second) == 0) other.coeffs.erase(it);
    }
    other.rhs -= f * r.rhs;
  }
  pivots_.emplace(piv, std::move(r));
  return true;
}

std::optional<SparseVector> SparseSystem::particular() const {
  if (!consistent_) return std::nullopt;
  SparseVector x;
  for (const auto& [c, r] : pivots_)
    if (sgn(r.rhs) != 0) x.emplace(c, r.rhs);
  return x;
}

std::vector<SparseVector> SparseSystem::nullspace() const {
  std::map<std::size_t, SparseVector> free_cols;
  for (std::size_t c = 0; c < cols_; ++c)
    if (!pivots_.count(c)) free_cols[c].emplace(c, 1);
  for (const auto& [p, r] : pivots_)
    for (const auto& [j, v] : r.coeffs)
      if (j != p) free_cols.at(j).emplace(p, -v);
  std::vector<SparseVector> out;
  for (auto& [c, v] : free_cols) out.push_back(std::move(v));
  return out;
}

}  // namespace carnot
