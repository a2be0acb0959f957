#pragma once

#include <map>
#include <optional>
#include <vector>

#include "carnot/rational.hpp"

namespace carnot {

using Vector = std::vector<Rational>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n);
  static Matrix from_columns(const std::vector<Vector>& cols, std::size_t rows);
  static Matrix from_rows(const std::vector<Vector>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector row(std::size_t i) const;
  Vector column(std::size_t j) const;
  Matrix transpose() const;
  bool is_zero() const;

  Matrix operator*(const Matrix& o) const;
  Vector operator*(const Vector& v) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

struct Echelon {
  Matrix reduced;                 // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

Echelon rref(Matrix m);
std::size_t rank(const Matrix& m);
// Basis of {x : m x = 0}, one vector per free column.
std::vector<Vector> nullspace(const Matrix& m);
std::optional<Vector> solve(const Matrix& m, const Vector& rhs);
std::optional<Matrix> inverse(const Matrix& m);
Matrix pseudo_inverse(const Matrix& m);

Rational dot(const Vector& a, const Vector& b);
bool is_zero(const Vector& v);

// A linear subspace of Q^dim held as a reduced row echelon basis, so two
// subspaces are equal exactly when their bases are.
class Subspace {
 public:
  explicit Subspace(std::size_t dim = 0) : dim_(dim) {}
  static Subspace span(std::size_t dim, const std::vector<Vector>& vectors);
  static Subspace whole(std::size_t dim);

  std::size_t ambient() const { return dim_; }
  std::size_t dimension() const { return basis_.size(); }
  const std::vector<Vector>& basis() const { return basis_; }

  bool contains(const Vector& v) const;
  bool contains(const Subspace& o) const;
  Subspace intersect(const Subspace& o) const;
  Subspace sum(const Subspace& o) const;
  Subspace orthogonal_complement() const;
  bool operator==(const Subspace& o) const { return dim_ == o.dim_ && basis_ == o.basis_; }

 private:
  std::size_t dim_;
  std::vector<Vector> basis_;
};

using SparseVector = std::map<std::size_t, Rational>;

// Incremental sparse Gauss-Jordan elimination for A x = b.  Rows are kept
// fully reduced; each pivot is the smallest column of its row.
class SparseSystem {
 public:
  explicit SparseSystem(std::size_t cols) : cols_(cols) {}

  std::size_t cols() const { return cols_; }
  // Returns false when the row reduces to 0 = nonzero.
  bool add_equation(SparseVector row, Rational rhs = 0);
  bool consistent() const { return consistent_; }
  std::size_t rank() const { return pivots_.size(); }

  // Solution with every free variable set to zero.
  std::optional<SparseVector> particular() const;
  std::vector<SparseVector> nullspace() const;

 private:
  struct Row {
    SparseVector coeffs;
    Rational rhs;
  };
  void reduce(Row& r) const;

  std::size_t cols_;
  std::map<std::size_t, Row> pivots_;  // pivot column -> row
  bool consistent_ = true;
};

}  // namespace carnot
