#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "carnot/linalg.hpp"
#include "carnot/poly.hpp"

namespace carnot {

// Finite-dimensional nilpotent Lie algebra in an adapted basis X_1..X_n
// (stored 0-based), each basis vector carrying a positive integer weight.
class StratifiedAlgebra {
 public:
  StratifiedAlgebra(std::vector<std::string> labels, std::vector<int> weights);

  std::size_t dim() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  int weight(std::size_t i) const { return weights_.at(i); }
  const std::vector<int>& weights() const { return weights_; }
  int step() const;
  int homogeneous_dimension() const;

  // c^k_ij; set_bracket also stores c^k_ji = -c^k_ij.
  const Rational& structure_constant(std::size_t i, std::size_t j, std::size_t k) const {
    return c_[(i * dim() + j) * dim() + k];
  }
  void set_structure_constant(std::size_t i, std::size_t j, std::size_t k, const Rational& v) {
    c_[(i * dim() + j) * dim() + k] = v;
  }
  void set_bracket(std::size_t i, std::size_t j, const Vector& value);
  Vector bracket(std::size_t i, std::size_t j) const;
  Vector bracket(const Vector& a, const Vector& b) const;
  std::vector<WeightedPoly> bracket(const std::vector<WeightedPoly>& a,
                                    const std::vector<WeightedPoly>& b) const;

  bool operator==(const StratifiedAlgebra& o) const {
    return labels_ == o.labels_ && weights_ == o.weights_ && c_ == o.c_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<int> weights_;
  std::vector<Rational> c_;
};

using AlgebraPtr = std::shared_ptr<const StratifiedAlgebra>;

struct AlgebraValidation {
  std::vector<std::string> failures;  // hard axioms: antisymmetry, Jacobi, grading
  bool generated_by_layer_one = true;
  int homogeneous_dimension = 0;

  bool lie_algebra_ok() const { return failures.empty(); }
  // Valid graded algebra; with strict, also stratified (layer 1 generates).
  bool ok(bool strict) const { return failures.empty() && (!strict || generated_by_layer_one); }
  std::string summary() const;
};

AlgebraValidation validate_algebra(const StratifiedAlgebra& a);

// δ_λ v, with λ as the single variable "lambda" of weight 1.
std::vector<WeightedPoly> dilation_apply(const StratifiedAlgebra& a, const Vector& v);
const RingPtr& lambda_ring();

struct HomCheck {
  bool brackets_ok = true;
  bool block_diagonal = true;
  std::optional<std::pair<std::size_t, std::size_t>> failing_pair;

  bool ok() const { return brackets_ok && block_diagonal; }
};

// m is target-dim x source-dim.
HomCheck hom_check(const StratifiedAlgebra& source, const StratifiedAlgebra& target,
                   const Matrix& m);

using PolyMatrix = std::vector<std::vector<WeightedPoly>>;

// Bracket preservation checked as a polynomial identity in the entries.
HomCheck hom_check(const StratifiedAlgebra& source, const StratifiedAlgebra& target,
                   const PolyMatrix& m);

Matrix evaluate(const PolyMatrix& m, std::span<const Rational> point);

}  // namespace carnot
