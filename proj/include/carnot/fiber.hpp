#pragma once

#include <map>
#include <mutex>
#include <set>
#include <tuple>
#include <vector>

#include "carnot/algebra.hpp"
#include "carnot/form.hpp"
#include "carnot/linalg.hpp"

namespace carnot {

struct HodgeDecomposition {
  int degree = 0;
  int weight = 0;
  std::vector<Mask> basis;  // coordinates of the subspaces below
  Subspace image_d0;
  Subspace harmonic;  // ker box0 = Rumin forms
  Subspace image_delta0;
};

// The left-invariant exterior algebra of an algebra, organised in blocks of
// fixed degree k and weight p.  Operator matrices are built on first use.
class FiberComplex {
 public:
  enum class Op { D0, Delta0, Box0, D0Pinv, Pi0 };

  explicit FiberComplex(AlgebraPtr a);

  const StratifiedAlgebra& algebra() const { return *algebra_; }
  const AlgebraPtr& algebra_ptr() const { return algebra_; }
  std::size_t dim() const { return algebra_->dim(); }
  const std::vector<int>& weights() const { return algebra_->weights(); }
  int homogeneous_dimension() const { return algebra_->homogeneous_dimension(); }

  std::set<int> weights_in_degree(int k) const;
  const std::vector<Mask>& basis(int k, int p) const;
  std::size_t position(Mask m) const { return position_.at(m); }

  static int target_degree(Op op, int k);
  const Matrix& block(Op op, int k, int p) const;

  template <class C>
  Form<C> apply(Op op, const Form<C>& f) const {
    Form<C> out(dim(), target_degree(op, f.degree()));
    for (const auto& [m, c] : f.terms()) {
      int p = mask_weight(m, weights());
      const Matrix& mat = block(op, f.degree(), p);
      const auto& target = basis(out.degree(), p);
      std::size_t col = position(m);
      for (std::size_t r = 0; r < mat.rows(); ++r)
        if (sgn(mat(r, col)) != 0) out.add(target[r], C(c * mat(r, col)));
    }
    return out;
  }

  template <class C>
  Form<C> star(const Form<C>& f) const {
    Mask full = full_mask(dim());
    Form<C> out(dim(), static_cast<int>(dim()) - f.degree());
    for (const auto& [m, c] : f.terms()) {
      Mask rest = full & ~m;
      out.add(rest, wedge_sign(m, rest) > 0 ? c : C(-c));
    }
    return out;
  }

  FiberForm d0(const FiberForm& f) const { return apply(Op::D0, f); }
  FiberForm delta0(const FiberForm& f) const { return apply(Op::Delta0, f); }
  FiberForm box0(const FiberForm& f) const { return apply(Op::Box0, f); }
  FiberForm d0_pinv(const FiberForm& f) const { return apply(Op::D0Pinv, f); }
  FiberForm pi0(const FiberForm& f) const { return apply(Op::Pi0, f); }
  FiberForm hodge_star(const FiberForm& f) const { return star(f); }

  // d0 of a single basis covector, from the structure constants.
  FiberForm d0_basis(Mask m) const;

  HodgeDecomposition hodge_decompose(int k, int p) const;

  Vector to_vector(const FiberForm& f, int k, int p) const;
  FiberForm from_vector(const Vector& v, int k, int p) const;

 private:
  Matrix compute(Op op, int k, int p) const;

  AlgebraPtr algebra_;
  std::map<std::pair<int, int>, std::vector<Mask>> blocks_;
  std::map<Mask, std::size_t> position_;
  std::vector<Mask> empty_;
  mutable std::recursive_mutex mu_;
  mutable std::map<std::tuple<int, int, int>, Matrix> cache_;
};

bool non_splitting(const FiberComplex& fc);

}  // namespace carnot
