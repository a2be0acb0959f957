#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "carnot/bch.hpp"
#include "carnot/fiber.hpp"
#include "carnot/form.hpp"
#include "carnot/frame_operator.hpp"
#include "carnot/poly.hpp"

namespace carnot {

using PolyForm = Form<WeightedPoly>;
using OperatorForm = Form<FrameOperator>;

// A group in exponential coordinates: algebra, coordinate ring, left-invariant
// frame and the fiber complex of invariant forms.
class Group {
 public:
  Group(StratifiedAlgebra a, std::string name = "", std::vector<std::string> coordinates = {},
        std::vector<std::string> covector_labels = {});

  const std::string& name() const { return name_; }
  const StratifiedAlgebra& algebra() const { return *algebra_; }
  const AlgebraPtr& algebra_ptr() const { return algebra_; }
  const FiberComplex& fiber() const { return fiber_; }
  const RingPtr& ring() const { return ring_; }
  const Frame& frame() const { return frame_; }
  std::size_t dim() const { return algebra_->dim(); }
  const std::vector<int>& weights() const { return algebra_->weights(); }
  int step() const { return algebra_->step(); }
  const std::vector<std::string>& covector_labels() const { return covector_labels_; }

  WeightedPoly poly(std::string_view text) const { return parse_poly(text, ring_); }
  WeightedPoly constant(const Rational& c) const { return WeightedPoly::constant(ring_, c); }
  PolyForm form(Mask m, const WeightedPoly& f) const { return PolyForm::single(dim(), m, f); }
  PolyForm lift(const FiberForm& f) const;

  std::string to_string(const PolyForm& f) const;
  std::string to_string(const FiberForm& f) const;
  std::string to_string(const OperatorForm& f, const std::string& fname = "f") const;

 private:
  std::string name_;
  AlgebraPtr algebra_;
  RingPtr ring_;
  Frame frame_;
  FiberComplex fiber_;
  std::vector<std::string> covector_labels_;
};

using GroupPtr = std::shared_ptr<const Group>;

GroupPtr make_group(StratifiedAlgebra a, std::string name = "",
                    std::vector<std::string> coordinates = {},
                    std::vector<std::string> covector_labels = {});

// d on forms with coefficients in C, given the action of X_l on a
// coefficient.  only: nullopt -> full d, 0 -> d0, i -> d_i.
template <class C, class Derive>
Form<C> exterior_derivative_with(const FiberComplex& fc, const Form<C>& a, Derive&& derive,
                                 std::optional<int> only = std::nullopt) {
  Form<C> out(fc.dim(), a.degree() + 1);
  if (!only || *only == 0) out += fc.apply(FiberComplex::Op::D0, a);
  if (only && *only == 0) return out;
  for (const auto& [m, c] : a.terms())
    for (std::size_t l = 0; l < fc.dim(); ++l) {
      Mask bit = Mask{1} << l;
      if (m & bit) continue;
      if (only && fc.weights()[l] != *only) continue;
      C dc = derive(l, c);
      if (is_zero(dc)) continue;
      out.add(m | bit, wedge_sign(bit, m) > 0 ? dc : C(-dc));
    }
  return out;
}

PolyForm exterior_derivative(const Group& g, const PolyForm& a);
PolyForm d_component(const Group& g, const PolyForm& a, int i);
OperatorForm exterior_derivative(const Group& g, const OperatorForm& a);
OperatorForm d_component(const Group& g, const OperatorForm& a, int i);

// Components d_0 a, d_1 a, ..., d_s a of a form homogeneous of weight p.
std::vector<PolyForm> weight_split_d(const Group& g, const PolyForm& a, int p);

// Form weight of a nonzero homogeneous form; throws on mixed weights.
std::optional<int> form_weight(const Group& g, const PolyForm& a);

int max_coefficient_degree(const PolyForm& a);
std::map<int, PolyForm> split_by_coefficient_degree(const PolyForm& a);

// Apply a fiber operator coefficientwise (all of d0, delta0, Pi0, d0^{-1}
// are C^infinity-linear).
inline PolyForm apply_fiber(const Group& g, FiberComplex::Op op, const PolyForm& a) {
  return g.fiber().apply(op, a);
}

struct TruncationSpace {
  int degree = 0;
  std::optional<int> weight;
  int bound = 0;
  std::vector<std::pair<Exponent, Mask>> basis;
};

TruncationSpace enumerate_truncation(const Group& g, int k, std::optional<int> p, int D);

struct MulticomplexReport {
  bool ok = true;
  std::size_t elements_checked = 0;
  std::size_t identities_checked = 0;
  std::optional<std::string> first_violation;
};

MulticomplexReport multicomplex_check(const Group& g, int kmin, int kmax, int D);

}  // namespace carnot
