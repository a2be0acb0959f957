#pragma once

#include <vector>

#include "carnot/algebra.hpp"

namespace carnot {

// log(exp x exp y) by the Dynkin series, truncated at bracket depth equal
// to the largest weight.  Entries of x and y may live in any common ring.
std::vector<WeightedPoly> bch_product(const StratifiedAlgebra& a,
                                      const std::vector<WeightedPoly>& x,
                                      const std::vector<WeightedPoly>& y);

// Left-invariant vector fields in exponential coordinates:
// X_j = sum_k coeff[j][k] d/dx_k.
class Frame {
 public:
  Frame(const StratifiedAlgebra& a, RingPtr ring);

  const RingPtr& ring() const { return ring_; }
  std::size_t size() const { return coeff_.size(); }
  const WeightedPoly& coefficient(std::size_t j, std::size_t k) const { return coeff_[j][k]; }
  WeightedPoly apply(std::size_t j, const WeightedPoly& f) const;

 private:
  RingPtr ring_;
  std::vector<std::vector<WeightedPoly>> coeff_;
};

// Coordinate ring x1..xn with the algebra's weights (or the given names).
RingPtr coordinate_ring(const StratifiedAlgebra& a, std::vector<std::string> names = {});

}  // namespace carnot
