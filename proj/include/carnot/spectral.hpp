#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "carnot/derham.hpp"
#include "carnot/linalg.hpp"

namespace carnot {

// One coefficient monomial times one covector.
using TermKey = std::pair<Mask, Exponent>;

// Forms of degree k, weight p whose coefficients are homogeneous of weighted
// degree e.  Every d_i maps cell (k, p, e) to (k+1, p+i, e-i), so all the
// Z_r / B_r problems below decompose into finite cell-by-cell solves.
struct Cell {
  int degree = 0;
  int weight = 0;
  int coeff_degree = 0;
  auto operator<=>(const Cell&) const = default;
};

struct WitnessChain {
  PolyForm alpha;
  int weight = 0;
  std::vector<PolyForm> z;  // z[j-1] = z_{p+j}
  int order() const { return static_cast<int>(z.size()) + 1; }
};

struct BoundaryCertificate {
  int weight = 0;
  std::vector<PolyForm> c;  // c[j] = c_{p-j}
};

// A class in Z_r/B_r at (degree, weight): equality is membership of the
// difference of representatives in B_r.
struct CosetForm {
  PolyForm representative;
  int r = 1;
  int degree = 0;
  int weight = 0;
  int bound = 0;
};

struct StarDuality {
  bool ok = true;
  Subspace source;  // E_{r1,r2}^{p,k-p}, invariant slice
  Subspace image;   // its Hodge star
  Subspace target;  // E_{r2,r1}^{Q-p, n-k-Q+p}
};

class SpectralEngine {
 public:
  explicit SpectralEngine(GroupPtr g);

  const Group& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }

  const std::vector<TermKey>& cell_basis(const Cell& c) const;
  Vector to_vector(const PolyForm& f, const Cell& c) const;
  PolyForm from_vector(const Vector& v, const Cell& c) const;
  // d_i of one cell basis element.
  const PolyForm& d_image(int i, const TermKey& t) const;

  // D caps the coefficient degree of the input and of every unknown; a solve
  // that would need more throws TruncationError instead of clipping.
  std::optional<WitnessChain> z_membership(const PolyForm& alpha, int r, int D) const;
  std::optional<BoundaryCertificate> b_membership(const PolyForm& alpha, int r, int D) const;
  bool in_z(const PolyForm& alpha, int r, int D) const { return z_membership(alpha, r, D).has_value(); }
  bool in_b(const PolyForm& alpha, int r, int D) const { return b_membership(alpha, r, D).has_value(); }

  // Smallest cap under which the B_r solve for a form of this bidegree and
  // coefficient degree is unclipped.
  int required_bound_b(int k, int p, int e, int r) const;

  bool verify(const WitnessChain& w) const;
  bool verify(const BoundaryCertificate& c, const PolyForm& alpha) const;

  CosetForm delta_r(const WitnessChain& w, int r, int D) const;
  bool equal(const CosetForm& a, const CosetForm& b) const;

  // Z_r and B_r inside one cell, in the coordinates of cell_basis.  With
  // clip, unknowns above D are dropped, i.e. the modules of the
  // sub-multicomplex of forms with coefficient degree <= D.
  Subspace z_space(int r, const Cell& c, int D, bool clip = false) const;
  Subspace b_space(int r, const Cell& c, int D, bool clip = false) const;

  // Z_j ∩ B_l^⊥ over all cells with coefficient degree <= D, using the
  // product in which monomial-times-covector terms are orthonormal.
  std::vector<PolyForm> e_space_basis(int j, int l, int p, int k, int D) const;

  // ⋆E_{r1,r2}^{p,k-p} = E_{r2,r1}^{Q-p,n-k-Q+p} on left-invariant forms.
  StarDuality star_duality_check(int r1, int r2, int p, int k) const;

 private:
  GroupPtr group_;
  mutable std::mutex mu_;
  mutable std::map<Cell, std::vector<TermKey>> cells_;
  mutable std::map<std::tuple<int, Mask, Exponent>, PolyForm> images_;
};

// Rumin differential d_c = Π₀ d (Σ_m (−d₀⁻¹(d − d₀))^m).
PolyForm rumin_dc(const Group& g, const PolyForm& alpha);
OperatorForm rumin_dc(const Group& g, const OperatorForm& alpha);
// d_c^j α for a Rumin form of homogeneous weight p: the weight p+j part.
std::map<int, PolyForm> dc_weight_split(const Group& g, const PolyForm& alpha);
std::map<int, OperatorForm> dc_weight_split(const Group& g, const OperatorForm& alpha);

bool is_rumin_form(const Group& g, const PolyForm& alpha);

}  // namespace carnot
