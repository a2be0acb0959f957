#pragma once

#include <optional>
#include <string>
#include <vector>

#include "carnot/derham.hpp"
#include "carnot/spectral.hpp"

namespace carnot {

// φ : G1 -> G2 in exponential coordinates; components[i] is the i-th target
// coordinate as a polynomial in the source coordinates.
struct PolyMap {
  GroupPtr source;
  GroupPtr target;
  std::vector<WeightedPoly> components;
};

PolyMap make_map(GroupPtr source, GroupPtr target, std::vector<WeightedPoly> components);
PolyMap parse_map(GroupPtr source, GroupPtr target, const std::vector<std::string>& components);
PolyMap identity_map(GroupPtr g);
// φ∘ψ (first ψ, then φ).
PolyMap compose(const PolyMap& phi, const PolyMap& psi);
// Left translation x ↦ a∗x.
PolyMap left_translation(GroupPtr g, const std::vector<Rational>& a);
// A constant matrix (target x source) acting on exponential coordinates.
PolyMap linear_map(GroupPtr source, GroupPtr target, const Matrix& m);

// f∘φ for f in the target ring.
WeightedPoly pull_function(const PolyMap& phi, const WeightedPoly& f);

// Classical differential of φ in the left-invariant frames at x and φ(x):
// a_ij = Π_i Σ_m (−1)^m/(m+1)! ad(φ(x))^m (Σ_k (X_j φ_k) e_k).
PolyMatrix adapted_jacobian(const PolyMap& phi);

struct ContactViolation {
  std::size_t row = 0;  // target index i
  std::size_t col = 0;  // source index j
  WeightedPoly value;
};

struct ContactReport {
  bool layer_one_only = false;
  std::vector<ContactViolation> violations;
  bool ok() const { return violations.empty(); }
};

// All a_ij with w(X_j) < w(Y_i) must vanish; with layer_one_only only the
// columns of weight 1 are tested.
ContactReport contact_check(const PolyMap& phi, bool layer_one_only = false);
ContactReport contact_check(const PolyMap& phi, const PolyMatrix& jacobian, bool layer_one_only);

class ContactError : public DomainError {
 public:
  ContactError(const std::string& what, ContactViolation v) : DomainError(what), v_(std::move(v)) {}
  const ContactViolation& violation() const { return v_; }

 private:
  ContactViolation v_;
};

struct PansuDerivative {
  PolyMatrix matrix;  // target dim x source dim, block diagonal
  HomCheck hom;
  std::string hom_mode;  // "identity" or "sampled"
};

// Throws ContactError on the first violated contact equation.
PansuDerivative pansu_derivative(const PolyMap& phi);

// θ_i ↦ Σ_j M_ij θ_j, extended multiplicatively, coefficients composed with φ.
PolyForm pullback_with(const PolyMap& phi, const PolyMatrix& m, const PolyForm& alpha);
PolyForm pansu_pullback(const PolyMap& phi, const PolyForm& alpha);
PolyForm pansu_pullback(const PolyMap& phi, const PansuDerivative& dp, const PolyForm& alpha);
// Same with the full adapted Jacobian; commutes with d.
PolyForm classical_pullback(const PolyMap& phi, const PolyForm& alpha);

struct CommutativityReport {
  int page = 1;
  int bound = 0;
  PolyForm lhs;         // φ*Δ_i α
  PolyForm rhs;         // Δ_i φ*α
  PolyForm difference;  // lhs − rhs
  std::optional<WitnessChain> pulled_chain;
  std::optional<BoundaryCertificate> certificate;
  bool pullback_in_z = false;
  bool difference_in_b = false;
  bool ok() const { return pullback_in_z && difference_in_b; }
};

// chain is a witness chain of order >= page on the target group.  D caps
// coefficient degrees; nullopt picks the smallest bound under which every
// solve is exact.
CommutativityReport commutativity_check(const PolyMap& phi, const WitnessChain& chain, int page,
                                        std::optional<int> D = std::nullopt);

struct BoundaryPullback {
  std::optional<BoundaryCertificate> source_certificate;  // for α on the target
  std::optional<BoundaryCertificate> image_certificate;   // for φ*α on the source
  int bound = 0;
  bool ok() const { return !source_certificate || image_certificate.has_value(); }
};

// If α ∈ B_i(G2), is φ*α ∈ B_i(G1)?
BoundaryPullback boundary_pullback_check(const PolyMap& phi, const PolyForm& alpha, int page,
                                         std::optional<int> D = std::nullopt);

// d φ*g − φ*d g for a function g on the target.
PolyForm exterior_discrepancy(const PolyMap& phi, const WeightedPoly& g);

struct RuminDiscrepancy {
  PolyForm pulled;     // φ*α
  PolyForm lhs;        // d_c Π₀ φ*α
  PolyForm rhs;        // φ*d_c α
  PolyForm raw;        // lhs − rhs
  PolyForm projected;  // lhs − Π₀ rhs
};

RuminDiscrepancy dc_noncommutativity_witness(const PolyMap& phi, const PolyForm& alpha);

int max_total_degree(const PolyMatrix& m);

}  // namespace carnot
