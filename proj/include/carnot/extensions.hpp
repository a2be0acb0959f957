#pragma once

#include <optional>
#include <string>
#include <vector>

#include "carnot/pansu.hpp"

namespace carnot {

// d0 ω = 0 for an invariant 2-form.
bool cocycle_check(const Group& g, const FiberForm& omega);
// η with d0 η = ω, if ω is exact.
std::optional<FiberForm> coboundary_solve(const Group& g, const FiberForm& omega);

// Positive integer weights making every bracket homogeneous, smallest total
// first; the free weights of the solution space are searched up to a small
// bound.
std::optional<std::vector<int>> find_positive_grading(const StratifiedAlgebra& a);

struct CentralExtension {
  GroupPtr base;
  FiberForm cocycle;
  // base basis followed by the central generator W; [X,Y] gains ω(X,Y) W
  AlgebraPtr extended;
  bool homogeneous = false;    // ω has a single weight p, and w(W) = p
  bool graded = false;         // extended weights make every bracket homogeneous
  bool stratifiable = false;   // homogeneous ω over a stratified base
  bool layer_one_generates = false;  // with the weights stored in extended
  bool trivial = false;        // ω is a coboundary
  std::optional<FiberForm> primitive;  // η with d0 η = ω when trivial
};

// Throws DomainError when ω is not a cocycle unless force is set (then the
// extended bracket fails Jacobi).
CentralExtension central_extend(GroupPtr base, const FiberForm& omega, bool force = false,
                                std::string central_label = "");
GroupPtr extension_group(const CentralExtension& e, std::string name = "");

struct LiftedHom {
  PolyMatrix base;     // φ, n2 x n1
  PolyForm eta;        // 1-form on the source, Φ(u, X) = (c u + η(X), φ X)
  WeightedPoly scale;  // c
  PolyMatrix matrix;   // (n2+1) x (n1+1)
  HomCheck hom;
  bool projection_ok = true;  // π2 ∘ Φ = φ ∘ π1
};

struct LiftResult {
  std::optional<LiftedHom> lift;
  std::optional<PolyForm> obstruction;  // Im d0-complement part of ω1 − φ*ζ
  bool ok() const { return lift.has_value(); }
};

struct LiftOptions {
  // Also solve for the central scale c (c ω1 − φ*ζ = d0 η) when c = 1 fails.
  bool rescale = false;
};

// φ is a homomorphism field g1 -> g2 (constant entries for a plain graded
// homomorphism); ω1 lives on g1, ζ on g2.
LiftResult lift_homomorphism(const Group& g1, const Group& g2, const PolyMatrix& phi,
                             const FiberForm& omega1, const FiberForm& zeta, LiftOptions opt = {});
LiftResult lift_homomorphism(const Group& g1, const Group& g2, const Matrix& phi,
                             const FiberForm& omega1, const FiberForm& zeta, LiftOptions opt = {});

// Φ = Id + μ : ĝ_{ω + d0 μ} -> ĝ_ω, checked as a homomorphism.
struct ExtensionIsomorphism {
  Matrix matrix;
  HomCheck hom;
  bool ok() const { return hom.brackets_ok; }
};
ExtensionIsomorphism coboundary_isomorphism(const CentralExtension& shifted,
                                            const CentralExtension& original, const FiberForm& mu);

// φ*θ_I with constant-free pulled covectors Σ_j M_ij θ_j (no coefficient
// composition: the form is invariant).
PolyForm pull_invariant(const Group& g1, const PolyMatrix& m, const FiberForm& zeta);

struct PrimitiveStep {
  int weight = 0;              // s
  FiberForm component;         // ω_s
  std::optional<PolyForm> alpha;  // α_{s-1}, horizontal, d_c^{s-1} α = ω_s
  PolyForm pulled;             // φ*α_{s-1}
  PolyForm image;              // d_c^{s-1} φ*α_{s-1}
};

struct LiftWorkflow {
  std::vector<PrimitiveStep> steps;
  PolyForm zeta_prime;     // Σ_s d_c^{s-1} φ*α_{s-1}
  PolyForm pulled_omega;   // φ*ω
  bool commutes_mod_d0 = false;  // φ*ω − ζ' ∈ Im d0
  bool left_invariant = false;
  std::optional<PolyForm> residual;  // non-constant part of ζ'
  std::optional<std::string> failure;
  std::optional<CentralExtension> target_extension;
  std::optional<CentralExtension> source_extension;
  std::optional<LiftedHom> lift;
  bool ok() const { return lift.has_value(); }
};

// D caps the coefficient degree of the primitives α_{s-1}.
LiftWorkflow lift_pansu_workflow(const PolyMap& phi, const FiberForm& omega, int D);

}  // namespace carnot
