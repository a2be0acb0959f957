#include "carnot/fiber.hpp"

#include <algorithm>

#include "carnot/error.hpp"

namespace carnot {

std::vector<Mask> masks_of_degree(std::size_t n, int k) {
  std::vector<Mask> out;
  if (k < 0 || k > static_cast<int>(n)) return out;
  for (Mask m = 0; m <= full_mask(n); ++m) {
    if (mask_degree(m) == k) out.push_back(m);
    if (m == full_mask(n)) break;
  }
  std::sort(out.begin(), out.end(), [](Mask a, Mask b) { return mask_indices(a) < mask_indices(b); });
  return out;
}

std::string mask_to_string(Mask m, const std::vector<std::string>& labels) {
  if (m == 0) return "1";
  std::string s;
  for (int i : mask_indices(m)) {
    if (!s.empty()) s += "∧";
    s += i < static_cast<int>(labels.size()) ? labels[i] : "θ" + std::to_string(i + 1);
  }
  return s;
}

FiberComplex::FiberComplex(AlgebraPtr a) : algebra_(std::move(a)) {
  if (dim() > 16) throw DomainError("exterior algebra: dimension above 16 is not supported");
  for (int k = 0; k <= static_cast<int>(dim()); ++k)
    for (Mask m : masks_of_degree(dim(), k)) {
      auto& b = blocks_[{k, mask_weight(m, weights())}];
      position_[m] = b.size();
      b.push_back(m);
    }
}

std::set<int> FiberComplex::weights_in_degree(int k) const {
  std::set<int> out;
  for (const auto& [kp, b] : blocks_)
    if (kp.first == k) out.insert(kp.second);
  return out;
}

const std::vector<Mask>& FiberComplex::basis(int k, int p) const {
  auto it = blocks_.find({k, p});
  return it == blocks_.end() ? empty_ : it->second;
}

int FiberComplex::target_degree(Op op, int k) {
  switch (op) {
    case Op::D0: return k + 1;
    case Op::Delta0:
    case Op::D0Pinv: return k - 1;
    default: return k;
  }
}

FiberForm FiberComplex::d0_basis(Mask m) const {
  const auto& a = *algebra_;
  const std::size_t n = dim();
  FiberForm out(n, mask_degree(m) + 1);
  auto idx = mask_indices(m);
  for (std::size_t pos = 0; pos < idx.size(); ++pos) {
    Mask prefix = 0, suffix = 0;
    for (std::size_t q = 0; q < idx.size(); ++q) {
      if (q < pos) prefix |= Mask{1} << idx[q];
      if (q > pos) suffix |= Mask{1} << idx[q];
    }
    int k = idx[pos];
    // d theta_k = - sum_{i<j} c^k_ij theta_i ^ theta_j
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const Rational& c = a.structure_constant(i, j, k);
        if (sgn(c) == 0) continue;
        Mask t = (Mask{1} << i) | (Mask{1} << j);
        int s1 = wedge_sign(prefix, t);
        if (s1 == 0) continue;
        int s2 = wedge_sign(prefix | t, suffix);
        if (s2 == 0) continue;
        int sign = s1 * s2 * (pos % 2 ? -1 : 1);
        out.add(prefix | t | suffix, Rational(-c * sign));
      }
  }
  return out;
}

const Matrix& FiberComplex::block(Op op, int k, int p) const {
  std::lock_guard lock(mu_);
  auto key = std::make_tuple(static_cast<int>(op), k, p);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  Matrix m = compute(op, k, p);
  return cache_.emplace(key, std::move(m)).first->second;
}

Matrix FiberComplex::compute(Op op, int k, int p) const {
  const auto& src = basis(k, p);
  switch (op) {
    case Op::D0: {
      const auto& tgt = basis(k + 1, p);
      Matrix m(tgt.size(), src.size());
      for (std::size_t j = 0; j < src.size(); ++j) {
        FiberForm image = d0_basis(src[j]);
        for (const auto& [mask, c] : image.terms()) m(position(mask), j) = c;
      }
      return m;
    }
    case Op::Delta0:
      return block(Op::D0, k - 1, p).transpose();
    case Op::Box0:
      return block(Op::D0, k - 1, p) * block(Op::Delta0, k, p) +
             block(Op::Delta0, k + 1, p) * block(Op::D0, k, p);
    case Op::D0Pinv:
      return pseudo_inverse(block(Op::D0, k - 1, p));
    case Op::Pi0: {
      Matrix id = Matrix::identity(src.size());
      return id - block(Op::D0Pinv, k + 1, p) * block(Op::D0, k, p) -
             block(Op::D0, k - 1, p) * block(Op::D0Pinv, k, p);
    }
  }
  throw DomainError("unknown operator");
}

HodgeDecomposition FiberComplex::hodge_decompose(int k, int p) const {
  HodgeDecomposition h;
  h.degree = k;
  h.weight = p;
  h.basis = basis(k, p);
  const std::size_t n = h.basis.size();
  const Matrix& d_in = block(Op::D0, k - 1, p);
  const Matrix& d_out = block(Op::D0, k, p);
  std::vector<Vector> cols;
  for (std::size_t j = 0; j < d_in.cols(); ++j) cols.push_back(d_in.column(j));
  h.image_d0 = Subspace::span(n, cols);
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < d_out.rows(); ++i) rows.push_back(d_out.row(i));
  h.image_delta0 = Subspace::span(n, rows);
  h.harmonic = Subspace::span(n, nullspace(block(Op::Box0, k, p)));
  return h;
}

Vector FiberComplex::to_vector(const FiberForm& f, int k, int p) const {
  Vector v(basis(k, p).size());
  for (const auto& [m, c] : f.terms()) {
    if (mask_degree(m) != k || mask_weight(m, weights()) != p)
      throw DomainError("form is not of the requested bidegree");
    v[position(m)] = c;
  }
  return v;
}

FiberForm FiberComplex::from_vector(const Vector& v, int k, int p) const {
  FiberForm f(dim(), k);
  const auto& b = basis(k, p);
  for (std::size_t i = 0; i < v.size(); ++i) f.add(b.at(i), v[i]);
  return f;
}

bool non_splitting(const FiberComplex& fc) {
  for (int k = 0; k <= static_cast<int>(fc.dim()); ++k) {
    int count = 0;
    for (int p : fc.weights_in_degree(k))
      if (fc.hodge_decompose(k, p).harmonic.dimension() > 0) ++count;
    if (count != 1) return false;
  }
  return true;
}

}  // namespace carnot
