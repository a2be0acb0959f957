#include "carnot/spectral.hpp"

#include <algorithm>

#include "carnot/error.hpp"

namespace carnot {

namespace {

using Op = FiberComplex::Op;

// A block-structured linear problem: unknowns are the coordinates of forms in
// a list of cells, equations are indexed by (equation id, output term).
class Problem {
 public:
  explicit Problem(const SpectralEngine& eng) : eng_(eng) {}

  int add_block(const Cell& c) {
    blocks_.push_back({c, cols_});
    cols_ += eng_.cell_basis(c).size();
    return static_cast<int>(blocks_.size()) - 1;
  }
  std::size_t cols() const { return cols_; }

  // Adds d_i(block b) into equation eq.
  void add_operator(int eq, int i, int b, const Rational& scale = 1) {
    const auto& blk = blocks_.at(b);
    const auto& basis = eng_.cell_basis(blk.cell);
    for (std::size_t t = 0; t < basis.size(); ++t) {
      const PolyForm& img = eng_.d_image(i, basis[t]);
      for (const auto& [m, f] : img.terms())
        for (const auto& [e, c] : f.terms()) {
          Rational& slot = rows_[{eq, {m, e}}][blk.offset + t];
          slot += c * scale;
          if (sgn(slot) == 0) rows_[{eq, {m, e}}].erase(blk.offset + t);
        }
    }
  }
  void add_rhs(int eq, const PolyForm& f) {
    for (const auto& [m, p] : f.terms())
      for (const auto& [e, c] : p.terms()) {
        rhs_[{eq, {m, e}}] += c;
        rows_[{eq, {m, e}}];
      }
  }

  SparseSystem system(int first_eq = 0) const {
    SparseSystem s(cols_);
    for (const auto& [key, row] : rows_) {
      if (key.first < first_eq) continue;
      auto it = rhs_.find(key);
      s.add_equation(row, it == rhs_.end() ? Rational(0) : it->second);
    }
    return s;
  }

  PolyForm block_form(const SparseVector& x, int b) const {
    const auto& blk = blocks_.at(b);
    Vector v(eng_.cell_basis(blk.cell).size());
    for (std::size_t t = 0; t < v.size(); ++t) {
      auto it = x.find(blk.offset + t);
      if (it != x.end()) v[t] = it->second;
    }
    return eng_.from_vector(v, blk.cell);
  }
  Vector block_vector(const SparseVector& x, int b) const {
    const auto& blk = blocks_.at(b);
    Vector v(eng_.cell_basis(blk.cell).size());
    for (std::size_t t = 0; t < v.size(); ++t) {
      auto it = x.find(blk.offset + t);
      if (it != x.end()) v[t] = it->second;
    }
    return v;
  }
  // Left-hand side of equation eq at x, in the coordinates of cell c.
  Vector evaluate(int eq, const SparseVector& x, const Cell& c) const {
    const auto& basis = eng_.cell_basis(c);
    Vector out(basis.size());
    for (std::size_t t = 0; t < basis.size(); ++t) {
      auto it = rows_.find({eq, basis[t]});
      if (it == rows_.end()) continue;
      for (const auto& [col, v] : it->second) {
        auto xv = x.find(col);
        if (xv != x.end()) out[t] += v * xv->second;
      }
    }
    return out;
  }

 private:
  struct Block {
    Cell cell;
    std::size_t offset;
  };
  const SpectralEngine& eng_;
  std::vector<Block> blocks_;
  std::size_t cols_ = 0;
  std::map<std::pair<int, TermKey>, SparseVector> rows_;
  std::map<std::pair<int, TermKey>, Rational> rhs_;
};

int homogeneous_weight(const Group& g, const PolyForm& a) {
  auto p = form_weight(g, a);
  return p ? *p : 0;
}

void check_input_degree(const PolyForm& a, int D) {
  int e = max_coefficient_degree(a);
  if (e > D) throw TruncationError("input coefficient degree exceeds the truncation bound", e, D);
}

bool has_masks(const Group& g, int k, int p) {
  return k >= 0 && !g.fiber().basis(k, p).empty();
}

}  // namespace

SpectralEngine::SpectralEngine(GroupPtr g) : group_(std::move(g)) {}

const std::vector<TermKey>& SpectralEngine::cell_basis(const Cell& c) const {
  std::lock_guard lock(mu_);
  auto it = cells_.find(c);
  if (it != cells_.end()) return it->second;
  std::vector<TermKey> basis;
  if (c.degree >= 0 && c.coeff_degree >= 0) {
    auto monos = monomials_of_weight(*group_->ring(), c.coeff_degree);
    for (Mask m : group_->fiber().basis(c.degree, c.weight))
      for (const auto& e : monos) basis.emplace_back(m, e);
  }
  return cells_.emplace(c, std::move(basis)).first->second;
}

Vector SpectralEngine::to_vector(const PolyForm& f, const Cell& c) const {
  const auto& basis = cell_basis(c);
  Vector v(basis.size());
  for (const auto& [m, p] : f.terms())
    for (const auto& [e, coef] : p.terms()) {
      auto it = std::find(basis.begin(), basis.end(), TermKey{m, e});
      if (it == basis.end()) throw DomainError("form has terms outside the requested cell");
      v[it - basis.begin()] = coef;
    }
  return v;
}

PolyForm SpectralEngine::from_vector(const Vector& v, const Cell& c) const {
  const auto& basis = cell_basis(c);
  PolyForm f(group_->dim(), c.degree);
  for (std::size_t t = 0; t < basis.size(); ++t)
    if (sgn(v.at(t)) != 0)
      f.add(basis[t].first, WeightedPoly::monomial(group_->ring(), basis[t].second, v[t]));
  return f;
}

const PolyForm& SpectralEngine::d_image(int i, const TermKey& t) const {
  std::lock_guard lock(mu_);
  auto key = std::make_tuple(i, t.first, t.second);
  auto it = images_.find(key);
  if (it != images_.end()) return it->second;
  PolyForm f = group_->form(t.first, WeightedPoly::monomial(group_->ring(), t.second));
  return images_.emplace(key, d_component(*group_, f, i)).first->second;
}

std::optional<WitnessChain> SpectralEngine::z_membership(const PolyForm& alpha, int r, int D) const {
  if (r < 1) throw DomainError("page index r must be at least 1");
  const Group& g = *group_;
  WitnessChain w;
  w.alpha = alpha;
  w.weight = homogeneous_weight(g, alpha);
  const int k = alpha.degree(), p = w.weight;
  for (int j = 1; j < r; ++j) w.z.emplace_back(g.dim(), k);
  check_input_degree(alpha, D);
  if (!apply_fiber(g, Op::D0, alpha).is_zero()) return std::nullopt;
  if (r == 1) return w;
  for (const auto& [e, part] : split_by_coefficient_degree(alpha)) {
    Problem pb(*this);
    std::vector<int> blocks(r);
    for (int j = 1; j < r; ++j) blocks[j] = pb.add_block({k, p + j, e - j});
    for (int n = 1; n < r; ++n) {
      for (int i = 0; i < n; ++i) pb.add_operator(n, i, blocks[n - i]);
      pb.add_rhs(n, d_component(g, part, n));
    }
    auto x = pb.system().particular();
    if (!x) return std::nullopt;
    for (int j = 1; j < r; ++j) w.z[j - 1] += pb.block_form(*x, blocks[j]);
  }
  return w;
}

int SpectralEngine::required_bound_b(int k, int p, int e, int r) const {
  int need = e;
  for (int j = 0; j < r; ++j)
    if (has_masks(*group_, k - 1, p - j)) need = std::max(need, e + j);
  return need;
}

std::optional<BoundaryCertificate> SpectralEngine::b_membership(const PolyForm& alpha, int r,
                                                                int D) const {
  if (r < 1) throw DomainError("page index r must be at least 1");
  const Group& g = *group_;
  BoundaryCertificate cert;
  cert.weight = homogeneous_weight(g, alpha);
  const int k = alpha.degree(), p = cert.weight;
  for (int j = 0; j < r; ++j) cert.c.emplace_back(g.dim(), std::max(k - 1, 0));
  check_input_degree(alpha, D);
  if (alpha.is_zero()) return cert;
  if (k == 0) return std::nullopt;
  for (const auto& [e, part] : split_by_coefficient_degree(alpha)) {
    int need = required_bound_b(k, p, e, r);
    if (need > D) throw TruncationError("boundary certificate needs a larger truncation bound", need, D);
    Problem pb(*this);
    std::vector<int> blocks(r);
    for (int j = 0; j < r; ++j) blocks[j] = pb.add_block({k - 1, p - j, e + j});
    for (int j = 0; j < r; ++j) pb.add_operator(0, j, blocks[j]);
    pb.add_rhs(0, part);
    for (int l = 1; l < r; ++l)
      for (int j = l; j < r; ++j) pb.add_operator(l, j - l, blocks[j]);
    auto x = pb.system().particular();
    if (!x) return std::nullopt;
    for (int j = 0; j < r; ++j) cert.c[j] += pb.block_form(*x, blocks[j]);
  }
  return cert;
}

bool SpectralEngine::verify(const WitnessChain& w) const {
  const Group& g = *group_;
  if (!apply_fiber(g, Op::D0, w.alpha).is_zero()) return false;
  const int r = w.order(), p = w.weight;
  for (int j = 1; j < r; ++j) {
    const auto& z = w.z[j - 1];
    if (z.is_zero()) continue;
    if (z.degree() != w.alpha.degree() || z.weights(g.weights()) != std::set<int>{p + j}) return false;
  }
  for (int n = 1; n < r; ++n) {
    PolyForm lhs = d_component(g, w.alpha, n);
    for (int i = 0; i < n; ++i) lhs -= d_component(g, w.z[n - i - 1], i);
    if (!lhs.is_zero()) return false;
  }
  return true;
}

bool SpectralEngine::verify(const BoundaryCertificate& cert, const PolyForm& alpha) const {
  const Group& g = *group_;
  const int r = static_cast<int>(cert.c.size());
  PolyForm sum(g.dim(), alpha.degree());
  for (int j = 0; j < r; ++j) sum += d_component(g, cert.c[j], j);
  if (!(sum == alpha)) return false;
  for (int l = 1; l < r; ++l) {
    PolyForm side(g.dim(), alpha.degree());
    for (int j = l; j < r; ++j) side += d_component(g, cert.c[j], j - l);
    if (!side.is_zero()) return false;
  }
  return true;
}

CosetForm SpectralEngine::delta_r(const WitnessChain& w, int r, int D) const {
  if (r < 1 || w.order() < r || !verify(w)) throw DomainError("invalid witness chain");
  const Group& g = *group_;
  CosetForm out;
  out.r = r;
  out.degree = w.alpha.degree() + 1;
  out.weight = w.weight + r;
  out.bound = D;
  out.representative = d_component(g, w.alpha, r);
  for (int i = 1; i < r; ++i) out.representative -= d_component(g, w.z[r - i - 1], i);
  return out;
}

bool SpectralEngine::equal(const CosetForm& a, const CosetForm& b) const {
  if (a.r != b.r || a.degree != b.degree || a.weight != b.weight)
    throw DomainError("comparing classes of different modules");
  PolyForm diff = a.representative;
  diff -= b.representative;
  return in_b(diff, a.r, std::max(a.bound, b.bound));
}

Subspace SpectralEngine::z_space(int r, const Cell& c, int D, bool clip) const {
  (void)clip;  // Z_r unknowns never exceed the input's own coefficient degree
  if (c.coeff_degree > D) throw TruncationError("cell above the truncation bound", c.coeff_degree, D);
  Problem pb(*this);
  int a = pb.add_block(c);
  std::vector<int> blocks(r);
  for (int j = 1; j < r; ++j) blocks[j] = pb.add_block({c.degree, c.weight + j, c.coeff_degree - j});
  pb.add_operator(0, 0, a);
  for (int n = 1; n < r; ++n) {
    pb.add_operator(n, n, a);
    for (int i = 0; i < n; ++i) pb.add_operator(n, i, blocks[n - i], -1);
  }
  const std::size_t dim = cell_basis(c).size();
  std::vector<Vector> span;
  for (const auto& x : pb.system().nullspace()) span.push_back(pb.block_vector(x, a));
  return Subspace::span(dim, span);
}

Subspace SpectralEngine::b_space(int r, const Cell& c, int D, bool clip) const {
  const std::size_t dim = cell_basis(c).size();
  if (c.degree == 0) return Subspace(dim);
  if (!clip) {
    int need = required_bound_b(c.degree, c.weight, c.coeff_degree, r);
    if (need > D) throw TruncationError("boundary module needs a larger truncation bound", need, D);
  }
  Problem pb(*this);
  std::vector<int> blocks(r, -1);
  for (int j = 0; j < r; ++j) {
    if (c.coeff_degree + j > D) continue;  // only reachable with clip
    blocks[j] = pb.add_block({c.degree - 1, c.weight - j, c.coeff_degree + j});
  }
  for (int j = 0; j < r; ++j)
    if (blocks[j] >= 0) pb.add_operator(0, j, blocks[j]);
  for (int l = 1; l < r; ++l)
    for (int j = l; j < r; ++j)
      if (blocks[j] >= 0) pb.add_operator(l, j - l, blocks[j]);
  std::vector<Vector> span;
  for (const auto& x : pb.system(1).nullspace()) span.push_back(pb.evaluate(0, x, c));
  return Subspace::span(dim, span);
}

std::vector<PolyForm> SpectralEngine::e_space_basis(int j, int l, int p, int k, int D) const {
  if (j < 1 || l < 1) throw DomainError("page indices must be at least 1");
  std::vector<PolyForm> out;
  for (int e = 0; e <= D; ++e) {
    Cell c{k, p, e};
    if (cell_basis(c).empty()) continue;
    Subspace z = z_space(j, c, e);
    Subspace b = b_space(l, c, required_bound_b(k, p, e, l));
    Subspace e_cell = z.intersect(b.orthogonal_complement());
    for (const auto& v : e_cell.basis()) out.push_back(from_vector(v, c));
  }
  return out;
}

StarDuality SpectralEngine::star_duality_check(int r1, int r2, int p, int k) const {
  const Group& g = *group_;
  const int n = static_cast<int>(g.dim()), Q = g.algebra().homogeneous_dimension();
  Cell src{k, p, 0}, tgt{n - k, Q - p, 0};
  StarDuality out;
  out.source = z_space(r1, src, 0, true).intersect(b_space(r2, src, 0, true).orthogonal_complement());
  out.target = z_space(r2, tgt, 0, true).intersect(b_space(r1, tgt, 0, true).orthogonal_complement());
  std::vector<Vector> imgs;
  for (const auto& v : out.source.basis())
    imgs.push_back(to_vector(g.fiber().star(from_vector(v, src)), tgt));
  out.image = Subspace::span(cell_basis(tgt).size(), imgs);
  out.ok = out.image == out.target;
  return out;
}

namespace {

template <class C>
Form<C> rumin_dc_impl(const Group& g, const Form<C>& alpha) {
  const auto& fc = g.fiber();
  if (!(fc.apply(Op::Pi0, alpha) == alpha)) throw DomainError("rumin_dc: input is not a Rumin form");
  Form<C> bar = alpha, term = alpha;
  for (int guard = 0; !term.is_zero(); ++guard) {
    if (guard > g.algebra().homogeneous_dimension() + 1)
      throw Error("rumin_dc: homotopy series did not terminate");
    Form<C> rest = exterior_derivative(g, term);
    rest -= fc.apply(Op::D0, term);
    term = -fc.apply(Op::D0Pinv, rest);
    bar += term;
  }
  return fc.apply(Op::Pi0, exterior_derivative(g, bar));
}

template <class C>
std::map<int, Form<C>> split_impl(const Group& g, const Form<C>& alpha) {
  auto ws = alpha.weights(g.weights());
  if (ws.size() > 1) throw DomainError("dc_weight_split: form is not homogeneous in weight");
  std::map<int, Form<C>> out;
  if (ws.empty()) return out;
  const int p = *ws.begin();
  Form<C> dc = rumin_dc_impl(g, alpha);
  for (int w : dc.weights(g.weights())) out.emplace(w - p, dc.weight_component(g.weights(), w));
  return out;
}

}  // namespace

PolyForm rumin_dc(const Group& g, const PolyForm& alpha) { return rumin_dc_impl(g, alpha); }
OperatorForm rumin_dc(const Group& g, const OperatorForm& alpha) { return rumin_dc_impl(g, alpha); }

std::map<int, PolyForm> dc_weight_split(const Group& g, const PolyForm& alpha) {
  return split_impl(g, alpha);
}
std::map<int, OperatorForm> dc_weight_split(const Group& g, const OperatorForm& alpha) {
  return split_impl(g, alpha);
}

bool is_rumin_form(const Group& g, const PolyForm& alpha) {
  return apply_fiber(g, Op::Pi0, alpha) == alpha;
}

}  // namespace carnot
