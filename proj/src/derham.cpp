#include "carnot/derham.hpp"

#include <algorithm>
#include <sstream>

#include "carnot/error.hpp"

namespace carnot {

namespace {

std::vector<std::string> default_covectors(const StratifiedAlgebra& a, std::vector<std::string> given) {
  if (!given.empty()) {
    if (given.size() != a.dim()) throw DomainError("covector labels: wrong count");
    return given;
  }
  for (std::size_t i = 0; i < a.dim(); ++i) given.push_back("θ" + std::to_string(i + 1));
  return given;
}

template <class C, class Fmt>
std::string format_form(const Form<C>& f, const std::vector<std::string>& labels, Fmt&& fmt,
                        bool (*single)(const C&)) {
  if (f.is_zero()) return "0";
  std::vector<std::pair<Mask, const C*>> order;
  for (const auto& [m, c] : f.terms()) order.emplace_back(m, &c);
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return mask_indices(a.first) < mask_indices(b.first); });
  std::string s;
  for (const auto& [m, c] : order) {
    std::string cs = fmt(*c);
    bool single_term = single(*c);
    bool negative = single_term && !cs.empty() && cs[0] == '-';
    if (negative) cs.erase(0, 1);
    if (!s.empty())
      s += negative ? " - " : " + ";
    else if (negative)
      s += "-";
    if (m == 0) {
      s += single_term ? cs : "(" + cs + ")";
      continue;
    }
    std::string ms = mask_to_string(m, labels);
    if (cs == "1")
      s += ms;
    else if (single_term)
      s += cs + "·" + ms;
    else
      s += "(" + cs + ")·" + ms;
  }
  return s;
}

bool poly_single(const WeightedPoly& p) { return p.num_terms() <= 1; }
bool rational_single(const Rational&) { return true; }
bool op_single(const FrameOperator& op) { return op.words().size() <= 1; }

}  // namespace

Group::Group(StratifiedAlgebra a, std::string name, std::vector<std::string> coordinates,
             std::vector<std::string> covector_labels)
    : name_(std::move(name)),
      algebra_(std::make_shared<const StratifiedAlgebra>(std::move(a))),
      ring_(coordinate_ring(*algebra_, std::move(coordinates))),
      frame_(*algebra_, ring_),
      fiber_(algebra_),
      covector_labels_(default_covectors(*algebra_, std::move(covector_labels))) {}

GroupPtr make_group(StratifiedAlgebra a, std::string name, std::vector<std::string> coordinates,
                    std::vector<std::string> covector_labels) {
  return std::make_shared<const Group>(std::move(a), std::move(name), std::move(coordinates),
                                       std::move(covector_labels));
}

PolyForm Group::lift(const FiberForm& f) const {
  PolyForm out(dim(), f.degree());
  for (const auto& [m, c] : f.terms()) out.add(m, constant(c));
  return out;
}

std::string Group::to_string(const PolyForm& f) const {
  return format_form(f, covector_labels_, [](const WeightedPoly& p) { return carnot::to_string(p); },
                     &poly_single);
}

std::string Group::to_string(const FiberForm& f) const {
  return format_form(f, covector_labels_, [](const Rational& q) { return carnot::to_string(q); },
                     &rational_single);
}

std::string Group::to_string(const OperatorForm& f, const std::string& fname) const {
  return format_form(
      f, covector_labels_,
      [&](const FrameOperator& op) { return op.to_string(algebra_->labels(), fname); }, &op_single);
}

PolyForm exterior_derivative(const Group& g, const PolyForm& a) {
  return exterior_derivative_with(
      g.fiber(), a, [&](std::size_t l, const WeightedPoly& f) { return g.frame().apply(l, f); });
}

PolyForm d_component(const Group& g, const PolyForm& a, int i) {
  return exterior_derivative_with(
      g.fiber(), a, [&](std::size_t l, const WeightedPoly& f) { return g.frame().apply(l, f); }, i);
}

OperatorForm exterior_derivative(const Group& g, const OperatorForm& a) {
  return exterior_derivative_with(g.fiber(), a,
                                  [](std::size_t l, const FrameOperator& op) { return op.prepend(l); });
}

OperatorForm d_component(const Group& g, const OperatorForm& a, int i) {
  return exterior_derivative_with(
      g.fiber(), a, [](std::size_t l, const FrameOperator& op) { return op.prepend(l); }, i);
}

std::optional<int> form_weight(const Group& g, const PolyForm& a) {
  auto ws = a.weights(g.weights());
  if (ws.empty()) return std::nullopt;
  if (ws.size() > 1) throw DomainError("form is not homogeneous in weight");
  return *ws.begin();
}

std::vector<PolyForm> weight_split_d(const Group& g, const PolyForm& a, int p) {
  for (int w : a.weights(g.weights()))
    if (w != p) throw DomainError("weight_split_d: form is not homogeneous of weight " + std::to_string(p));
  std::vector<PolyForm> out;
  for (int i = 0; i <= g.step(); ++i) out.push_back(d_component(g, a, i));
  return out;
}

int max_coefficient_degree(const PolyForm& a) {
  int d = -1;
  for (const auto& [m, f] : a.terms()) d = std::max(d, f.weighted_degree().value_or(-1));
  return d;
}

std::map<int, PolyForm> split_by_coefficient_degree(const PolyForm& a) {
  std::map<int, PolyForm> out;
  for (const auto& [m, f] : a.terms())
    for (const auto& [e, part] : f.split_by_weighted_degree()) {
      auto it = out.try_emplace(e, PolyForm(a.dim(), a.degree())).first;
      it->second.add(m, part);
    }
  return out;
}

TruncationSpace enumerate_truncation(const Group& g, int k, std::optional<int> p, int D) {
  if (D < 0) throw DomainError("truncation bound must be non-negative");
  TruncationSpace t;
  t.degree = k;
  t.weight = p;
  t.bound = D;
  for (Mask m : masks_of_degree(g.dim(), k)) {
    if (p && mask_weight(m, g.weights()) != *p) continue;
    for (int e = 0; e <= D; ++e)
      for (auto& mono : monomials_of_weight(*g.ring(), e)) t.basis.emplace_back(std::move(mono), m);
  }
  return t;
}

MulticomplexReport multicomplex_check(const Group& g, int kmin, int kmax, int D) {
  MulticomplexReport r;
  const int s = g.step();
  for (int k = std::max(kmin, 0); k <= std::min(kmax, static_cast<int>(g.dim())); ++k) {
    TruncationSpace t = enumerate_truncation(g, k, std::nullopt, D);
    for (const auto& [mono, m] : t.basis) {
      PolyForm e = g.form(m, WeightedPoly::monomial(g.ring(), mono));
      std::vector<PolyForm> comp;
      for (int j = 0; j <= s; ++j) comp.push_back(d_component(g, e, j));
      ++r.elements_checked;
      for (int n = 0; n <= 2 * s; ++n) {
        PolyForm sum(g.dim(), k + 2);
        for (int i = std::max(0, n - s); i <= std::min(n, s); ++i)
          sum += d_component(g, comp[n - i], i);
        ++r.identities_checked;
        if (!sum.is_zero()) {
          r.ok = false;
          std::ostringstream os;
          os << "sum_{i+j=" << n << "} d_i d_j != 0 on " << to_string(WeightedPoly::monomial(g.ring(), mono))
             << "·" << mask_to_string(m, g.covector_labels()) << ": " << g.to_string(sum);
          r.first_violation = os.str();
          return r;
        }
      }
    }
  }
  return r;
}

}  // namespace carnot
