#pragma once

#include <map>
#include <set>
#include <vector>

#include "carnot/covector.hpp"
#include "carnot/error.hpp"
#include "carnot/rational.hpp"

namespace carnot {

// k-form sum_I c_I theta_I with coefficients in C (Rational for invariant
// forms, WeightedPoly for polynomial forms, FrameOperator for generic-f
// operator forms).  Zero coefficients are never stored.
template <class C>
class Form {
 public:
  using Terms = std::map<Mask, C>;

  Form() = default;
  Form(std::size_t dim, int degree) : dim_(dim), degree_(degree) {}

  static Form single(std::size_t dim, Mask m, C c) {
    Form f(dim, mask_degree(m));
    f.add(m, c);
    return f;
  }

  std::size_t dim() const { return dim_; }
  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  const C* find(Mask m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? nullptr : &it->second;
  }

  void add(Mask m, const C& c) {
    if (is_zero_coeff(c)) return;
    if (mask_degree(m) != degree_) throw DomainError("form: covector degree mismatch");
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (is_zero_coeff(it->second)) terms_.erase(it);
    }
  }

  Form& operator+=(const Form& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  Form& operator-=(const Form& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }
  Form& operator*=(const Rational& q) {
    if (sgn(q) == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= q;
    return *this;
  }
  Form operator-() const {
    Form out(dim_, degree_);
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
  }
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(Form a, const Rational& q) { return a *= q; }
  friend Form operator*(const Rational& q, Form a) { return a *= q; }

  bool operator==(const Form& o) const {
    return dim_ == o.dim_ && degree_ == o.degree_ && terms_ == o.terms_;
  }

  std::set<int> weights(const std::vector<int>& w) const {
    std::set<int> out;
    for (const auto& [m, c] : terms_) out.insert(mask_weight(m, w));
    return out;
  }
  Form weight_component(const std::vector<int>& w, int p) const {
    Form out(dim_, degree_);
    for (const auto& [m, c] : terms_)
      if (mask_weight(m, w) == p) out.terms_.emplace(m, c);
    return out;
  }

 private:
  static bool is_zero_coeff(const C& c) {
    using carnot::is_zero;
    return is_zero(c);
  }
  void check(const Form& o) const {
    if (o.terms_.empty()) return;
    if (dim_ != o.dim_ || degree_ != o.degree_)
      throw DomainError("form: adding forms of different dimension or degree");
  }

  std::size_t dim_ = 0;
  int degree_ = 0;
  Terms terms_;
};

// B is either A or Rational.
template <class A, class B>
Form<A> wedge(const Form<A>& a, const Form<B>& b) {
  using C = A;
  if (a.dim() != b.dim()) throw DomainError("wedge: dimension mismatch");
  Form<C> out(a.dim(), a.degree() + b.degree());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      C c = C(ca * cb);
      if (s < 0) c = -c;
      out.add(ma | mb, c);
    }
  return out;
}

using FiberForm = Form<Rational>;

}  // namespace carnot
