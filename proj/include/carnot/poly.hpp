#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carnot/rational.hpp"

namespace carnot {

class PolyRing {
 public:
  PolyRing(std::vector<std::string> names, std::vector<int> weights);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t j) const { return names_.at(j); }
  int weight(std::size_t j) const { return weights_.at(j); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<int>& weights() const { return weights_; }
  std::optional<std::size_t> find(std::string_view name) const;

  bool operator==(const PolyRing& o) const {
    return names_ == o.names_ && weights_ == o.weights_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<int> weights_;
};

using RingPtr = std::shared_ptr<const PolyRing>;

RingPtr make_ring(std::vector<std::string> names, std::vector<int> weights);

using Exponent = std::vector<std::uint16_t>;

// Sparse polynomial with exact coefficients over a weighted ring.  A
// default-constructed polynomial is the zero of "any" ring and adopts the
// ring of the first operand it is combined with.
class WeightedPoly {
 public:
  using Terms = std::map<Exponent, Rational>;

  WeightedPoly() = default;
  explicit WeightedPoly(RingPtr ring) : ring_(std::move(ring)) {}

  static WeightedPoly constant(RingPtr ring, const Rational& c);
  static WeightedPoly variable(RingPtr ring, std::size_t j);
  static WeightedPoly monomial(RingPtr ring, Exponent e, const Rational& c = 1);

  const RingPtr& ring() const { return ring_; }
  const Terms& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  Rational coefficient(const Exponent& e) const;

  std::optional<int> weighted_degree() const;
  int total_degree() const;  // -1 for zero
  bool is_homogeneous() const;
  WeightedPoly homogeneous_part(int wdeg) const;
  std::map<int, WeightedPoly> split_by_weighted_degree() const;

  WeightedPoly& operator+=(const WeightedPoly& o);
  WeightedPoly& operator-=(const WeightedPoly& o);
  WeightedPoly& operator*=(const WeightedPoly& o);
  WeightedPoly& operator*=(const Rational& c);
  WeightedPoly operator-() const;

  void add_term(const Exponent& e, const Rational& c);

  Rational evaluate(std::span<const Rational> point) const;

  bool operator==(const WeightedPoly& o) const { return terms_ == o.terms_; }

 private:
  void adopt(const WeightedPoly& o);

  RingPtr ring_;
  Terms terms_;
};

WeightedPoly operator+(WeightedPoly a, const WeightedPoly& b);
WeightedPoly operator-(WeightedPoly a, const WeightedPoly& b);
WeightedPoly operator*(const WeightedPoly& a, const WeightedPoly& b);
WeightedPoly operator*(WeightedPoly a, const Rational& c);
WeightedPoly operator*(const Rational& c, WeightedPoly a);

inline bool is_zero(const WeightedPoly& p) { return p.is_zero(); }

bool same_ring(const RingPtr& a, const RingPtr& b);
int monomial_weight(const PolyRing& ring, const Exponent& e);

WeightedPoly poly_add(const WeightedPoly& a, const WeightedPoly& b);
WeightedPoly poly_mul(const WeightedPoly& a, const WeightedPoly& b);
WeightedPoly poly_pow(const WeightedPoly& a, unsigned k);
// Replace variable j of p by images[j]; images share one target ring.
WeightedPoly poly_substitute(const WeightedPoly& p, const std::vector<WeightedPoly>& images,
                             const RingPtr& target);
WeightedPoly poly_partial(const WeightedPoly& p, std::size_t j);
std::optional<int> weighted_degree(const WeightedPoly& p);

// All exponents of exact weighted degree w, in canonical (graded-lex,
// descending) order.
std::vector<Exponent> monomials_of_weight(const PolyRing& ring, int w);

// Graded-lex order used for printing and for deterministic bases:
// higher weighted degree first, then lexicographically larger exponent first.
bool graded_lex_before(const PolyRing& ring, const Exponent& a, const Exponent& b);

std::string to_string(const WeightedPoly& p);
std::string monomial_to_string(const PolyRing& ring, const Exponent& e);
WeightedPoly parse_poly(std::string_view text, const RingPtr& ring);

}  // namespace carnot
