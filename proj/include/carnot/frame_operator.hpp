#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "carnot/algebra.hpp"
#include "carnot/bch.hpp"
#include "carnot/rational.hpp"

namespace carnot {

// A constant-coefficient differential operator in the left-invariant frame:
// sum_w c_w X_{w_1} ... X_{w_m}, words kept as written (no reordering unless
// normalized).  Used to run the form calculus on a generic coefficient f.
class FrameOperator {
 public:
  using Word = std::vector<std::uint8_t>;

  FrameOperator() = default;
  static FrameOperator identity() {
    FrameOperator op;
    op.words_[{}] = 1;
    return op;
  }

  const std::map<Word, Rational>& words() const { return words_; }
  bool is_zero() const { return words_.empty(); }

  void add(const Word& w, const Rational& c);
  FrameOperator& operator+=(const FrameOperator& o);
  FrameOperator& operator-=(const FrameOperator& o);
  FrameOperator& operator*=(const Rational& q);
  FrameOperator operator-() const;
  bool operator==(const FrameOperator& o) const { return words_ == o.words_; }

  // X_l composed on the left.
  FrameOperator prepend(std::size_t l) const;

  // Rewrites every word into increasing index order using the brackets.
  FrameOperator normalized(const StratifiedAlgebra& a) const;

  WeightedPoly apply(const Frame& frame, const WeightedPoly& f) const;

  std::string to_string(const std::vector<std::string>& labels, const std::string& fname = "f") const;

 private:
  std::map<Word, Rational> words_;
};

inline FrameOperator operator*(FrameOperator a, const Rational& q) { return a *= q; }
inline bool is_zero(const FrameOperator& op) { return op.is_zero(); }

}  // namespace carnot
