#include "carnot/bch.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <string>

#include "carnot/error.hpp"

namespace carnot {

namespace {

// Dynkin coefficients per word in the letters 'x','y' of length <= depth.
const std::map<std::string, Rational>& dynkin_words(int depth) {
  static std::map<int, std::map<std::string, Rational>> cache;
  static std::mutex mu;
  std::lock_guard lock(mu);
  auto it = cache.find(depth);
  if (it != cache.end()) return it->second;
  std::map<std::string, Rational> words;
  for (int total = 1; total <= depth; ++total) {
    std::vector<std::pair<int, int>> pairs;
    std::function<void(int)> rec = [&](int remaining) {
      if (remaining == 0) {
        int m = static_cast<int>(pairs.size());
        Rational c = (m % 2 == 1) ? Rational(1) : Rational(-1);
        c /= m * total;
        std::string w;
        for (auto [r, s] : pairs) {
          c /= factorial(r) * factorial(s);
          w.append(r, 'x');
          w.append(s, 'y');
        }
        words[w] += c;
        return;
      }
      for (int r = 0; r <= remaining; ++r)
        for (int s = 0; r + s <= remaining; ++s) {
          if (r + s == 0) continue;
          pairs.emplace_back(r, s);
          rec(remaining - r - s);
          pairs.pop_back();
        }
    };
    rec(total);
  }
  for (auto w = words.begin(); w != words.end();) w = sgn(w->second) == 0 ? words.erase(w) : std::next(w);
  return cache.emplace(depth, std::move(words)).first->second;
}

}  // namespace

std::vector<WeightedPoly> bch_product(const StratifiedAlgebra& a,
                                      const std::vector<WeightedPoly>& x,
                                      const std::vector<WeightedPoly>& y) {
  if (x.size() != a.dim() || y.size() != a.dim())
    throw DomainError("bch_product: coordinate vector length mismatch");
  std::map<std::string, std::vector<WeightedPoly>> memo;
  std::function<const std::vector<WeightedPoly>&(const std::string&)> value =
      [&](const std::string& w) -> const std::vector<WeightedPoly>& {
    auto it = memo.find(w);
    if (it != memo.end()) return it->second;
    std::vector<WeightedPoly> v;
    if (w.size() == 1) {
      v = w[0] == 'x' ? x : y;
    } else {
      const auto& rest = value(w.substr(1));
      v = a.bracket(w[0] == 'x' ? x : y, rest);
    }
    return memo.emplace(w, std::move(v)).first->second;
  };
  std::vector<WeightedPoly> out(a.dim());
  for (const auto& [w, c] : dynkin_words(a.step())) {
    const auto& v = value(w);
    for (std::size_t k = 0; k < a.dim(); ++k)
      if (!v[k].is_zero()) out[k] += v[k] * c;
  }
  return out;
}

RingPtr coordinate_ring(const StratifiedAlgebra& a, std::vector<std::string> names) {
  if (names.empty())
    for (std::size_t j = 0; j < a.dim(); ++j) names.push_back("x" + std::to_string(j + 1));
  if (names.size() != a.dim()) throw DomainError("coordinate names: wrong count");
  return make_ring(std::move(names), a.weights());
}

Frame::Frame(const StratifiedAlgebra& a, RingPtr ring) : ring_(std::move(ring)) {
  const std::size_t n = a.dim();
  if (ring_->size() != n) throw DomainError("frame: ring arity mismatch");
  std::vector<std::string> names;
  std::vector<int> weights;
  for (std::size_t j = 0; j < n; ++j) {
    names.push_back("x" + std::to_string(j));
    weights.push_back(a.weight(j));
  }
  for (std::size_t j = 0; j < n; ++j) {
    names.push_back("y" + std::to_string(j));
    weights.push_back(a.weight(j));
  }
  RingPtr xy = make_ring(names, weights);
  std::vector<WeightedPoly> x, y;
  for (std::size_t j = 0; j < n; ++j) {
    x.push_back(WeightedPoly::variable(xy, j));
    y.push_back(WeightedPoly::variable(xy, n + j));
  }
  auto prod = bch_product(a, x, y);
  std::vector<WeightedPoly> back;
  for (std::size_t j = 0; j < n; ++j) back.push_back(WeightedPoly::variable(ring_, j));
  for (std::size_t j = 0; j < n; ++j) back.push_back(WeightedPoly(ring_));
  coeff_.assign(n, std::vector<WeightedPoly>(n, WeightedPoly(ring_)));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      coeff_[j][k] = poly_substitute(poly_partial(prod[k], n + j), back, ring_);
}

WeightedPoly Frame::apply(std::size_t j, const WeightedPoly& f) const {
  WeightedPoly out(ring_);
  if (f.is_zero()) return out;
  for (std::size_t k = 0; k < coeff_.size(); ++k) {
    if (coeff_[j][k].is_zero()) continue;
    WeightedPoly d = poly_partial(f, k);
    if (!d.is_zero()) out += coeff_[j][k] * d;
  }
  return out;
}

}  // namespace carnot
