#include "carnot/frame_operator.hpp"

#include <algorithm>
#include <functional>

namespace carnot {

void FrameOperator::add(const Word& w, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = words_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) words_.erase(it);
  }
}

FrameOperator& FrameOperator::operator+=(const FrameOperator& o) {
  for (const auto& [w, c] : o.words_) add(w, c);
  return *this;
}

FrameOperator& FrameOperator::operator-=(const FrameOperator& o) {
  for (const auto& [w, c] : o.words_) add(w, -c);
  return *this;
}

FrameOperator& FrameOperator::operator*=(const Rational& q) {
  if (sgn(q) == 0) {
    words_.clear();
    return *this;
  }
  for (auto& [w, c] : words_) c *= q;
  return *this;
}

FrameOperator FrameOperator::operator-() const {
  FrameOperator out(*this);
  return out *= -1;
}

FrameOperator FrameOperator::prepend(std::size_t l) const {
  FrameOperator out;
  for (const auto& [w, c] : words_) {
    Word v;
    v.reserve(w.size() + 1);
    v.push_back(static_cast<std::uint8_t>(l));
    v.insert(v.end(), w.begin(), w.end());
    out.words_.emplace(std::move(v), c);
  }
  return out;
}

FrameOperator FrameOperator::normalized(const StratifiedAlgebra& a) const {
  std::map<Word, FrameOperator> memo;
  std::function<const FrameOperator&(const Word&)> norm = [&](const Word& w) -> const FrameOperator& {
    auto it = memo.find(w);
    if (it != memo.end()) return it->second;
    FrameOperator out;
    std::size_t pos = 0;
    while (pos + 1 < w.size() && w[pos] <= w[pos + 1]) ++pos;
    if (pos + 1 >= w.size()) {
      out.add(w, 1);
    } else {
      // X_a X_b = X_b X_a + [X_a, X_b]
      Word swapped = w;
      std::swap(swapped[pos], swapped[pos + 1]);
      out += norm(swapped);
      for (std::size_t k = 0; k < a.dim(); ++k) {
        const Rational& c = a.structure_constant(w[pos], w[pos + 1], k);
        if (sgn(c) == 0) continue;
        Word shorter(w.begin(), w.begin() + pos);
        shorter.push_back(static_cast<std::uint8_t>(k));
        shorter.insert(shorter.end(), w.begin() + pos + 2, w.end());
        FrameOperator t = norm(shorter);
        out += t *= c;
      }
    }
    return memo.emplace(w, std::move(out)).first->second;
  };
  FrameOperator out;
  for (const auto& [w, c] : words_) {
    FrameOperator t = norm(w);
    out += t *= c;
  }
  return out;
}

WeightedPoly FrameOperator::apply(const Frame& frame, const WeightedPoly& f) const {
  WeightedPoly out(frame.ring());
  for (const auto& [w, c] : words_) {
    WeightedPoly g = f;
    for (auto it = w.rbegin(); it != w.rend() && !g.is_zero(); ++it) g = frame.apply(*it, g);
    out += g * c;
  }
  return out;
}

std::string FrameOperator::to_string(const std::vector<std::string>& labels,
                                     const std::string& fname) const {
  if (words_.empty()) return "0";
  std::string s;
  bool first = true;
  std::vector<const std::pair<const Word, Rational>*> order;
  for (const auto& t : words_) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(),
                   [](auto* a, auto* b) { return a->first.size() > b->first.size(); });
  for (const auto* it : order) {
    Rational c = it->second;
    bool neg = sgn(c) < 0;
    if (neg) c = -c;
    s += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
    first = false;
    if (c != 1) s += carnot::to_string(c) + "·";
    for (auto l : it->first) s += labels.at(l);
    s += fname;
  }
  return s;
}

}  // namespace carnot
