#include "carnot/poly.hpp"

#include <algorithm>
#include <cctype>

#include "carnot/error.hpp"

namespace carnot {

PolyRing::PolyRing(std::vector<std::string> names, std::vector<int> weights)
    : names_(std::move(names)), weights_(std::move(weights)) {
  if (names_.size() != weights_.size())
    throw DomainError("ring: names and weights differ in length");
  for (int w : weights_)
    if (w <= 0) throw DomainError("ring: weights must be positive");
}

std::optional<std::size_t> PolyRing::find(std::string_view name) const {
  for (std::size_t j = 0; j < names_.size(); ++j)
    if (names_[j] == name) return j;
  return std::nullopt;
}

RingPtr make_ring(std::vector<std::string> names, std::vector<int> weights) {
  return std::make_shared<const PolyRing>(std::move(names), std::move(weights));
}

bool same_ring(const RingPtr& a, const RingPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

int monomial_weight(const PolyRing& ring, const Exponent& e) {
  int w = 0;
  for (std::size_t j = 0; j < e.size(); ++j) w += e[j] * ring.weight(j);
  return w;
}

WeightedPoly WeightedPoly::constant(RingPtr ring, const Rational& c) {
  WeightedPoly p(ring);
  if (!carnot::is_zero(c)) p.terms_.emplace(Exponent(ring->size(), 0), c);
  return p;
}

WeightedPoly WeightedPoly::variable(RingPtr ring, std::size_t j) {
  if (j >= ring->size()) throw DomainError("variable index out of range");
  Exponent e(ring->size(), 0);
  e[j] = 1;
  return monomial(std::move(ring), std::move(e));
}

WeightedPoly WeightedPoly::monomial(RingPtr ring, Exponent e, const Rational& c) {
  if (e.size() != ring->size()) throw DomainError("exponent length mismatch");
  WeightedPoly p(std::move(ring));
  if (!carnot::is_zero(c)) p.terms_.emplace(std::move(e), c);
  return p;
}

bool WeightedPoly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](auto x) { return x == 0; });
}

Rational WeightedPoly::constant_term() const {
  if (!ring_) return 0;
  return coefficient(Exponent(ring_->size(), 0));
}

Rational WeightedPoly::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::optional<int> WeightedPoly::weighted_degree() const {
  if (terms_.empty()) return std::nullopt;
  int best = 0;
  for (const auto& [e, c] : terms_) best = std::max(best, monomial_weight(*ring_, e));
  return best;
}

int WeightedPoly::total_degree() const {
  int best = -1;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (auto x : e) d += x;
    best = std::max(best, d);
  }
  return best;
}

bool WeightedPoly::is_homogeneous() const {
  if (terms_.size() <= 1) return true;
  int w = monomial_weight(*ring_, terms_.begin()->first);
  for (const auto& [e, c] : terms_)
    if (monomial_weight(*ring_, e) != w) return false;
  return true;
}

WeightedPoly WeightedPoly::homogeneous_part(int wdeg) const {
  WeightedPoly out(ring_);
  for (const auto& [e, c] : terms_)
    if (monomial_weight(*ring_, e) == wdeg) out.terms_.emplace(e, c);
  return out;
}

std::map<int, WeightedPoly> WeightedPoly::split_by_weighted_degree() const {
  std::map<int, WeightedPoly> out;
  for (const auto& [e, c] : terms_) {
    int w = monomial_weight(*ring_, e);
    auto it = out.try_emplace(w, WeightedPoly(ring_)).first;
    it->second.terms_.emplace(e, c);
  }
  return out;
}

void WeightedPoly::adopt(const WeightedPoly& o) {
  if (!o.ring_) return;
  if (!ring_) {
    ring_ = o.ring_;
    return;
  }
  if (!same_ring(ring_, o.ring_)) throw DomainError("variable-set mismatch");
}

void WeightedPoly::add_term(const Exponent& e, const Rational& c) {
  if (carnot::is_zero(c)) return;
  if (!ring_ || e.size() != ring_->size()) throw DomainError("exponent length mismatch");
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (carnot::is_zero(it->second)) terms_.erase(it);
  }
}

WeightedPoly& WeightedPoly::operator+=(const WeightedPoly& o) {
  adopt(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

WeightedPoly& WeightedPoly::operator-=(const WeightedPoly& o) {
  adopt(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

WeightedPoly& WeightedPoly::operator*=(const WeightedPoly& o) {
  *this = *this * o;
  return *this;
}

WeightedPoly& WeightedPoly::operator*=(const Rational& c) {
  if (carnot::is_zero(c)) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

WeightedPoly WeightedPoly::operator-() const {
  WeightedPoly out(*this);
  for (auto& [e, v] : out.terms_) v = -v;
  return out;
}

Rational WeightedPoly::evaluate(std::span<const Rational> point) const {
  if (ring_ && point.size() != ring_->size()) throw DomainError("evaluation arity mismatch");
  Rational total = 0;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (std::size_t j = 0; j < e.size(); ++j)
      for (int k = 0; k < e[j]; ++k) t *= point[j];
    total += t;
  }
  return total;
}

WeightedPoly operator+(WeightedPoly a, const WeightedPoly& b) { return a += b; }
WeightedPoly operator-(WeightedPoly a, const WeightedPoly& b) { return a -= b; }
WeightedPoly operator*(WeightedPoly a, const Rational& c) { return a *= c; }
WeightedPoly operator*(const Rational& c, WeightedPoly a) { return a *= c; }

WeightedPoly operator*(const WeightedPoly& a, const WeightedPoly& b) {
  if (a.ring() && b.ring() && !same_ring(a.ring(), b.ring()))
    throw DomainError("variable-set mismatch");
  RingPtr ring = a.ring() ? a.ring() : b.ring();
  WeightedPoly out(ring);
  if (a.is_zero() || b.is_zero()) return out;
  Exponent e(ring->size());
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms()) {
      for (std::size_t j = 0; j < e.size(); ++j) e[j] = ea[j] + eb[j];
      out.add_term(e, ca * cb);
    }
  return out;
}

WeightedPoly poly_add(const WeightedPoly& a, const WeightedPoly& b) { return a + b; }
WeightedPoly poly_mul(const WeightedPoly& a, const WeightedPoly& b) { return a * b; }

WeightedPoly poly_pow(const WeightedPoly& a, unsigned k) {
  if (!a.ring()) return k == 0 ? WeightedPoly() : a;
  WeightedPoly out = WeightedPoly::constant(a.ring(), 1);
  for (unsigned i = 0; i < k; ++i) out *= a;
  return out;
}

WeightedPoly poly_substitute(const WeightedPoly& p, const std::vector<WeightedPoly>& images,
                             const RingPtr& target) {
  if (p.ring() && images.size() != p.ring()->size())
    throw DomainError("substitution arity mismatch");
  for (const auto& im : images)
    if (im.ring() && !same_ring(im.ring(), target))
      throw DomainError("substitution images must share the target ring");
  WeightedPoly out(target);
  std::vector<std::vector<WeightedPoly>> powers(images.size());
  auto power = [&](std::size_t j, unsigned k) -> const WeightedPoly& {
    auto& cache = powers[j];
    if (cache.empty()) cache.push_back(WeightedPoly::constant(target, 1));
    while (cache.size() <= k) cache.push_back(cache.back() * images[j]);
    return cache[k];
  };
  for (const auto& [e, c] : p.terms()) {
    WeightedPoly t = WeightedPoly::constant(target, c);
    for (std::size_t j = 0; j < e.size() && !t.is_zero(); ++j)
      if (e[j]) t = t * power(j, e[j]);
    out += t;
  }
  return out;
}

WeightedPoly poly_partial(const WeightedPoly& p, std::size_t j) {
  if (!p.ring()) return p;
  if (j >= p.ring()->size()) throw DomainError("partial: variable index out of range");
  WeightedPoly out(p.ring());
  for (const auto& [e, c] : p.terms()) {
    if (e[j] == 0) continue;
    Exponent f = e;
    f[j] -= 1;
    out.add_term(f, c * e[j]);
  }
  return out;
}

std::optional<int> weighted_degree(const WeightedPoly& p) { return p.weighted_degree(); }

namespace {

void fill_monomials(const PolyRing& ring, std::size_t j, int remaining, Exponent& cur,
                    std::vector<Exponent>& out) {
  if (j == ring.size()) {
    if (remaining == 0) out.push_back(cur);
    return;
  }
  int w = ring.weight(j);
  for (int k = remaining / w; k >= 0; --k) {
    cur[j] = static_cast<std::uint16_t>(k);
    fill_monomials(ring, j + 1, remaining - k * w, cur, out);
  }
  cur[j] = 0;
}

}  // namespace

std::vector<Exponent> monomials_of_weight(const PolyRing& ring, int w) {
  std::vector<Exponent> out;
  if (w < 0) return out;
  Exponent cur(ring.size(), 0);
  fill_monomials(ring, 0, w, cur, out);
  return out;
}

bool graded_lex_before(const PolyRing& ring, const Exponent& a, const Exponent& b) {
  int wa = monomial_weight(ring, a), wb = monomial_weight(ring, b);
  if (wa != wb) return wa > wb;
  return a > b;
}

std::string monomial_to_string(const PolyRing& ring, const Exponent& e) {
  std::string s;
  for (std::size_t j = 0; j < e.size(); ++j) {
    if (!e[j]) continue;
    if (!s.empty()) s += "·";
    s += ring.name(j);
    if (e[j] > 1) s += "^" + std::to_string(e[j]);
  }
  return s;
}

std::string to_string(const WeightedPoly& p) {
  if (p.is_zero()) return "0";
  const PolyRing& ring = *p.ring();
  std::vector<const WeightedPoly::Terms::value_type*> order;
  for (const auto& t : p.terms()) order.push_back(&t);
  std::sort(order.begin(), order.end(), [&](auto* a, auto* b) {
    return graded_lex_before(ring, a->first, b->first);
  });
  std::string s;
  bool first = true;
  for (const auto* t : order) {
    Rational c = t->second;
    bool neg = sgn(c) < 0;
    if (neg) c = -c;
    if (first)
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    first = false;
    std::string mono = monomial_to_string(ring, t->first);
    if (mono.empty())
      s += to_string(c);
    else if (c == 1)
      s += mono;
    else
      s += to_string(c) + "·" + mono;
  }
  return s;
}

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view text, const RingPtr& ring) : text_(text), ring_(ring) {}

  WeightedPoly parse() {
    WeightedPoly p = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("polynomial '" + std::string(text_) + "': " + msg + " at offset " +
                         std::to_string(pos_),
                     1, static_cast<int>(pos_) + 1);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(std::string_view tok) {
    skip();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  bool eat_minus() { return eat("-") || eat("−"); }

  WeightedPoly expr() {
    WeightedPoly p = term();
    for (;;) {
      if (eat("+"))
        p += term();
      else if (eat_minus())
        p -= term();
      else
        return p;
    }
  }

  WeightedPoly term() {
    WeightedPoly p = unary();
    for (;;) {
      if (eat("*") || eat("·")) {
        p = p * unary();
      } else if (eat("/")) {
        WeightedPoly d = unary();
        if (!d.is_constant() || d.is_zero()) fail("division by a non-constant or zero");
        p *= Rational(1) / d.constant_term();
      } else {
        return p;
      }
    }
  }

  WeightedPoly unary() {
    if (eat_minus()) return -unary();
    if (eat("+")) return unary();
    WeightedPoly base = primary();
    if (eat("^")) {
      skip();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      base = poly_pow(base, static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start)))));
    }
    return base;
  }

  WeightedPoly primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      WeightedPoly p = expr();
      if (!eat(")")) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return WeightedPoly::constant(ring_, Rational(mpz_class(std::string(text_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      auto j = ring_->find(name);
      if (!j) {
        pos_ = start;
        fail("unknown variable '" + name + "'");
      }
      return WeightedPoly::variable(ring_, *j);
    }
    fail("unexpected character");
  }

  std::string_view text_;
  const RingPtr& ring_;
  std::size_t pos_ = 0;
};

}  // namespace

WeightedPoly parse_poly(std::string_view text, const RingPtr& ring) {
  return PolyParser(text, ring).parse();
}

}  // namespace carnot
