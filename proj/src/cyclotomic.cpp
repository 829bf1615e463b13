#include "multone/cyclotomic.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace multone {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("cyclotomic coefficient overflow");
  return static_cast<std::int64_t>(v);
}

std::int64_t mul_checked(std::int64_t a, std::int64_t b) { return narrow(static_cast<i128>(a) * b); }

std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

void require_same(int a, int b) {
  if (a != b) throw std::invalid_argument("cyclotomic fields differ: " + std::to_string(a) + " vs " + std::to_string(b));
}

/// buf has p entries on zeta^0..zeta^(p-1); fold the top one away.
void fold(const i128* buf, int p, std::int64_t* out) {
  for (int i = 0; i + 1 < p; ++i) out[i] = narrow(buf[i] - buf[p - 1]);
}

}  // namespace

Cyc::Cyc(int p) : p_(p), den_(1), c_(static_cast<std::size_t>(p - 1), 0) {
  if (p < 2) throw DomainError("cyclotomic field needs a prime p");
}

Cyc Cyc::rational(int p, std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("zero denominator");
  Cyc c(p);
  if (den < 0) {
    num = -num;
    den = -den;
  }
  c.c_[0] = num;
  c.den_ = den;
  c.normalize();
  return c;
}

Cyc Cyc::zeta_power(int p, std::int64_t k) {
  std::vector<std::int64_t> v(static_cast<std::size_t>(p), 0);
  v[static_cast<std::size_t>(mod(k, p))] = 1;
  return from_cyclic(p, v);
}

Cyc Cyc::from_cyclic(int p, const std::vector<std::int64_t>& coeffs, std::int64_t den) {
  if (static_cast<int>(coeffs.size()) != p) throw std::invalid_argument("from_cyclic expects p coefficients");
  Cyc c(p);
  for (int i = 0; i + 1 < p; ++i) c.c_[static_cast<std::size_t>(i)] = coeffs[static_cast<std::size_t>(i)] - coeffs.back();
  if (den < 0) {
    for (auto& x : c.c_) x = -x;
    den = -den;
  }
  c.den_ = den;
  c.normalize();
  return c;
}

void Cyc::normalize() {
  std::int64_t g = den_;
  for (auto x : c_) g = std::gcd(g, x);
  if (is_zero()) {
    den_ = 1;
    return;
  }
  if (g > 1) {
    den_ /= g;
    for (auto& x : c_) x /= g;
  }
}

bool Cyc::is_zero() const {
  for (auto x : c_)
    if (x != 0) return false;
  return true;
}

bool Cyc::is_rational() const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

Rational Cyc::rational_value() const {
  if (!is_rational()) throw std::logic_error("not a rational number: " + str());
  return Rational(c_.empty() ? 0 : c_[0], den_);
}

Cyc& Cyc::operator+=(const Cyc& o) {
  require_same(p_, o.p_);
  const std::int64_t l = std::lcm(den_, o.den_);
  const std::int64_t fa = l / den_, fb = l / o.den_;
  for (std::size_t i = 0; i < c_.size(); ++i)
    c_[i] = narrow(static_cast<i128>(c_[i]) * fa + static_cast<i128>(o.c_[i]) * fb);
  den_ = l;
  normalize();
  return *this;
}

Cyc& Cyc::operator-=(const Cyc& o) { return *this += -o; }

Cyc Cyc::operator-() const {
  Cyc r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

Cyc& Cyc::operator*=(const Cyc& o) {
  require_same(p_, o.p_);
  std::vector<i128> buf(static_cast<std::size_t>(p_), 0);
  for (int i = 0; i + 1 < p_; ++i) {
    if (c_[static_cast<std::size_t>(i)] == 0) continue;
    for (int j = 0; j + 1 < p_; ++j)
      buf[static_cast<std::size_t>((i + j) % p_)] +=
          static_cast<i128>(c_[static_cast<std::size_t>(i)]) * o.c_[static_cast<std::size_t>(j)];
  }
  fold(buf.data(), p_, c_.data());
  den_ = mul_checked(den_, o.den_);
  normalize();
  return *this;
}

Cyc Cyc::galois(std::int64_t a) const {
  if (mod(a, p_) == 0) throw std::invalid_argument("Galois exponent must be prime to p");
  std::vector<std::int64_t> v(static_cast<std::size_t>(p_), 0);
  for (int i = 0; i + 1 < p_; ++i) v[static_cast<std::size_t>(mod(a * i, p_))] += c_[static_cast<std::size_t>(i)];
  return from_cyclic(p_, v, den_);
}

Cyc Cyc::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero in Q(zeta)");
  Cyc prod = rational(p_, 1);
  for (int a = 2; a < p_; ++a) prod *= galois(a);
  const Rational norm = (*this * prod).rational_value();
  return prod * rational(p_, norm.denominator(), norm.numerator());
}

Cyc Cyc::pow(std::int64_t e) const {
  if (e < 0) return inverse().pow(-e);
  Cyc r = rational(p_, 1), b = *this;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

std::complex<double> Cyc::to_complex() const {
  std::complex<double> s = 0;
  for (int i = 0; i + 1 < p_; ++i)
    s += static_cast<double>(c_[static_cast<std::size_t>(i)]) * std::polar(1.0, 2 * std::numbers::pi * i / p_);
  return s / static_cast<double>(den_);
}

std::string Cyc::str() const {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i + 1 < p_; ++i) {
    const auto x = c_[static_cast<std::size_t>(i)];
    if (x == 0) continue;
    os << (x < 0 ? "-" : (first ? "" : "+"));
    const auto ax = x < 0 ? -x : x;
    if (i == 0 || ax != 1) os << ax;
    if (i > 0) os << "z" << (i > 1 ? "^" + std::to_string(i) : "");
    first = false;
  }
  if (first) os << "0";
  std::string body = os.str();
  if (den_ != 1) body = "(" + body + ")/" + std::to_string(den_);
  return body;
}

Cyc gauss_sum(int p) {
  std::vector<std::int64_t> v(static_cast<std::size_t>(p), 0);
  for (std::int64_t t = 0; t < p; ++t) v[static_cast<std::size_t>(t * t % p)] += 1;
  return Cyc::from_cyclic(p, v);
}

int legendre(std::int64_t a, std::int64_t p) {
  a = mod(a, p);
  if (a == 0) return 0;
  std::int64_t r = 1, b = a, e = (p - 1) / 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

// ---------------------------------------------------------------------------

Operator::Operator(int dim, int p)
    : dim_(dim), p_(p), den_(1), num_(static_cast<std::size_t>(dim) * dim * (p - 1), 0) {}

Operator Operator::identity(int dim, int p) {
  Operator m(dim, p);
  for (int i = 0; i < dim; ++i) m.at(i, i)[0] = 1;
  return m;
}

Operator Operator::from_entries(int dim, int p, const std::vector<Cyc>& entries) {
  if (entries.size() != static_cast<std::size_t>(dim) * dim) throw std::invalid_argument("from_entries: size mismatch");
  Operator m(dim, p);
  std::int64_t l = 1;
  for (const auto& e : entries) {
    require_same(e.prime(), p);
    l = std::lcm(l, e.den());
  }
  m.den_ = l;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const Cyc& e = entries[static_cast<std::size_t>(i * dim + j)];
      const std::int64_t f = l / e.den();
      for (int k = 0; k + 1 < p; ++k) m.at(i, j)[k] = mul_checked(e.coeffs()[static_cast<std::size_t>(k)], f);
    }
  m.normalize();
  return m;
}

void Operator::normalize() {
  std::int64_t g = den_;
  for (auto x : num_) {
    g = std::gcd(g, x);
    if (g == 1) return;
  }
  bool zero = true;
  for (auto x : num_)
    if (x != 0) zero = false;
  if (zero) {
    den_ = 1;
    return;
  }
  den_ /= g;
  for (auto& x : num_) x /= g;
}

Cyc Operator::entry(int i, int j) const {
  std::vector<std::int64_t> v(static_cast<std::size_t>(p_), 0);
  for (int k = 0; k + 1 < p_; ++k) v[static_cast<std::size_t>(k)] = at(i, j)[k];
  return Cyc::from_cyclic(p_, v, den_);
}

bool Operator::entry_is_zero(int i, int j) const {
  const std::int64_t* e = at(i, j);
  for (int k = 0; k + 1 < p_; ++k)
    if (e[k] != 0) return false;
  return true;
}

Cyc Operator::trace() const {
  std::vector<std::int64_t> v(static_cast<std::size_t>(p_), 0);
  for (int i = 0; i < dim_; ++i)
    for (int k = 0; k + 1 < p_; ++k) v[static_cast<std::size_t>(k)] += at(i, i)[k];
  return Cyc::from_cyclic(p_, v, den_);
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same(a.p_, b.p_);
  if (a.dim_ != b.dim_) throw std::invalid_argument("operator dimensions differ");
  const int n = a.dim_, p = a.p_, w = p - 1;
  Operator c(n, p);
  c.den_ = mul_checked(a.den_, b.den_);
  std::vector<char> bnz(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) bnz[static_cast<std::size_t>(k * n + j)] = !b.entry_is_zero(k, j);
  std::vector<i128> buf(static_cast<std::size_t>(n) * p);
  for (int i = 0; i < n; ++i) {
    std::fill(buf.begin(), buf.end(), 0);
    for (int k = 0; k < n; ++k) {
      if (a.entry_is_zero(i, k)) continue;
      const std::int64_t* x = a.at(i, k);
      for (int j = 0; j < n; ++j) {
        if (!bnz[static_cast<std::size_t>(k * n + j)]) continue;
        const std::int64_t* y = b.at(k, j);
        i128* out = &buf[static_cast<std::size_t>(j) * p];
        for (int s = 0; s < w; ++s) {
          if (x[s] == 0) continue;
          for (int t = 0; t < w; ++t) {
            int e = s + t;
            if (e >= p) e -= p;
            out[e] += static_cast<i128>(x[s]) * y[t];
          }
        }
      }
    }
    for (int j = 0; j < n; ++j) fold(&buf[static_cast<std::size_t>(j) * p], p, c.at(i, j));
  }
  c.normalize();
  return c;
}

Operator operator*(const Cyc& s, const Operator& m) {
  std::vector<Cyc> e;
  e.reserve(static_cast<std::size_t>(m.dim_) * m.dim_);
  for (int i = 0; i < m.dim_; ++i)
    for (int j = 0; j < m.dim_; ++j) e.push_back(s * m.entry(i, j));
  return Operator::from_entries(m.dim_, m.p_, e);
}

std::optional<Cyc> Operator::scalar_ratio(const Operator& a, const Operator& b) {
  for (int i = 0; i < b.dim_; ++i)
    for (int j = 0; j < b.dim_; ++j)
      if (!b.entry_is_zero(i, j)) {
        const Cyc c = a.entry(i, j) * b.entry(i, j).inverse();
        if (c * b == a) return c;
        return std::nullopt;
      }
  return std::nullopt;
}

std::vector<std::complex<double>> Operator::to_complex() const {
  std::vector<std::complex<double>> z(static_cast<std::size_t>(p_));
  for (int k = 0; k < p_; ++k) z[static_cast<std::size_t>(k)] = std::polar(1.0, 2 * std::numbers::pi * k / p_);
  std::vector<std::complex<double>> out(static_cast<std::size_t>(dim_) * dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      std::complex<double> s = 0;
      for (int k = 0; k + 1 < p_; ++k) s += static_cast<double>(at(i, j)[k]) * z[static_cast<std::size_t>(k)];
      out[static_cast<std::size_t>(i * dim_ + j)] = s / static_cast<double>(den_);
    }
  return out;
}

}  // namespace multone
