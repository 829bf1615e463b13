#pragma once

#include "multone/root_system.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace multone {

/// Element of Q(zeta_p): integer coefficients on zeta^0 .. zeta^(p-2) over a
/// positive common denominator, kept in lowest terms.
class Cyc {
 public:
  Cyc() = default;
  explicit Cyc(int p);  // zero

  static Cyc rational(int p, std::int64_t num, std::int64_t den = 1);
  static Cyc zeta_power(int p, std::int64_t k);
  /// From p coefficients on zeta^0 .. zeta^(p-1) (not necessarily reduced).
  static Cyc from_cyclic(int p, const std::vector<std::int64_t>& coeffs, std::int64_t den = 1);

  int prime() const { return p_; }
  std::int64_t den() const { return den_; }
  const std::vector<std::int64_t>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_rational() const;
  Rational rational_value() const;  // requires is_rational()

  Cyc& operator+=(const Cyc& o);
  Cyc& operator-=(const Cyc& o);
  Cyc& operator*=(const Cyc& o);
  friend Cyc operator+(Cyc a, const Cyc& b) { return a += b; }
  friend Cyc operator-(Cyc a, const Cyc& b) { return a -= b; }
  friend Cyc operator*(Cyc a, const Cyc& b) { return a *= b; }
  Cyc operator-() const;
  friend bool operator==(const Cyc&, const Cyc&) = default;

  /// zeta -> zeta^a for a prime to p.
  Cyc galois(std::int64_t a) const;
  Cyc conj() const { return galois(p_ - 1); }
  Cyc inverse() const;
  Cyc pow(std::int64_t e) const;

  std::complex<double> to_complex() const;
  std::string str() const;

 private:
  void normalize();

  int p_ = 0;
  std::int64_t den_ = 1;
  std::vector<std::int64_t> c_;
};

/// Quadratic Gauss sum: sum over t in F_p of zeta^(t^2).
Cyc gauss_sum(int p);

/// Legendre symbol (a / p) in {-1, 0, 1}.
int legendre(std::int64_t a, std::int64_t p);

/// Square matrix over Q(zeta_p) with one common denominator.
class Operator {
 public:
  Operator() = default;
  Operator(int dim, int p);  // zero

  static Operator identity(int dim, int p);
  static Operator from_entries(int dim, int p, const std::vector<Cyc>& entries);  // row-major

  int dim() const { return dim_; }
  int prime() const { return p_; }
  std::int64_t den() const { return den_; }

  Cyc entry(int i, int j) const;
  Cyc trace() const;
  bool entry_is_zero(int i, int j) const;

  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator*(const Cyc& c, const Operator& m);
  friend bool operator==(const Operator&, const Operator&) = default;

  /// Some c with a == c * b, if one exists.
  static std::optional<Cyc> scalar_ratio(const Operator& a, const Operator& b);

  /// zeta = exp(2 pi i / p).
  std::vector<std::complex<double>> to_complex() const;  // row-major

  /// p - 1 numerator coefficients of entry (i, j), over den().
  const std::int64_t* raw(int i, int j) const { return &num_[(static_cast<std::size_t>(i) * dim_ + j) * (p_ - 1)]; }

 private:
  void normalize();
  const std::int64_t* at(int i, int j) const { return raw(i, j); }
  std::int64_t* at(int i, int j) { return &num_[(static_cast<std::size_t>(i) * dim_ + j) * (p_ - 1)]; }

  int dim_ = 0;
  int p_ = 0;
  std::int64_t den_ = 1;
  std::vector<std::int64_t> num_;
};

}  // namespace multone
