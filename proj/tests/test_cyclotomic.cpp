#include "doctest.h"
#include "multone/cyclotomic.hpp"

#include <complex>
#include <random>

using namespace multone;

namespace {

Cyc random_cyc(std::mt19937_64& rng, int p) {
  std::uniform_int_distribution<std::int64_t> d(-9, 9);
  std::vector<std::int64_t> v(static_cast<std::size_t>(p));
  for (auto& x : v) x = d(rng);
  return Cyc::from_cyclic(p, v, 1 + std::abs(d(rng)));
}

bool close(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) < 1e-9; }

}  // namespace

TEST_CASE("ring operations agree with complex arithmetic") {
  std::mt19937_64 rng(11);
  for (int p : {3, 5, 7, 11}) {
    for (int t = 0; t < 200; ++t) {
      const Cyc a = random_cyc(rng, p), b = random_cyc(rng, p), c = random_cyc(rng, p);
      CHECK(close((a + b).to_complex(), a.to_complex() + b.to_complex()));
      CHECK(close((a * b).to_complex(), a.to_complex() * b.to_complex()));
      CHECK(close((a - b).to_complex(), a.to_complex() - b.to_complex()));
      CHECK(close(a.conj().to_complex(), std::conj(a.to_complex())));
      CHECK((a * (b + c)) == (a * b + a * c));
      CHECK((a * b) == (b * a));
      CHECK(a.conj().conj() == a);
      if (p <= 7 && !a.is_zero()) CHECK((a * a.inverse()) == Cyc::rational(p, 1));
    }
  }
}

TEST_CASE("representation is canonical") {
  const int p = 5;
  std::vector<std::int64_t> ones(5, 1);
  CHECK(Cyc::from_cyclic(p, ones).is_zero());
  CHECK(Cyc::from_cyclic(p, {2, 4, 6, 8, 10}, 2) == Cyc::from_cyclic(p, {1, 2, 3, 4, 5}));
  CHECK(Cyc::zeta_power(p, 5) == Cyc::rational(p, 1));
  CHECK(Cyc::zeta_power(p, -1) == Cyc::zeta_power(p, 4));
  CHECK(Cyc::rational(p, 3, 6).rational_value() == Rational(1, 2));
  CHECK(Cyc::rational(p, 3, -6).den() == 2);
  CHECK_THROWS(Cyc::zeta_power(p, 1).rational_value());
}

TEST_CASE("Gauss sums") {
  for (int p : {3, 5, 7, 11, 13}) {
    const Cyc g = gauss_sum(p);
    const std::int64_t eps = legendre(-1, p);
    CHECK(g * g == Cyc::rational(p, eps * p));
    CHECK(g * g.conj() == Cyc::rational(p, p));
    std::complex<double> direct = 0;
    for (int t = 0; t < p; ++t) direct += std::polar(1.0, 2 * 3.141592653589793 * (t * t % p) / p);
    CHECK(close(g.to_complex(), direct));
    for (int a = 1; a < p; ++a) CHECK(g.galois(a) == Cyc::rational(p, legendre(a, p)) * g);
  }
}

TEST_CASE("Legendre symbol by squares") {
  for (int p : {3, 5, 7, 11, 13}) {
    std::vector<int> sq(static_cast<std::size_t>(p), -1);
    for (int x = 1; x < p; ++x) sq[static_cast<std::size_t>(x * x % p)] = 1;
    for (int a = 1; a < p; ++a) CHECK(legendre(a, p) == sq[static_cast<std::size_t>(a)]);
    CHECK(legendre(0, p) == 0);
    CHECK(legendre(-1, p) == legendre(p - 1, p));
  }
}

TEST_CASE("powers and inverse") {
  const int p = 7;
  const Cyc z = Cyc::zeta_power(p, 1);
  CHECK(z.pow(7) == Cyc::rational(p, 1));
  CHECK(z.pow(-3) == Cyc::zeta_power(p, 4));
  const Cyc g = gauss_sum(p);
  CHECK(g.pow(-2) == Cyc::rational(p, -1, 7));
  CHECK_THROWS(Cyc(p).inverse());
  CHECK_THROWS(Cyc(p) + Cyc(5));
}

TEST_CASE("operators") {
  std::mt19937_64 rng(5);
  const int p = 5, d = 3;
  auto rnd = [&] {
    std::vector<Cyc> e;
    for (int i = 0; i < d * d; ++i) e.push_back(random_cyc(rng, p));
    return Operator::from_entries(d, p, e);
  };
  for (int t = 0; t < 30; ++t) {
    const Operator a = rnd(), b = rnd(), c = rnd();
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * Operator::identity(d, p) == a);
    const Operator ab = a * b;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Cyc s(p);
        for (int k = 0; k < d; ++k) s += a.entry(i, k) * b.entry(k, j);
        CHECK(ab.entry(i, j) == s);
      }
    Cyc tr(p);
    for (int i = 0; i < d; ++i) tr += a.entry(i, i);
    CHECK(a.trace() == tr);
    const Cyc s = random_cyc(rng, p);
    if (!s.is_zero()) {
      const auto r = Operator::scalar_ratio(s * a, a);
      REQUIRE(r.has_value());
      CHECK(*r == s);
    }
  }
  const auto z = Operator::identity(2, p).to_complex();
  CHECK(close(z[0], 1.0));
  CHECK(close(z[1], 0.0));
}

TEST_CASE("overflow is reported, never wrapped") {
  const int p = 11;
  Cyc big = Cyc::rational(p, 1) + Cyc::zeta_power(p, 1) * Cyc::rational(p, 1'000'000'007);
  CHECK_THROWS_AS(big.pow(5), std::overflow_error);
}
