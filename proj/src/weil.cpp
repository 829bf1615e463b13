#include "multone/weil.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

namespace multone {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
  std::int64_t r = 1, b = mod(a, p), e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::vector<int> digits(int index, int n, int p) {
  std::vector<int> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i, index /= p) x[static_cast<std::size_t>(i)] = index % p;
  return x;
}

int undigits(const std::vector<int>& x, int p) {
  int r = 0;
  for (int i = static_cast<int>(x.size()) - 1; i >= 0; --i) r = r * p + x[static_cast<std::size_t>(i)];
  return r;
}

std::string word_str(const std::vector<int>& w) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
  os << ']';
  return os.str();
}

FpMatrix block_diag(const FpMatrix& a, const FpMatrix& d) {
  const int n = a.size();
  FpMatrix m(2 * n, a.prime());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m.set(i, j, a(i, j));
      m.set(n + i, n + j, d(i, j));
    }
  return m;
}

FpMatrix unipotent(const FpMatrix& b, bool upper, int sign) {
  const int n = b.size(), p = b.prime();
  FpMatrix m = FpMatrix::identity(2 * n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (upper)
        m.set(i, n + j, sign * b(i, j));
      else
        m.set(n + i, j, sign * b(i, j));
    }
  return m;
}

Operator fourier_op(int n, int p, const WeilCalibration& cal) {
  const int dim = static_cast<int>(ipow(p, n));
  Cyc c = Cyc::rational(p, cal.sign) * Cyc::zeta_power(p, cal.zeta_power) * gauss_sum(p).pow(-n);
  std::vector<Cyc> e;
  e.reserve(static_cast<std::size_t>(dim) * dim);
  for (int x = 0; x < dim; ++x) {
    const auto xv = digits(x, n, p);
    for (int y = 0; y < dim; ++y) {
      const auto yv = digits(y, n, p);
      std::int64_t d = 0;
      for (int i = 0; i < n; ++i) d += xv[static_cast<std::size_t>(i)] * yv[static_cast<std::size_t>(i)];
      e.push_back(c * Cyc::zeta_power(p, d));
    }
  }
  return Operator::from_entries(dim, p, e);
}

Operator multiplier_op(const FpMatrix& b) {
  const int n = b.size(), p = b.prime();
  const int dim = static_cast<int>(ipow(p, n));
  const std::int64_t half = inv_mod(2, p);
  std::vector<Cyc> e(static_cast<std::size_t>(dim) * dim, Cyc(p));
  for (int x = 0; x < dim; ++x) {
    const auto xv = digits(x, n, p);
    std::int64_t q = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) q += xv[static_cast<std::size_t>(i)] * b(i, j) * xv[static_cast<std::size_t>(j)];
    e[static_cast<std::size_t>(x * dim + x)] = Cyc::zeta_power(p, mod(q, p) * half);
  }
  return Operator::from_entries(dim, p, e);
}

Operator dilation_op(const FpMatrix& a, const WeilCalibration& cal) {
  const int n = a.size(), p = a.prime();
  const int dim = static_cast<int>(ipow(p, n));
  const FpMatrix act = cal.transpose_action ? a.transpose() : *a.inverse();
  const std::int64_t c = cal.legendre_twist ? legendre(a.det(), p) : 1;
  std::vector<Cyc> e(static_cast<std::size_t>(dim) * dim, Cyc(p));
  for (int x = 0; x < dim; ++x) {
    const auto xv = digits(x, n, p);
    std::vector<int> yv(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
      std::int64_t s = 0;
      for (int j = 0; j < n; ++j) s += act(i, j) * xv[static_cast<std::size_t>(j)];
      yv[static_cast<std::size_t>(i)] = static_cast<int>(mod(s, p));
    }
    e[static_cast<std::size_t>(x * dim + undigits(yv, p))] = Cyc::rational(p, c);
  }
  return Operator::from_entries(dim, p, e);
}

OscillatorGenerator fourier_gen(int n, int p, const WeilCalibration& cal) {
  FpMatrix j = FpMatrix::standard_form(n, p);
  if (cal.fourier_inverse) j = *j.inverse();
  return {"fourier", j, fourier_op(n, p, cal)};
}

OscillatorGenerator multiplier_gen(const FpMatrix& b, const WeilCalibration& cal) {
  return {"multiplier" + b.str(), unipotent(b, cal.upper_unipotent, cal.unipotent_sign), multiplier_op(b)};
}

OscillatorGenerator dilation_gen(const FpMatrix& a, const WeilCalibration& cal) {
  return {"dilation" + a.str(), block_diag(a, a.inverse()->transpose()), dilation_op(a, cal)};
}

int primitive_root(int p) {
  for (int g = 2; g < p; ++g) {
    bool ok = true;
    for (int q = 2; q < p; ++q)
      if ((p - 1) % q == 0 && is_prime(q)) {
        std::int64_t r = 1;
        for (int k = 0; k < (p - 1) / q; ++k) r = r * g % p;
        if (r == 1) ok = false;
      }
    if (ok) return g;
  }
  return 1;  // p = 2
}

std::vector<FpMatrix> gl_generators(int n, int p) {
  const int g = primitive_root(p);
  std::vector<FpMatrix> out;
  FpMatrix d = FpMatrix::identity(n, p);
  d.set(0, 0, g);
  out.push_back(d);
  if (n >= 2) {
    FpMatrix u = FpMatrix::identity(n, p);
    u.set(0, 1, 1);
    out.push_back(u);
    FpMatrix c(n, p);  // cyclic shift; a transposition when n = 2
    for (int i = 0; i < n; ++i) c.set(i, (i + 1) % n, 1);
    out.push_back(c);
    if (n > 2) {
      FpMatrix s = FpMatrix::identity(n, p);
      s.set(0, 0, 0);
      s.set(1, 1, 0);
      s.set(0, 1, 1);
      s.set(1, 0, 1);
      out.push_back(s);
    }
  }
  return out;
}

std::vector<FpMatrix> all_matrices(int n, int p, bool symmetric_only, bool invertible_only) {
  std::vector<FpMatrix> out;
  const std::int64_t total = ipow(p, n * n);
  for (std::int64_t code = 0; code < total; ++code) {
    FpMatrix m(n, p);
    std::int64_t c = code;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j, c /= p) m.set(i, j, c % p);
    if (symmetric_only && !(m == m.transpose())) continue;
    if (invertible_only && m.det() == 0) continue;
    out.push_back(m);
  }
  return out;
}

Cyc sum_coeffs(int p, const std::vector<std::int64_t>& v, std::int64_t den) {
  std::vector<std::int64_t> c(static_cast<std::size_t>(p), 0);
  std::copy(v.begin(), v.end(), c.begin());
  return Cyc::from_cyclic(p, c, den);
}

/// Prime l = 1 mod p near 2^30 with an element of order p in F_l.
struct ModularImage {
  std::int64_t l = 0, root = 0;

  explicit ModularImage(std::int64_t p) {
    for (l = ((std::int64_t{1} << 30) / p) * p + 1;; l += p)
      if (is_prime(l)) break;
    for (std::int64_t g = 2;; ++g) {
      root = pow_mod(g, (l - 1) / p);
      if (root != 1) break;
    }
  }
  std::int64_t pow_mod(std::int64_t b, std::int64_t e) const {
    std::int64_t r = 1;
    b = mod(b, l);
    while (e) {
      if (e & 1) r = r * b % l;
      b = b * b % l;
      e >>= 1;
    }
    return r;
  }
  std::int64_t operator()(const Cyc& c) const {
    std::int64_t s = 0, z = 1;
    for (auto x : c.coeffs()) {
      s = (s + mod(x, l) * z) % l;
      z = z * root % l;
    }
    return s * pow_mod(c.den(), l - 2) % l;
  }
};

std::size_t rank_mod(std::vector<std::vector<std::int64_t>> m, const ModularImage& f) {
  std::size_t rank = 0;
  if (m.empty()) return 0;
  const std::size_t cols = m[0].size();
  const std::int64_t l = f.l;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    const std::int64_t inv = f.pow_mod(m[rank][c], l - 2);
    for (auto& x : m[rank]) x = x * inv % l;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][c] == 0) continue;
      const std::int64_t k = m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[r][j] = mod(m[r][j] - k * m[rank][j], l);
    }
    ++rank;
  }
  return rank;
}

Eigen::MatrixXcd to_eigen(const Operator& op) {
  const auto z = op.to_complex();
  Eigen::MatrixXcd m(op.dim(), op.dim());
  for (int i = 0; i < op.dim(); ++i)
    for (int j = 0; j < op.dim(); ++j) m(i, j) = z[static_cast<std::size_t>(i * op.dim() + j)];
  return m;
}

double min_separation(const std::vector<std::complex<double>>& e) {
  double sep = 2.0;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = i + 1; j < e.size(); ++j) sep = std::min(sep, std::abs(e[i] - e[j]));
  return sep;
}

bool multiplicities_zero_one(const std::vector<Cyc>& chi, const std::vector<int>& powers, int dim) {
  const auto n = static_cast<int>(powers.size());
  double total = 0;
  for (int j = 0; j < n; ++j) {
    std::complex<double> s = 0;
    for (int k = 0; k < n; ++k)
      s += chi[static_cast<std::size_t>(powers[static_cast<std::size_t>(k)])].to_complex() *
           std::polar(1.0, -2 * std::numbers::pi * j * k / n);
    s /= static_cast<double>(n);
    const double r = std::round(s.real());
    if (std::abs(s - std::complex<double>(r, 0)) > 1e-6 || (r != 0 && r != 1)) return false;
    total += r;
  }
  return static_cast<int>(total) == dim;
}

// F_{p^2} = F_p[t] / (t^2 - r)
struct Fp2 {
  std::int64_t p, r;
  std::int64_t gen = 0;           // code a + b p of a generator of the multiplicative group
  std::vector<int> dlog;          // by code; -1 at zero

  using E = std::pair<std::int64_t, std::int64_t>;
  E mul(E x, E y) const {
    return {mod(x.first * y.first + r * x.second % p * y.second, p), mod(x.first * y.second + x.second * y.first, p)};
  }
  E inv(E x) const {
    const std::int64_t nrm = mod(x.first * x.first - r * (x.second * x.second % p), p);
    const std::int64_t ni = inv_mod(nrm, p);
    return {x.first * ni % p, mod(-x.second * ni, p)};
  }
  E sub(E x, E y) const { return {mod(x.first - y.first, p), mod(x.second - y.second, p)}; }
  std::int64_t code(E x) const { return x.first + x.second * p; }
  E from_code(std::int64_t c) const { return {c % p, c / p}; }

  explicit Fp2(std::int64_t prime) : p(prime), r(2) {
    while (legendre(r, p) != -1) ++r;
    const std::int64_t q = p * p - 1;
    for (std::int64_t c = 1; c < p * p && gen == 0; ++c) {
      dlog.assign(static_cast<std::size_t>(p * p), -1);
      E x{1, 0};
      const E g = from_code(c);
      std::int64_t k = 0;
      for (; k < q; ++k) {
        if (dlog[static_cast<std::size_t>(code(x))] != -1) break;
        dlog[static_cast<std::size_t>(code(x))] = static_cast<int>(k);
        x = mul(x, g);
      }
      if (k == q) gen = c;
    }
  }

  std::size_t nullity(std::vector<std::vector<E>> m) const {
    const std::size_t n = m.size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < n && rank < n; ++c) {
      std::size_t piv = rank;
      while (piv < n && m[piv][c] == E{0, 0}) ++piv;
      if (piv == n) continue;
      std::swap(m[piv], m[rank]);
      const E iv = inv(m[rank][c]);
      for (auto& x : m[rank]) x = mul(x, iv);
      for (std::size_t i = 0; i < n; ++i) {
        if (i == rank || m[i][c] == E{0, 0}) continue;
        const E f = m[i][c];
        for (std::size_t k = 0; k < n; ++k) m[i][k] = sub(m[i][k], mul(f, m[rank][k]));
      }
      ++rank;
    }
    return n - rank;
  }
};

const Fp2& field_p2(std::int64_t p) {
  static thread_local std::vector<std::unique_ptr<Fp2>> cache;
  for (const auto& f : cache)
    if (f->p == p) return *f;
  cache.push_back(std::make_unique<Fp2>(p));
  return *cache.back();
}

}  // namespace

std::string WeilCalibration::str() const {
  std::ostringstream os;
  os << "legendre_twist=" << legendre_twist << " transpose_action=" << transpose_action
     << " upper_unipotent=" << upper_unipotent << " unipotent_sign=" << unipotent_sign
     << " fourier_inverse=" << fourier_inverse << " sign=" << sign << " zeta_power=" << zeta_power;
  return os.str();
}

std::vector<WeilCalibration> calibration_candidates(int p) {
  std::vector<WeilCalibration> out;
  for (int zp = 0; zp < p; ++zp)
    for (int sign : {1, -1})
      for (bool lt : {true, false})
        for (bool ta : {false, true})
          for (bool up : {false, true})
            for (int us : {-1, 1})
              for (bool fi : {false, true}) out.push_back({lt, ta, up, us, fi, sign, zp});
  return out;
}

std::vector<OscillatorGenerator> oscillator_generators(int n, int p, const WeilCalibration& cal, bool complete) {
  std::vector<OscillatorGenerator> out;
  out.push_back(fourier_gen(n, p, cal));
  if (!complete) {
    FpMatrix e11(n, p);
    e11.set(0, 0, 1);
    out.push_back(multiplier_gen(e11, cal));
    for (const auto& a : gl_generators(n, p)) out.push_back(dilation_gen(a, cal));
    return out;
  }
  for (const auto& b : all_matrices(n, p, true, false)) out.push_back(multiplier_gen(b, cal));
  for (const auto& a : all_matrices(n, p, false, true)) out.push_back(dilation_gen(a, cal));
  return out;
}

std::string CocycleFailure::str() const {
  std::ostringstream os;
  os << "{" << calibration.str() << "} " << word_str(word_a) << " vs " << word_str(word_b) << ": "
     << (scalar ? "ratio " + scalar->str() : std::string("not proportional"));
  return os.str();
}

std::vector<Operator> propagate(const GroupAtlas& atlas, const std::vector<Operator>& gen_ops, std::size_t limit) {
  limit = std::min(limit, atlas.size());
  std::vector<Operator> ops;
  ops.reserve(limit);
  if (limit == 0) return ops;
  ops.push_back(Operator::identity(gen_ops.at(0).dim(), gen_ops[0].prime()));
  for (std::size_t i = 1; i < limit; ++i)
    ops.push_back(gen_ops[static_cast<std::size_t>(atlas.via_gen[i])] * ops[static_cast<std::size_t>(atlas.parent[i])]);
  return ops;
}

EdgeCheck verify_edges(const GroupAtlas& atlas, const std::vector<Operator>& gen_ops, const std::vector<Operator>& ops,
                       std::size_t limit, Execution exec) {
  limit = std::min({limit, atlas.size(), ops.size()});
  const int ng = static_cast<int>(atlas.gens.size());
  EdgeCheck out;
  // -1: not an edge to check, 0: agrees, 1: fails
  auto check = [&](std::size_t g, int s) -> int {
    const auto h = atlas.find(atlas.gens[static_cast<std::size_t>(s)] * atlas.elements[g]);
    if (!h || static_cast<std::size_t>(*h) >= limit) return -1;
    if (atlas.parent[static_cast<std::size_t>(*h)] == static_cast<int>(g) && atlas.via_gen[static_cast<std::size_t>(*h)] == s)
      return -1;
    return gen_ops[static_cast<std::size_t>(s)] * ops[g] == ops[static_cast<std::size_t>(*h)] ? 0 : 1;
  };
  if (exec == Execution::serial) {
    for (std::size_t g = 0; g < limit; ++g)
      for (int s = 0; s < ng; ++s) {
        const int r = check(g, s);
        if (r < 0) continue;
        ++out.edges;
        if (r == 1) {
          out.first_failure = {static_cast<int>(g), s};
          return out;
        }
      }
    return out;
  }
  constexpr std::size_t chunk = 1024;
  std::vector<int> fail(chunk);
  std::vector<std::size_t> counted(chunk);
  for (std::size_t base = 0; base < limit; base += chunk) {
    const std::size_t end = std::min(limit, base + chunk);
    const auto len = static_cast<std::int64_t>(end - base);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t k = 0; k < len; ++k) {
      const std::size_t g = base + static_cast<std::size_t>(k);
      fail[static_cast<std::size_t>(k)] = -1;
      counted[static_cast<std::size_t>(k)] = 0;
      for (int s = 0; s < ng; ++s) {
        const int r = check(g, s);
        if (r < 0) continue;
        ++counted[static_cast<std::size_t>(k)];
        if (r == 1) {
          fail[static_cast<std::size_t>(k)] = s;
          break;
        }
      }
    }
    for (std::int64_t k = 0; k < len; ++k) {
      out.edges += counted[static_cast<std::size_t>(k)];
      if (fail[static_cast<std::size_t>(k)] >= 0) {
        out.first_failure = {static_cast<int>(base + static_cast<std::size_t>(k)), fail[static_cast<std::size_t>(k)]};
        return out;
      }
    }
  }
  return out;
}

namespace {

CocycleFailure describe_failure(const GroupAtlas& atlas, const std::vector<Operator>& gen_ops,
                                const std::vector<Operator>& ops, const WeilCalibration& cal, std::pair<int, int> f) {
  CocycleFailure out;
  out.calibration = cal;
  const auto g = static_cast<std::size_t>(f.first);
  const auto s = static_cast<std::size_t>(f.second);
  const int h = atlas.at(atlas.gens[s] * atlas.elements[g]);
  out.word_a = atlas.word(static_cast<int>(g));
  out.word_a.insert(out.word_a.begin(), f.second);
  out.word_b = atlas.word(h);
  out.scalar = Operator::scalar_ratio(gen_ops[s] * ops[g], ops[static_cast<std::size_t>(h)]);
  return out;
}

}  // namespace

WeilRep build_weil_rep(int n, int p, const WeilOptions& opts) {
  if (n < 1) throw DomainError("rank must be at least 1");
  if (p == 2 || !is_prime(p)) throw DomainError("the oscillator construction needs an odd prime, got " + std::to_string(p));
  if (ipow(p, n) > opts.max_dim)
    throw DomainError("p^n = " + std::to_string(ipow(p, n)) + " exceeds the dimension cap " + std::to_string(opts.max_dim));
  const std::uint64_t order = symplectic_group_order(n, p);
  if (order > opts.group_cap)
    throw DomainError("|Sp_" + std::to_string(2 * n) + "(" + std::to_string(p) + ")| = " + std::to_string(order) +
                      " exceeds the group cap " + std::to_string(opts.group_cap));

  WeilRep rep;
  rep.n = n;
  rep.p = p;
  rep.dim = static_cast<int>(ipow(p, n));
  rep.negate.resize(static_cast<std::size_t>(rep.dim));
  for (int x = 0; x < rep.dim; ++x) {
    auto v = digits(x, n, p);
    for (auto& c : v) c = static_cast<int>(mod(-c, p));
    rep.negate[static_cast<std::size_t>(x)] = undigits(v, p);
  }

  std::vector<std::pair<std::vector<FpMatrix>, GroupAtlas>> atlases;
  auto atlas_for = [&](const std::vector<FpMatrix>& gens) -> const GroupAtlas& {
    for (const auto& [k, a] : atlases)
      if (k == gens) return a;
    atlases.emplace_back(gens, enumerate_group(n, p, gens, opts.group_cap));
    if (atlases.back().second.size() != order)
      throw std::logic_error("generators reach " + std::to_string(atlases.back().second.size()) + " of " +
                             std::to_string(order) + " elements");
    return atlases.back().second;
  };

  for (const auto& cal : calibration_candidates(p)) {
    ++rep.candidates_tried;
    auto gens = oscillator_generators(n, p, cal);
    std::vector<FpMatrix> mats;
    std::vector<Operator> gen_ops;
    for (const auto& g : gens) {
      mats.push_back(g.element);
      gen_ops.push_back(g.op);
    }
    const GroupAtlas& atlas = atlas_for(mats);
    const std::size_t screen = std::min(opts.screen_limit, atlas.size());
    auto ops = propagate(atlas, gen_ops, screen);
    auto check = verify_edges(atlas, gen_ops, ops, screen, opts.exec);
    if (!check.first_failure) {
      ops = propagate(atlas, gen_ops, atlas.size());
      check = verify_edges(atlas, gen_ops, ops, atlas.size(), opts.exec);
    }
    if (check.first_failure) {
      if (rep.rejected.size() < 4) rep.rejected.push_back(describe_failure(atlas, gen_ops, ops, cal, *check.first_failure));
      continue;
    }
    rep.calibration = cal;
    rep.edges_checked = check.edges;
    rep.atlas = atlas;
    rep.gens = std::move(gens);
    rep.ops = std::move(ops);
    return rep;
  }
  throw CocycleObstruction("no calibration of the generator formulas closes up to a homomorphism", rep.rejected);
}

GeneratorAudit check_formula_generators(const WeilRep& rep) {
  GeneratorAudit out;
  for (const auto& g : oscillator_generators(rep.n, rep.p, rep.calibration, true)) {
    ++out.checked;
    if (!(rep.rho(g.element) == g.op)) out.mismatches.push_back(g.name);
  }
  return out;
}

SpotCheck spot_check(const WeilRep& rep, std::uint64_t seed, std::size_t products, std::size_t inverses,
                     std::size_t conjugates) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, rep.atlas.size() - 1);
  const Operator id = Operator::identity(rep.dim, rep.p);
  SpotCheck out;
  for (std::size_t i = 0; i < products; ++i) {
    const auto a = pick(rng), b = pick(rng);
    ++out.products;
    if (!(rep.ops[a] * rep.ops[b] == rep.rho(rep.atlas.elements[a] * rep.atlas.elements[b]))) ++out.product_failures;
  }
  for (std::size_t i = 0; i < inverses; ++i) {
    const auto a = pick(rng);
    ++out.inverses;
    if (!(rep.ops[a] * rep.rho(*rep.atlas.elements[a].inverse()) == id)) ++out.inverse_failures;
  }
  for (std::size_t i = 0; i < conjugates; ++i) {
    const auto a = pick(rng), h = pick(rng);
    ++out.conjugates;
    const FpMatrix& hm = rep.atlas.elements[h];
    const FpMatrix hinv = *hm.inverse();
    const Operator lhs = rep.rho(hm * rep.atlas.elements[a] * hinv);
    if (!(lhs == rep.ops[h] * rep.ops[a] * rep.rho(hinv)) || !(lhs.trace() == rep.ops[a].trace())) ++out.conjugate_failures;
  }
  return out;
}

ParitySplit parity_split(const WeilRep& rep, Execution exec) {
  ParitySplit out;
  const int d = rep.dim, p = rep.p;
  out.dim_even = (d + 1) / 2;
  out.dim_odd = (d - 1) / 2;
  for (int x = 1; x < d; ++x)
    if (x < rep.negate[static_cast<std::size_t>(x)]) out.reps.push_back(x);
  const auto count = static_cast<std::int64_t>(rep.ops.size());
  out.chi_odd.assign(rep.ops.size(), Cyc(p));
  out.chi_even.assign(rep.ops.size(), Cyc(p));
  std::vector<char> ok(rep.ops.size(), 1);
  auto one = [&](std::int64_t gi) {
    const Operator& m = rep.ops[static_cast<std::size_t>(gi)];
    std::vector<std::int64_t> tr(static_cast<std::size_t>(p - 1), 0), sw(static_cast<std::size_t>(p - 1), 0);
    for (int x = 0; x < d; ++x) {
      const int nx = rep.negate[static_cast<std::size_t>(x)];
      const std::int64_t* a = m.raw(x, x);
      const std::int64_t* b = m.raw(x, nx);
      for (int k = 0; k + 1 < p; ++k) {
        tr[static_cast<std::size_t>(k)] += a[k];
        sw[static_cast<std::size_t>(k)] += b[k];
      }
      for (int y = 0; y < d && ok[static_cast<std::size_t>(gi)]; ++y) {
        const std::int64_t* u = m.raw(y, x);
        const std::int64_t* v = m.raw(rep.negate[static_cast<std::size_t>(y)], nx);
        if (!std::equal(u, u + p - 1, v)) ok[static_cast<std::size_t>(gi)] = 0;
      }
    }
    std::vector<std::int64_t> plus(tr), minus(tr);
    for (int k = 0; k + 1 < p; ++k) {
      plus[static_cast<std::size_t>(k)] += sw[static_cast<std::size_t>(k)];
      minus[static_cast<std::size_t>(k)] -= sw[static_cast<std::size_t>(k)];
    }
    out.chi_even[static_cast<std::size_t>(gi)] = sum_coeffs(p, plus, 2 * m.den());
    out.chi_odd[static_cast<std::size_t>(gi)] = sum_coeffs(p, minus, 2 * m.den());
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t g = 0; g < count; ++g) one(g);
  } else {
    for (std::int64_t g = 0; g < count; ++g) one(g);
  }
  out.commutes = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
  return out;
}

Operator parity_block(const WeilRep& rep, const ParitySplit& split, int element, bool even) {
  const Operator& m = rep.ops.at(static_cast<std::size_t>(element));
  const int p = rep.p;
  std::vector<int> basis;
  if (even) basis.push_back(0);
  basis.insert(basis.end(), split.reps.begin(), split.reps.end());
  const int k = static_cast<int>(basis.size());
  const int sgn = even ? 1 : -1;
  std::vector<Cyc> e;
  e.reserve(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i) {
    const int y = basis[static_cast<std::size_t>(i)];
    for (int j = 0; j < k; ++j) {
      const int x = basis[static_cast<std::size_t>(j)];
      Cyc v = m.entry(y, x);
      if (x != 0) v += Cyc::rational(p, sgn) * m.entry(y, rep.negate[static_cast<std::size_t>(x)]);
      e.push_back(v);
    }
  }
  return Operator::from_entries(k, p, e);
}

Cyc character_pairing_sum(const std::vector<Cyc>& a, const std::vector<Cyc>& b, Execution exec) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("character vectors differ in length");
  const int p = a[0].prime();
  const auto n = static_cast<std::int64_t>(a.size());
  if (exec == Execution::serial) {
    Cyc s(p);
    for (std::int64_t i = 0; i < n; ++i) s += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)].conj();
    return s;
  }
  Cyc total(p);
#pragma omp parallel
  {
    Cyc s(p);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) s += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)].conj();
#pragma omp critical
    total += s;
  }
  return total;
}

CharacterNorms character_norms(const WeilRep& rep, const ParitySplit& split, Execution exec) {
  const Rational order(static_cast<std::int64_t>(rep.atlas.size()));
  CharacterNorms out;
  out.odd_odd = character_pairing_sum(split.chi_odd, split.chi_odd, exec).rational_value() / order;
  out.even_even = character_pairing_sum(split.chi_even, split.chi_even, exec).rational_value() / order;
  out.odd_even = character_pairing_sum(split.chi_odd, split.chi_even, exec).rational_value() / order;
  return out;
}

SimpleSpectrumReport check_simple_spectrum(const WeilRep& rep, const ParitySplit& split, double tolerance) {
  SimpleSpectrumReport out;
  const std::int64_t target = ipow(rep.p, rep.n) + 1;
  for (std::size_t i = 0; i < rep.atlas.size(); ++i) {
    const FpMatrix& g = rep.atlas.elements[i];
    auto cp = g.char_poly();
    if (!poly_irreducible_mod_p(cp, rep.p)) continue;
    if (g.order() != target) continue;
    out.found = true;
    out.element = static_cast<int>(i);
    out.element_str = g.str();
    out.order = target;
    out.char_poly = std::move(cp);
    break;
  }
  if (!out.found) return out;
  auto eig = [&](bool even) {
    const Eigen::MatrixXcd m = to_eigen(parity_block(rep, split, out.element, even));
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    std::vector<std::complex<double>> v(es.eigenvalues().begin(), es.eigenvalues().end());
    std::sort(v.begin(), v.end(), [](auto a, auto b) { return std::arg(a) < std::arg(b); });
    return v;
  };
  out.eig_odd = eig(false);
  out.eig_even = eig(true);
  out.sep_odd = min_separation(out.eig_odd);
  out.sep_even = min_separation(out.eig_even);
  out.simple_odd = out.sep_odd > tolerance;
  out.simple_even = out.sep_even > tolerance;
  std::vector<int> powers;
  FpMatrix x = FpMatrix::identity(2 * rep.n, rep.p);
  for (std::int64_t k = 0; k < target; ++k) {
    powers.push_back(rep.atlas.at(x));
    x = rep.atlas.elements[static_cast<std::size_t>(out.element)] * x;
  }
  out.trace_power_consistent = multiplicities_zero_one(split.chi_odd, powers, split.dim_odd) &&
                               multiplicities_zero_one(split.chi_even, powers, split.dim_even);
  return out;
}

ProductRestrictionReport check_product_restriction(const WeilRep& big, const WeilRep& left, const WeilRep& right, Execution exec) {
  if (big.p != left.p || big.p != right.p || left.n + right.n != big.n)
    throw std::invalid_argument("subgroup ranks or primes do not match");
  ProductRestrictionReport out;
  out.n = big.n;
  out.k = left.n;
  out.p = big.p;
  const int n = big.n, k = left.n, p = big.p;
  const auto sb = parity_split(big, exec), sl = parity_split(left, exec), sr = parity_split(right, exec);
  const std::size_t nl = left.atlas.size(), nr = right.atlas.size();
  out.subgroup_order = nl * nr;
  auto embed = [&](const FpMatrix& a, const FpMatrix& b) {
    FpMatrix m(2 * n, p);
    auto ml = [&](int i) { return i < k ? i : n + (i - k); };
    auto mr = [&](int i) { return i < n - k ? k + i : n + k + (i - (n - k)); };
    for (int i = 0; i < 2 * k; ++i)
      for (int j = 0; j < 2 * k; ++j) m.set(ml(i), ml(j), a(i, j));
    for (int i = 0; i < 2 * (n - k); ++i)
      for (int j = 0; j < 2 * (n - k); ++j) m.set(mr(i), mr(j), b(i, j));
    return m;
  };
  // pieces: [i][c]
  auto accumulate = [&](std::size_t g, std::vector<Cyc>& acc) {
    for (std::size_t h = 0; h < nr; ++h) {
      const auto e = static_cast<std::size_t>(big.atlas.at(embed(left.atlas.elements[g], right.atlas.elements[h])));
      const Cyc* bigc[2] = {&sb.chi_odd[e], &sb.chi_even[e]};
      const Cyc prods[4] = {(sl.chi_odd[g] * sr.chi_odd[h]).conj(), (sl.chi_even[g] * sr.chi_even[h]).conj(),
                            (sl.chi_odd[g] * sr.chi_even[h]).conj(), (sl.chi_even[g] * sr.chi_odd[h]).conj()};
      for (int i = 0; i < 2; ++i)
        for (int c = 0; c < 4; ++c) acc[static_cast<std::size_t>(i * 4 + c)] += *bigc[i] * prods[c];
    }
  };
  std::vector<Cyc> total(8, Cyc(p));
  const auto count = static_cast<std::int64_t>(nl);
  if (exec == Execution::serial) {
    for (std::int64_t g = 0; g < count; ++g) accumulate(static_cast<std::size_t>(g), total);
  } else {
#pragma omp parallel
    {
      std::vector<Cyc> acc(8, Cyc(p));
#pragma omp for schedule(dynamic, 4)
      for (std::int64_t g = 0; g < count; ++g) accumulate(static_cast<std::size_t>(g), acc);
#pragma omp critical
      for (std::size_t i = 0; i < 8; ++i) total[i] += acc[i];
    }
  }
  const Rational ord(static_cast<std::int64_t>(out.subgroup_order));
  const int expected[2][4] = {{0, 0, 1, 1}, {1, 1, 0, 0}};
  out.pass = true;
  for (int i = 0; i < 2; ++i)
    for (int c = 0; c < 4; ++c) {
      out.products[i][c] = total[static_cast<std::size_t>(i * 4 + c)].rational_value() / ord;
      if (out.products[i][c] != Rational(expected[i][c])) out.pass = false;
    }
  return out;
}

std::size_t intertwiner_dimension(const WeilRep& rep, const ParitySplit& split) {
  const int dodd = split.dim_odd, deven = split.dim_even;
  const auto unknowns = static_cast<std::size_t>(dodd * deven);
  if (unknowns == 0) return 0;
  const ModularImage f(rep.p);
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& g : rep.gens) {
    const int idx = rep.atlas.at(g.element);
    const Operator e = parity_block(rep, split, idx, true);
    const Operator o = parity_block(rep, split, idx, false);
    for (int a = 0; a < dodd; ++a)
      for (int b = 0; b < deven; ++b) {
        std::vector<std::int64_t> row(unknowns, 0);
        for (int c = 0; c < deven; ++c) {
          auto& x = row[static_cast<std::size_t>(a * deven + c)];
          x = (x + f(e.entry(c, b))) % f.l;
        }
        for (int c = 0; c < dodd; ++c) {
          auto& x = row[static_cast<std::size_t>(c * deven + b)];
          x = mod(x - f(o.entry(a, c)), f.l);
        }
        rows.push_back(std::move(row));
      }
  }
  return unknowns - rank_mod(std::move(rows), f);
}

bool galois_stable_under_squares(const WeilRep& rep, const ParitySplit& split) {
  for (std::int64_t x = 1; x < rep.p; ++x) {
    const std::int64_t a = x * x % rep.p;
    for (std::size_t i = 0; i < split.chi_odd.size(); ++i)
      if (!(split.chi_odd[i].galois(a) == split.chi_odd[i]) || !(split.chi_even[i].galois(a) == split.chi_even[i]))
        return false;
  }
  return true;
}

std::complex<double> sym_power_brauer_character(const FpMatrix& g, int k) {
  if (g.size() != 2) throw std::invalid_argument("expected a 2x2 matrix");
  const std::int64_t p = g.prime();
  if (k < 0) throw std::invalid_argument("negative symmetric power");
  const auto dim = static_cast<std::size_t>(k + 1);
  // Column j: image of X^(k-j) Y^j under X -> aX + cY, Y -> bX + dY; index = power of Y.
  std::vector<std::vector<std::int64_t>> sym(dim, std::vector<std::int64_t>(dim, 0));
  auto times = [&](const std::vector<std::int64_t>& f, std::int64_t cx, std::int64_t cy) {
    std::vector<std::int64_t> r(f.size() + 1, 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      r[i] = (r[i] + f[i] * cx) % p;
      r[i + 1] = (r[i + 1] + f[i] * cy) % p;
    }
    return r;
  };
  for (int j = 0; j <= k; ++j) {
    std::vector<std::int64_t> f{1};
    for (int t = 0; t < k - j; ++t) f = times(f, g(0, 0), g(1, 0));
    for (int t = 0; t < j; ++t) f = times(f, g(0, 1), g(1, 1));
    for (int i = 0; i <= k; ++i) sym[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = f[static_cast<std::size_t>(i)];
  }
  const Fp2& field = field_p2(p);
  const std::int64_t q = p * p - 1;
  std::complex<double> total = 0;
  std::size_t found = 0;
  for (std::int64_t code = 1; code < p * p; ++code) {
    const auto lam = field.from_code(code);
    std::vector<std::vector<Fp2::E>> m(dim, std::vector<Fp2::E>(dim));
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) {
        m[i][j] = {sym[i][j], 0};
        if (i == j) m[i][j] = field.sub(m[i][j], lam);
      }
    const std::size_t mult = field.nullity(std::move(m));
    if (mult == 0) continue;
    found += mult;
    total += static_cast<double>(mult) *
             std::polar(1.0, 2 * std::numbers::pi * field.dlog[static_cast<std::size_t>(code)] / static_cast<double>(q));
  }
  if (found != dim) throw std::invalid_argument("element " + g.str() + " is not semisimple on the symmetric power");
  return total;
}

BrauerReport brauer_compare_sl2(const WeilRep& rep, double tolerance) {
  if (rep.n != 1) throw DomainError("the symmetric power comparison is for rank one");
  BrauerReport out;
  out.p = rep.p;
  const ParitySplit split = parity_split(rep);
  out.dim_odd = split.dim_odd;
  out.dim_even = split.dim_even;
  out.sym_odd = (rep.p - 3) / 2;
  out.sym_even = (rep.p - 1) / 2;
  for (std::size_t i = 0; i < rep.atlas.size(); ++i) {
    const FpMatrix& g = rep.atlas.elements[i];
    if (g.order() % rep.p == 0) continue;
    ++out.regular_elements;
    const double eo = std::abs(split.chi_odd[i].to_complex() - sym_power_brauer_character(g, out.sym_odd));
    const double ee = std::abs(split.chi_even[i].to_complex() - sym_power_brauer_character(g, out.sym_even));
    out.max_err_odd = std::max(out.max_err_odd, eo);
    out.max_err_even = std::max(out.max_err_even, ee);
    if ((eo > tolerance || ee > tolerance) && out.mismatches.size() < 20)
      out.mismatches.push_back(g.str() + (eo > tolerance ? " odd" : "") + (ee > tolerance ? " even" : ""));
  }
  return out;
}

BrauerReport brauer_compare_sl2(int p, double tolerance, const WeilOptions& opts) {
  return brauer_compare_sl2(build_weil_rep(1, p, opts), tolerance);
}

}  // namespace multone
