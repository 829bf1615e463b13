#include "multone/root_system.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

namespace multone {

namespace {

using IntMatrix = std::vector<std::vector<std::int64_t>>;
using RatMatrix = std::vector<std::vector<Rational>>;

IntMatrix cartan_matrix(SimpleType t) {
  const int n = t.rank;
  IntMatrix c(n, std::vector<std::int64_t>(n, 0));
  for (int i = 0; i < n; ++i) c[i][i] = 2;
  auto link = [&](int i, int j) {  // 1-based, simply laced edge
    c[i - 1][j - 1] = -1;
    c[j - 1][i - 1] = -1;
  };
  switch (t.family) {
    case Family::A:
      for (int i = 1; i < n; ++i) link(i, i + 1);
      break;
    case Family::B:
      for (int i = 1; i < n; ++i) link(i, i + 1);
      c[n - 1][n - 2] = -2;  // alpha_n short
      break;
    case Family::C:
      for (int i = 1; i < n; ++i) link(i, i + 1);
      c[n - 2][n - 1] = -2;  // alpha_n long
      break;
    case Family::D:
      for (int i = 1; i < n - 1; ++i) link(i, i + 1);
      link(n - 2, n);
      break;
    case Family::E:
      link(1, 3);
      link(2, 4);
      for (int i = 3; i < n; ++i) link(i, i + 1);
      break;
    case Family::F:
      link(1, 2);
      link(2, 3);
      link(3, 4);
      c[2][1] = -2;  // alpha_3 short
      break;
    case Family::G:
      link(1, 2);
      c[0][1] = -3;  // alpha_1 short
      break;
  }
  return c;
}

RatMatrix invert(const IntMatrix& m) {
  const std::size_t n = m.size();
  RatMatrix a(n, std::vector<Rational>(2 * n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = Rational(m[i][j]);
    a[i][n + i] = Rational(1);
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == Rational(0)) ++piv;
    if (piv == n) throw std::logic_error("singular Cartan matrix");
    std::swap(a[piv], a[col]);
    const Rational inv = Rational(1) / a[col][col];
    for (auto& x : a[col]) x *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == Rational(0)) continue;
      const Rational f = a[r][col];
      for (std::size_t k = 0; k < 2 * n; ++k) a[r][k] -= f * a[col][k];
    }
  }
  RatMatrix out(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i][j] = a[i][n + j];
  return out;
}

Rational determinant(const IntMatrix& m) {
  const std::size_t n = m.size();
  RatMatrix a(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = Rational(m[i][j]);
  Rational det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == Rational(0)) ++piv;
    if (piv == n) return Rational(0);
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const Rational f = a[r][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
    }
  }
  return det;
}

// Squared lengths of simple roots, propagated along each connected component and
// normalized so the longest root of every component has length 2.
std::vector<Rational> simple_lengths(const IntMatrix& c) {
  const std::size_t n = c.size();
  std::vector<Rational> len(n, Rational(0));
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<std::size_t> members{s};
    comp[s] = ncomp;
    len[s] = Rational(1);
    for (std::size_t head = 0; head < members.size(); ++head) {
      const std::size_t i = members[head];
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || c[i][j] == 0 || comp[j] >= 0) continue;
        // c[i][j] len_i = c[j][i] len_j
        len[j] = len[i] * Rational(c[i][j]) / Rational(c[j][i]);
        comp[j] = ncomp;
        members.push_back(j);
      }
    }
    Rational mx(0);
    for (auto i : members) mx = std::max(mx, len[i]);
    for (auto i : members) len[i] = len[i] * Rational(2) / mx;
    ++ncomp;
  }
  return len;
}

// Positive roots in simple-root coordinates, ordered by height then lexicographically.
std::vector<std::vector<std::int64_t>> positive_roots_simple(const IntMatrix& c) {
  const std::size_t n = c.size();
  std::set<std::vector<std::int64_t>> all;
  std::vector<std::vector<std::int64_t>> layer;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::int64_t> e(n, 0);
    e[i] = 1;
    layer.push_back(e);
    all.insert(e);
  }
  while (!layer.empty()) {
    std::set<std::vector<std::int64_t>> next;
    for (const auto& beta : layer) {
      for (std::size_t i = 0; i < n; ++i) {
        std::int64_t pairing = 0;  // <beta, alpha_i^vee>
        for (std::size_t j = 0; j < n; ++j) pairing += beta[j] * c[i][j];
        std::int64_t down = 0;
        auto probe = beta;
        while (true) {
          probe[i] -= 1;
          if (probe[i] < 0 || !all.count(probe)) break;
          ++down;
        }
        if (down - pairing > 0) {
          auto up = beta;
          up[i] += 1;
          if (!all.count(up)) next.insert(up);
        }
      }
    }
    layer.assign(next.begin(), next.end());
    all.insert(next.begin(), next.end());
  }
  std::vector<std::vector<std::int64_t>> out(all.begin(), all.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::accumulate(a.begin(), a.end(), std::int64_t{0}) <
           std::accumulate(b.begin(), b.end(), std::int64_t{0});
  });
  return out;
}

std::uint64_t factorial(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

std::uint64_t irreducible_weyl_order(const IntMatrix& c) {
  const auto roots = positive_roots_simple(c);
  const auto& top = roots.back();
  std::uint64_t prod = factorial(c.size());
  for (auto x : top) prod *= static_cast<std::uint64_t>(x);
  const Rational det = determinant(c);
  return prod * static_cast<std::uint64_t>(boost::rational_cast<std::int64_t>(det));
}

}  // namespace

// ---------------------------------------------------------------------------

void SimpleType::validate() const {
  auto fail = [&](const std::string& bound) {
    throw DomainError("unsupported type " + std::string(1, static_cast<char>(family)) +
                      std::to_string(rank) + ": " + bound);
  };
  switch (family) {
    case Family::A:
      if (rank < 1) fail("A requires rank >= 1");
      break;
    case Family::B:
      if (rank < 2) fail("B requires rank >= 2");
      break;
    case Family::C:
      if (rank < 2) fail("C requires rank >= 2");
      break;
    case Family::D:
      if (rank < 3) fail("D requires rank >= 3");
      break;
    case Family::E:
      if (rank == 8) fail("E8 is not supported (no multiplicity-one table)");
      if (rank != 6 && rank != 7) fail("E requires rank 6 or 7");
      break;
    case Family::F:
      if (rank != 4) fail("F requires rank 4");
      break;
    case Family::G:
      if (rank != 2) fail("G requires rank 2");
      break;
  }
}

std::string SimpleType::name() const {
  return std::string(1, static_cast<char>(family)) + std::to_string(rank);
}

SimpleType SimpleType::parse(const std::string& family, int rank) {
  if (family.size() != 1) throw DomainError("unknown family '" + family + "'");
  const char f = static_cast<char>(std::toupper(static_cast<unsigned char>(family[0])));
  if (std::string("ABCDEFG").find(f) == std::string::npos)
    throw DomainError("unknown family '" + family + "'");
  SimpleType t{static_cast<Family>(f), rank};
  t.validate();
  return t;
}

Weight Weight::fundamental(std::size_t rank, std::size_t i) {
  Weight w(rank);
  w[i - 1] = 1;
  return w;
}

bool Weight::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](auto x) { return x == 0; });
}

bool Weight::is_dominant() const {
  return std::all_of(coords_.begin(), coords_.end(), [](auto x) { return x >= 0; });
}

Weight& Weight::operator+=(const Weight& o) {
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
  return *this;
}

Weight& Weight::operator-=(const Weight& o) {
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
  return *this;
}

Weight operator-(Weight a) {
  for (auto& x : a.coords_) x = -x;
  return a;
}

Weight operator*(std::int64_t k, Weight a) {
  for (auto& x : a.coords_) x *= k;
  return a;
}

std::string Weight::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < coords_.size(); ++i) os << (i ? "," : "") << coords_[i];
  os << ')';
  return os.str();
}

std::size_t WeightHash::operator()(const Weight& w) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (auto x : w.coords()) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ULL + (h >> 29);
  return h;
}

RootSystemData build_root_system(SimpleType type) {
  type.validate();
  RootSystemData rs;
  rs.type = type;
  rs.cartan = cartan_matrix(type);
  const std::size_t n = rs.cartan.size();

  for (std::size_t j = 0; j < n; ++j) {
    Weight a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = rs.cartan[i][j];
    rs.simple_roots.push_back(a);
  }
  rs.simple_length2 = simple_lengths(rs.cartan);
  rs.cartan_inverse = invert(rs.cartan);

  // form = D C^{-1} with D = diag(len2 / 2)
  rs.form.assign(n, std::vector<Rational>(n));
  std::int64_t scale = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      rs.form[i][j] = rs.simple_length2[i] / Rational(2) * rs.cartan_inverse[i][j];
      scale = std::lcm(scale, rs.form[i][j].denominator());
    }
  rs.form_scale = scale;
  rs.form_int.assign(n, std::vector<std::int64_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      rs.form_int[i][j] = boost::rational_cast<std::int64_t>(rs.form[i][j] * Rational(scale));

  for (const auto& c : positive_roots_simple(rs.cartan)) {
    PositiveRoot r;
    r.simple = c;
    r.height = std::accumulate(c.begin(), c.end(), std::int64_t{0});
    r.omega = Weight(n);
    for (std::size_t j = 0; j < n; ++j) r.omega += c[j] * rs.simple_roots[j];
    Rational len(0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        len += Rational(c[i] * c[j] * rs.cartan[i][j]) * rs.simple_length2[i] / Rational(2);
    r.length2 = len;
    r.coroot.resize(n);
    for (std::size_t j = 0; j < n; ++j)
      r.coroot[j] = boost::rational_cast<std::int64_t>(Rational(c[j]) * rs.simple_length2[j] / len);
    rs.positive_roots.push_back(std::move(r));
  }
  rs.highest_root = rs.positive_roots.back().omega;
  rs.rho = Weight(std::vector<std::int64_t>(n, 1));
  return rs;
}

const RootSystemData& root_system(SimpleType type) {
  static std::mutex mu;
  static std::map<std::pair<char, int>, RootSystemData> cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(static_cast<char>(type.family), type.rank);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_root_system(type)).first;
  return it->second;
}

Weight simple_reflection(const RootSystemData& rs, std::size_t i, const Weight& w) {
  if (i < 1 || i > rs.rank())
    throw DomainError("simple reflection index " + std::to_string(i) + " outside 1.." +
                      std::to_string(rs.rank()));
  Weight out = w;
  const std::int64_t k = w[i - 1];
  for (std::size_t r = 0; r < rs.rank(); ++r) out[r] -= k * rs.cartan[r][i - 1];
  return out;
}

std::vector<Weight> weyl_orbit(const RootSystemData& rs, const Weight& w) {
  std::set<Weight> seen{w};
  std::vector<Weight> frontier{w};
  while (!frontier.empty()) {
    std::vector<Weight> next;
    for (const auto& x : frontier)
      for (std::size_t i = 1; i <= rs.rank(); ++i) {
        if (x[i - 1] == 0) continue;
        auto y = simple_reflection(rs, i, x);
        if (seen.insert(y).second) next.push_back(std::move(y));
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

Weight dominant_representative(const RootSystemData& rs, Weight w) {
  const std::size_t n = rs.rank();
  for (;;) {
    std::size_t i = 0;
    while (i < n && w[i] >= 0) ++i;
    if (i == n) return w;
    const std::int64_t k = w[i];
    for (std::size_t r = 0; r < n; ++r) w[r] -= k * rs.cartan[r][i];
  }
}

std::vector<Rational> root_coordinates(const RootSystemData& rs, const Weight& w) {
  const std::size_t n = rs.rank();
  std::vector<Rational> c(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c[i] += rs.cartan_inverse[i][j] * Rational(w[j]);
  return c;
}

bool is_radical(const RootSystemData& rs, const Weight& w) {
  for (const auto& x : root_coordinates(rs, w))
    if (x.denominator() != 1) return false;
  return true;
}

std::int64_t coroot_pairing(const PositiveRoot& root, const Weight& w) {
  std::int64_t s = 0;
  for (std::size_t j = 0; j < w.rank(); ++j) s += root.coroot[j] * w[j];
  return s;
}

std::int64_t a_value(const RootSystemData& rs, const Weight& w) {
  return coroot_pairing(rs.positive_roots.back(), w);
}

bool is_minuscule(const RootSystemData& rs, const Weight& w) {
  if (!w.is_dominant()) throw DomainError("is_minuscule expects a dominant weight, got " + w.str());
  for (const auto& r : rs.positive_roots)
    if (coroot_pairing(r, w) > 1) return false;
  return true;
}

Rational inner_product(const RootSystemData& rs, const Weight& x, const Weight& y) {
  return Rational(scaled_inner_product(rs, x, y), rs.form_scale);
}

std::int64_t scaled_inner_product(const RootSystemData& rs, const Weight& x, const Weight& y) {
  std::int64_t s = 0;
  const std::size_t n = rs.rank();
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    std::int64_t row = 0;
    for (std::size_t j = 0; j < n; ++j) row += rs.form_int[i][j] * y[j];
    s += x[i] * row;
  }
  return s;
}

std::uint64_t weyl_group_order(const std::vector<std::vector<std::int64_t>>& cartan) {
  const std::size_t n = cartan.size();
  std::vector<int> comp(n, -1);
  std::uint64_t order = 1;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<std::size_t> members{s};
    comp[s] = 1;
    for (std::size_t head = 0; head < members.size(); ++head)
      for (std::size_t j = 0; j < n; ++j)
        if (comp[j] < 0 && cartan[members[head]][j] != 0) {
          comp[j] = 1;
          members.push_back(j);
        }
    std::sort(members.begin(), members.end());
    IntMatrix sub(members.size(), std::vector<std::int64_t>(members.size()));
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = 0; b < members.size(); ++b) sub[a][b] = cartan[members[a]][members[b]];
    order *= irreducible_weyl_order(sub);
  }
  return order;
}

std::uint64_t weyl_group_order(const RootSystemData& rs) { return weyl_group_order(rs.cartan); }

std::uint64_t orbit_size(const RootSystemData& rs, const Weight& w) {
  const Weight d = dominant_representative(rs, w);
  std::vector<std::size_t> zero;
  for (std::size_t i = 0; i < d.rank(); ++i)
    if (d[i] == 0) zero.push_back(i);
  IntMatrix sub(zero.size(), std::vector<std::int64_t>(zero.size()));
  for (std::size_t a = 0; a < zero.size(); ++a)
    for (std::size_t b = 0; b < zero.size(); ++b) sub[a][b] = rs.cartan[zero[a]][zero[b]];
  return weyl_group_order(rs) / weyl_group_order(sub);
}

namespace {
void require_symplectic(const RootSystemData& rs) {
  const bool ok = rs.type.family == Family::C || (rs.type.family == Family::A && rs.type.rank == 1);
  if (!ok) throw DomainError("epsilon coordinates require type C (or A1 read as C1), got " + rs.type.name());
}
}  // namespace

std::vector<std::int64_t> epsilon_coords(const RootSystemData& rs, const Weight& w) {
  require_symplectic(rs);
  const std::size_t n = rs.rank();
  std::vector<std::int64_t> eps(n, 0);
  std::int64_t tail = 0;
  for (std::size_t j = n; j-- > 0;) {
    tail += w[j];
    eps[j] = tail;
  }
  return eps;
}

Weight from_epsilon_coords(const RootSystemData& rs, const std::vector<std::int64_t>& eps) {
  require_symplectic(rs);
  const std::size_t n = rs.rank();
  if (eps.size() != n) throw DomainError("epsilon vector has wrong length");
  Weight w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = eps[i] - (i + 1 < n ? eps[i + 1] : 0);
  return w;
}

SimpleType symplectic_type(int n) {
  if (n < 1) throw DomainError("symplectic rank must be >= 1");
  return n == 1 ? SimpleType{Family::A, 1} : SimpleType{Family::C, n};
}

}  // namespace multone
