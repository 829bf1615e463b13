#include "multone/finite_sp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

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

using Poly = std::vector<std::int64_t>;  // low to high, over F_p

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_mod(Poly a, const Poly& f, std::int64_t p) {
  trim(a);
  const std::size_t d = f.size() - 1;
  const std::int64_t lead_inv = inv_mod(f.back(), p);
  while (a.size() > d) {
    const std::int64_t c = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - d;
    for (std::size_t i = 0; i <= d; ++i) a[shift + i] = mod(a[shift + i] - c * f[i], p);
    trim(a);
  }
  return a;
}

Poly poly_mul_mod(const Poly& a, const Poly& b, const Poly& f, std::int64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  return poly_mod(c, f, p);
}

Poly poly_gcd(Poly a, Poly b, std::int64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace

FpMatrix::FpMatrix(int size, int p) : size_(size), p_(p), a_(static_cast<std::size_t>(size) * size, 0) {}

FpMatrix FpMatrix::identity(int size, int p) {
  FpMatrix m(size, p);
  for (int i = 0; i < size; ++i) m.set(i, i, 1);
  return m;
}

FpMatrix FpMatrix::from_rows(int p, const std::vector<std::vector<std::int64_t>>& rows) {
  FpMatrix m(static_cast<int>(rows.size()), p);
  for (int i = 0; i < m.size_; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != m.size_)
      throw std::invalid_argument("from_rows: matrix is not square");
    for (int j = 0; j < m.size_; ++j) m.set(i, j, rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  }
  return m;
}

FpMatrix FpMatrix::standard_form(int n, int p) {
  FpMatrix j(2 * n, p);
  for (int i = 0; i < n; ++i) {
    j.set(i, n + i, 1);
    j.set(n + i, i, -1);
  }
  return j;
}

void FpMatrix::set(int i, int j, std::int64_t v) { a_[static_cast<std::size_t>(i * size_ + j)] = static_cast<int>(mod(v, p_)); }

FpMatrix operator*(const FpMatrix& x, const FpMatrix& y) {
  if (x.size_ != y.size_ || x.p_ != y.p_) throw std::invalid_argument("FpMatrix shapes differ");
  const int n = x.size_;
  FpMatrix z(n, x.p_);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::int64_t s = 0;
      for (int k = 0; k < n; ++k) s += static_cast<std::int64_t>(x(i, k)) * y(k, j);
      z.a_[static_cast<std::size_t>(i * n + j)] = static_cast<int>(s % x.p_);
    }
  return z;
}

FpMatrix FpMatrix::transpose() const {
  FpMatrix t(size_, p_);
  for (int i = 0; i < size_; ++i)
    for (int j = 0; j < size_; ++j) t.set(i, j, (*this)(j, i));
  return t;
}

std::optional<FpMatrix> FpMatrix::inverse() const {
  const int n = size_;
  std::vector<std::vector<std::int64_t>> m(static_cast<std::size_t>(n), std::vector<std::int64_t>(2 * static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i][j] = (*this)(i, j);
    m[i][n + i] = 1;
  }
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (m[r][c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return std::nullopt;
    std::swap(m[c], m[piv]);
    const std::int64_t iv = inv_mod(m[c][c], p_);
    for (auto& x : m[c]) x = x * iv % p_;
    for (int r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const std::int64_t f = m[r][c];
      for (int k = 0; k < 2 * n; ++k) m[r][k] = mod(m[r][k] - f * m[c][k], p_);
    }
  }
  FpMatrix out(n, p_);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.set(i, j, m[i][n + j]);
  return out;
}

std::int64_t FpMatrix::det() const {
  const int n = size_;
  std::vector<std::vector<std::int64_t>> m(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = (*this)(i, j);
  std::int64_t d = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (m[r][c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      std::swap(m[c], m[piv]);
      d = mod(-d, p_);
    }
    d = d * m[c][c] % p_;
    const std::int64_t iv = inv_mod(m[c][c], p_);
    for (int r = c + 1; r < n; ++r) {
      const std::int64_t f = m[r][c] * iv % p_;
      for (int k = c; k < n; ++k) m[r][k] = mod(m[r][k] - f * m[c][k], p_);
    }
  }
  return d;
}

FpMatrix FpMatrix::pow(std::int64_t e) const {
  if (e < 0) {
    auto inv = inverse();
    if (!inv) throw std::domain_error("singular matrix has no negative powers");
    return inv->pow(-e);
  }
  FpMatrix r = identity(size_, p_), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

bool FpMatrix::is_identity() const { return *this == identity(size_, p_); }

bool FpMatrix::is_symplectic() const {
  if (size_ % 2 != 0) return false;
  const FpMatrix j = standard_form(size_ / 2, p_);
  return transpose() * j * *this == j;
}

std::int64_t FpMatrix::order(std::int64_t cap) const {
  FpMatrix x = *this;
  for (std::int64_t k = 1; k <= cap; ++k) {
    if (x.is_identity()) return k;
    x = x * *this;
  }
  throw std::runtime_error("element order exceeds " + std::to_string(cap));
}

std::uint64_t FpMatrix::key() const {
  std::uint64_t k = 0;
  for (auto x : a_) {
    if (k > (UINT64_MAX - static_cast<std::uint64_t>(x)) / static_cast<std::uint64_t>(p_))
      throw std::overflow_error("matrix key does not fit in 64 bits");
    k = k * static_cast<std::uint64_t>(p_) + static_cast<std::uint64_t>(x);
  }
  return k;
}

std::string FpMatrix::str() const {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < size_; ++i) {
    os << (i ? ";" : "");
    for (int j = 0; j < size_; ++j) os << (j ? " " : "") << (*this)(i, j);
  }
  os << ']';
  return os.str();
}

std::vector<std::int64_t> FpMatrix::char_poly() const {
  // Faddeev-LeVerrier on the integer lift, reduced mod p at the end.
  const int n = size_;
  using Mat = std::vector<std::vector<std::int64_t>>;
  Mat a(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = (*this)(i, j);
  std::vector<std::int64_t> c(static_cast<std::size_t>(n) + 1, 0);
  c[n] = 1;
  Mat m(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
  for (int k = 1; k <= n; ++k) {
    Mat next(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        __int128 s = 0;
        for (int l = 0; l < n; ++l) s += static_cast<__int128>(a[i][l]) * m[l][j];
        if (i == j) s += c[n - k + 1];
        if (s > INT64_MAX || s < INT64_MIN) throw std::overflow_error("char_poly overflow");
        next[i][j] = static_cast<std::int64_t>(s);
      }
    m = std::move(next);
    __int128 tr = 0;
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) tr += static_cast<__int128>(a[i][l]) * m[l][i];
    if (tr % k != 0) throw std::logic_error("Faddeev-LeVerrier division is not exact");
    c[n - k] = static_cast<std::int64_t>(-tr / k);
  }
  for (auto& x : c) x = mod(x, p_);
  return c;
}

bool poly_irreducible_mod_p(const std::vector<std::int64_t>& f_in, std::int64_t p) {
  Poly f = f_in;
  for (auto& x : f) x = mod(x, p);
  trim(f);
  if (f.size() < 2) return false;
  const std::size_t d = f.size() - 1;
  if (d == 1) return true;
  Poly h = poly_mod({0, 1}, f, p);  // x
  for (std::size_t i = 1; i <= d / 2; ++i) {
    // h <- h^p mod f
    Poly r{1};
    for (std::int64_t k = 0; k < p; ++k) r = poly_mul_mod(r, h, f, p);
    h = r;
    Poly g = h;
    if (g.size() < 2) g.resize(2, 0);
    g[1] = mod(g[1] - 1, p);
    trim(g);
    if (poly_gcd(f, g, p).size() > 1) return false;
  }
  return true;
}

std::uint64_t symplectic_group_order(int n, std::int64_t p) {
  std::uint64_t order = 1;
  const auto up = static_cast<std::uint64_t>(p);
  for (int i = 0; i < n * n; ++i) order *= up;
  std::uint64_t q = 1;
  for (int i = 1; i <= n; ++i) {
    q *= up * up;
    order *= q - 1;
  }
  return order;
}

std::optional<int> GroupAtlas::find(const FpMatrix& m) const {
  auto it = index.find(m.key());
  if (it == index.end()) return std::nullopt;
  return it->second;
}

int GroupAtlas::at(const FpMatrix& m) const {
  auto i = find(m);
  if (!i) throw std::out_of_range("matrix " + m.str() + " is not in the atlas");
  return *i;
}

std::vector<int> GroupAtlas::word(int i) const {
  std::vector<int> w;
  for (; parent[static_cast<std::size_t>(i)] >= 0; i = parent[static_cast<std::size_t>(i)]) w.push_back(via_gen[static_cast<std::size_t>(i)]);
  return w;
}

GroupAtlas enumerate_group(int n, int p, const std::vector<FpMatrix>& gens, std::size_t cap) {
  GroupAtlas at;
  at.n = n;
  at.p = p;
  at.gens = gens;
  for (const auto& g : gens)
    if (g.size() != 2 * n || g.prime() != p || !g.is_symplectic())
      throw std::invalid_argument("generator " + g.str() + " is not in Sp_" + std::to_string(2 * n) + "(" +
                                  std::to_string(p) + ")");
  const FpMatrix id = FpMatrix::identity(2 * n, p);
  at.elements.push_back(id);
  at.parent.push_back(-1);
  at.via_gen.push_back(-1);
  at.index.emplace(id.key(), 0);
  for (std::size_t head = 0; head < at.elements.size(); ++head) {
    for (std::size_t s = 0; s < gens.size(); ++s) {
      FpMatrix next = gens[s] * at.elements[head];
      const auto key = next.key();
      if (at.index.count(key)) continue;
      if (at.elements.size() >= cap) throw GroupCapExceeded("group has more than " + std::to_string(cap) + " elements");
      at.index.emplace(key, static_cast<int>(at.elements.size()));
      at.elements.push_back(std::move(next));
      at.parent.push_back(static_cast<int>(head));
      at.via_gen.push_back(static_cast<int>(s));
    }
  }
  return at;
}

}  // namespace multone
