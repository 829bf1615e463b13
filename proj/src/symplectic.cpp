#include "multone/symplectic.hpp"

#include "multone/classifier.hpp"

namespace multone {

namespace {

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i)
    if (__builtin_mul_overflow(r, b, &r)) throw DomainError("p^n overflows");
  return r;
}

void require_odd_prime(std::int64_t p) {
  if (p == 2 || !is_prime(p)) throw DomainError("p must be an odd prime, got " + std::to_string(p));
}

std::vector<std::int64_t> slice(const std::vector<std::int64_t>& v, std::size_t from, std::size_t to) {
  return {v.begin() + static_cast<std::ptrdiff_t>(from), v.begin() + static_cast<std::ptrdiff_t>(to)};
}

std::string pair_str(const std::pair<Weight, Weight>& pr) { return pr.first.str() + "x" + pr.second.str(); }

/// Formal sum a*X + b*Y of weight multisets on a common lattice.
WeightMultiset combine(std::int64_t a, const WeightMultiset& x, std::int64_t b, const WeightMultiset& y) {
  WeightMultiset out;
  out.rank = x.rank;
  for (const auto& [w, m] : x.entries) out.add(w, a * m);
  for (const auto& [w, m] : y.entries) out.add(w, b * m);
  return out;
}

void product_into(PairMultiset& out, const WeightMultiset& x, const WeightMultiset& y) {
  for (const auto& [a, ma] : x.entries)
    for (const auto& [b, mb] : y.entries) out[{a, b}] += ma * mb;
}

std::int64_t mass(const PairMultiset& m) {
  std::int64_t s = 0;
  for (const auto& [k, v] : m) s += v;
  return s;
}

template <class Map, class Fmt>
void diff_maps(const Map& got, const Map& want, const std::string& label, Fmt fmt, std::vector<std::string>& defects) {
  auto at = [](const Map& m, const auto& k) -> std::int64_t {
    auto it = m.find(k);
    return it == m.end() ? 0 : it->second;
  };
  for (const auto& [k, v] : got)
    if (at(want, k) != v)
      defects.push_back(label + ": " + fmt(k) + " has " + std::to_string(v) + ", expected " + std::to_string(at(want, k)));
  for (const auto& [k, v] : want)
    if (!got.count(k)) defects.push_back(label + ": " + fmt(k) + " missing, expected " + std::to_string(v));
}

}  // namespace

std::int64_t half_weil_dimension(int n, std::int64_t p, int sign) { return (ipow(p, n) + sign) / 2; }

std::pair<Weight, Weight> weil_highest_weights(int n, std::int64_t p) {
  require_odd_prime(p);
  if (n < 1) throw DomainError("n must be at least 1");
  const std::size_t r = static_cast<std::size_t>(n);
  Weight hw1 = ((p - 3) / 2) * Weight::fundamental(r, r);
  if (n > 1) hw1 += Weight::fundamental(r, r - 1);
  Weight hw2 = ((p - 1) / 2) * Weight::fundamental(r, r);
  return {hw1, hw2};
}

WeilWeights build_weil_weights(int n, std::int64_t p, std::int64_t bound) {
  require_odd_prime(p);
  if (n < 1) throw DomainError("n must be at least 1");
  const std::int64_t pn = ipow(p, n);
  if (pn > bound)
    throw DomainError("p^n = " + std::to_string(pn) + " exceeds the configured bound " + std::to_string(bound));
  WeilWeights w;
  w.n = n;
  w.p = p;
  w.type = symplectic_type(n);
  std::tie(w.hw1, w.hw2) = weil_highest_weights(n, p);
  const auto& rs = root_system(w.type);
  auto build = [&](const Weight& hw, int sign, WeightMultiset& x, BigInt& dim) {
    x = weight_set(rs, hw);
    dim = weyl_dimension(rs, hw);
    const std::int64_t want = half_weil_dimension(n, p, sign);
    if (static_cast<std::int64_t>(x.distinct()) != want)
      throw IdentityViolation("weight count of V" + hw.str() + " for " + w.type.name() + ", p=" + std::to_string(p) +
                              ": " + std::to_string(x.distinct()) + " weights, expected " + std::to_string(want));
  };
  build(w.hw1, -1, w.x1, w.dim1);
  build(w.hw2, +1, w.x2, w.dim2);
  return w;
}

PairMultiset restrict_weights_levi(const WeilWeights& w, int which, int k) {
  if (k < 1 || k >= w.n) throw DomainError("Levi split needs 1 <= k < n");
  const auto& rs = root_system(w.type);
  const auto& left = root_system(symplectic_type(k));
  const auto& right = root_system(symplectic_type(w.n - k));
  const auto& x = which == 1 ? w.x1 : w.x2;
  PairMultiset out;
  const auto nk = static_cast<std::size_t>(k), nn = static_cast<std::size_t>(w.n);
  for (const auto& [mu, m] : x.entries) {
    const auto eps = epsilon_coords(rs, mu);
    out[{from_epsilon_coords(left, slice(eps, 0, nk)), from_epsilon_coords(right, slice(eps, nk, nn))}] += m;
  }
  return out;
}

BranchingReport check_branching_formulas(int n, std::int64_t p, int k, std::int64_t bound) {
  BranchingReport rep;
  rep.n = n;
  rep.p = p;
  rep.k = k;
  const auto full = build_weil_weights(n, p, bound);
  const auto a = build_weil_weights(k, p, bound);
  const auto b = build_weil_weights(n - k, p, bound);
  PairMultiset want1, want2;
  product_into(want1, a.x1, b.x2);
  product_into(want1, a.x2, b.x1);
  product_into(want2, a.x1, b.x1);
  product_into(want2, a.x2, b.x2);
  const auto got1 = restrict_weights_levi(full, 1, k);
  const auto got2 = restrict_weights_levi(full, 2, k);
  rep.mass1 = mass(got1);
  rep.mass2 = mass(got2);
  diff_maps(got1, want1, "piece 1", pair_str, rep.defects);
  diff_maps(got2, want2, "piece 2", pair_str, rep.defects);
  rep.pass = rep.defects.empty();
  return rep;
}

SubgroupReport check_subgroup_restriction(int n, std::int64_t p, std::int64_t bound) {
  if (n < 2) throw DomainError("subgroup restriction needs n >= 2");
  SubgroupReport rep;
  rep.n = n;
  rep.p = p;
  const auto full = build_weil_weights(n, p, bound);
  const auto sub = build_weil_weights(n - 1, p, bound);
  const auto& rs = root_system(full.type);
  const auto& rs_sub = root_system(sub.type);
  auto restrict = [&](const WeightMultiset& x) {
    WeightMultiset out;
    out.rank = rs_sub.rank();
    for (const auto& [mu, m] : x.entries) {
      const auto eps = epsilon_coords(rs, mu);
      out.add(from_epsilon_coords(rs_sub, slice(eps, 1, eps.size())), m);
    }
    return out;
  };
  const std::int64_t up = (p + 1) / 2, down = (p - 1) / 2;
  const auto got1 = restrict(full.x1), got2 = restrict(full.x2);
  rep.mass1 = got1.mass();
  rep.mass2 = got2.mass();
  auto fmt = [](const Weight& w) { return w.str(); };
  diff_maps(got1.entries, combine(up, sub.x1, down, sub.x2).entries, "piece 1", fmt, rep.defects);
  diff_maps(got2.entries, combine(down, sub.x1, up, sub.x2).entries, "piece 2", fmt, rep.defects);
  rep.pass = rep.defects.empty();
  return rep;
}

ParityReport check_parity_separation(const WeilWeights& w) {
  ParityReport rep;
  rep.n = w.n;
  rep.p = w.p;
  rep.expected_parity2 = static_cast<int>((w.n * ((w.p - 1) / 2)) % 2);
  const auto& rs = root_system(w.type);
  auto scan = [&](const WeightMultiset& x, int parity, const char* label) {
    for (const auto& [mu, m] : x.entries) {
      std::int64_t s = 0;
      for (auto e : epsilon_coords(rs, mu)) s += e;
      if (((s % 2) + 2) % 2 != parity)
        rep.defects.push_back(std::string(label) + ": " + mu.str() + " has epsilon sum " + std::to_string(s));
    }
  };
  scan(w.x2, rep.expected_parity2, "piece 2");
  scan(w.x1, 1 - rep.expected_parity2, "piece 1");
  rep.pass = rep.defects.empty();
  return rep;
}

}  // namespace multone
