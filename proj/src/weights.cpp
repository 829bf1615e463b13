#include "multone/weights.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace multone {

namespace {

void require_dominant(const Weight& lambda) {
  if (!lambda.is_dominant()) throw DomainError("expected a dominant weight, got " + lambda.str());
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("multiplicity overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("multiplicity overflow");
  return r;
}

}  // namespace

std::int64_t WeightMultiset::mass() const {
  std::int64_t s = 0;
  for (const auto& [w, m] : entries) s += m;
  return s;
}

std::int64_t WeightMultiset::multiplicity(const Weight& w) const {
  auto it = entries.find(w);
  return it == entries.end() ? 0 : it->second;
}

void WeightMultiset::add(const Weight& w, std::int64_t m) {
  if (m == 0) return;
  auto& slot = entries[w];
  slot += m;
  if (slot == 0) entries.erase(w);
}

FreudenthalEngine::FreudenthalEngine(const RootSystemData& rs, Weight lambda, std::size_t cap)
    : rs_(rs), lambda_(std::move(lambda)), cap_(cap) {
  require_dominant(lambda_);
  const Weight lr = lambda_ + rs_.rho;
  norm_lambda_rho_ = scaled_inner_product(rs_, lr, lr);
  heap_.push_back({0, lambda_});
  discovered_.emplace(lambda_, std::vector<std::int64_t>(rs_.rank(), 0));
}

std::int64_t FreudenthalEngine::compute(const Weight& mu) const {
  if (mu == lambda_) return 1;
  const Weight mr = mu + rs_.rho;
  const std::int64_t denom = norm_lambda_rho_ - scaled_inner_product(rs_, mr, mr);
  const std::vector<std::int64_t>& depth_mu = discovered_.at(mu);
  const std::size_t n = rs_.rank();
  std::vector<std::int64_t> depth_nu(n);
  std::int64_t num = 0;
  for (const auto& root : rs_.positive_roots) {
    Weight nu = mu;
    depth_nu = depth_mu;
    for (;;) {
      nu += root.omega;
      bool below_lambda = true;
      for (std::size_t j = 0; j < n; ++j) {
        depth_nu[j] -= root.simple[j];
        if (depth_nu[j] < 0) below_lambda = false;
      }
      if (!below_lambda) break;
      auto it = mult_.find(dominant_representative(rs_, nu));
      if (it == mult_.end()) break;  // weight strings are unbroken
      num = checked_add(num, checked_mul(it->second, scaled_inner_product(rs_, nu, root.omega)));
    }
  }
  num = checked_mul(num, 2);
  if (denom <= 0 || num % denom != 0)
    throw std::logic_error("Freudenthal recursion produced a non-integral multiplicity at " + mu.str());
  return num / denom;
}

std::optional<std::pair<Weight, std::int64_t>> FreudenthalEngine::step() {
  if (heap_.empty()) return std::nullopt;
  std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
  Pending cur = std::move(heap_.back());
  heap_.pop_back();

  const std::int64_t m = compute(cur.weight);
  mult_.emplace(cur.weight, m);
  order_.emplace_back(cur.weight, m);

  // Dominant weights below are connected through single positive-root steps.
  for (const auto& root : rs_.positive_roots) {
    Weight next = cur.weight - root.omega;
    if (!next.is_dominant() || discovered_.count(next)) continue;
    if (discovered_.size() >= cap_)
      throw CapExceeded("more than " + std::to_string(cap_) + " dominant weights below " + lambda_.str());
    const std::int64_t d = cur.depth + root.height;
    auto coords = discovered_.at(cur.weight);
    for (std::size_t j = 0; j < coords.size(); ++j) coords[j] += root.simple[j];
    discovered_.emplace(next, std::move(coords));
    heap_.push_back({d, next});
    std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
  }
  return order_.back();
}

void FreudenthalEngine::run() {
  while (step()) {
  }
}

std::int64_t FreudenthalEngine::multiplicity(const Weight& mu) const {
  auto it = mult_.find(dominant_representative(rs_, mu));
  return it == mult_.end() ? 0 : it->second;
}

std::vector<Weight> dominant_weights_below(const RootSystemData& rs, const Weight& lambda, std::size_t cap) {
  require_dominant(lambda);
  // Discovery only; multiplicities are not needed here.
  struct Item {
    std::int64_t depth;
    Weight w;
  };
  std::set<Weight> seen{lambda};
  std::vector<Item> items{{0, lambda}};
  for (std::size_t head = 0; head < items.size(); ++head) {
    const Item cur = items[head];
    for (const auto& root : rs.positive_roots) {
      Weight next = cur.w - root.omega;
      if (!next.is_dominant() || !seen.insert(next).second) continue;
      if (seen.size() > cap)
        throw CapExceeded("more than " + std::to_string(cap) + " dominant weights below " + lambda.str());
      items.push_back({cur.depth + root.height, next});
    }
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return a.depth != b.depth ? a.depth < b.depth : a.w > b.w;
  });
  std::vector<Weight> out;
  out.reserve(items.size());
  for (auto& it : items) out.push_back(std::move(it.w));
  return out;
}

std::int64_t freudenthal_multiplicity(const RootSystemData& rs, const Weight& lambda, const Weight& mu) {
  FreudenthalEngine engine(rs, lambda);
  engine.run();
  return engine.multiplicity(mu);
}

WeightMultiset weight_system(const RootSystemData& rs, const Weight& lambda) {
  FreudenthalEngine engine(rs, lambda);
  engine.run();
  WeightMultiset out;
  out.rank = rs.rank();
  for (const auto& [dom, m] : engine.table())
    for (auto& w : weyl_orbit(rs, dom)) out.entries.emplace(std::move(w), m);
  return out;
}

WeightMultiset weight_set(const RootSystemData& rs, const Weight& lambda) {
  WeightMultiset out;
  out.rank = rs.rank();
  for (const auto& dom : dominant_weights_below(rs, lambda))
    for (auto& w : weyl_orbit(rs, dom)) out.entries.emplace(std::move(w), 1);
  return out;
}

BigInt weyl_dimension(const RootSystemData& rs, const Weight& lambda) {
  require_dominant(lambda);
  const Weight lr = lambda + rs.rho;
  BigInt num = 1, den = 1;
  for (const auto& root : rs.positive_roots) {
    num *= coroot_pairing(root, lr);
    den *= coroot_pairing(root, rs.rho);
  }
  if (num % den != 0) throw std::logic_error("Weyl dimension is not integral");
  return num / den;
}

std::uint64_t weight_count(const RootSystemData& rs, const Weight& lambda) {
  std::uint64_t total = 0;
  for (const auto& dom : dominant_weights_below(rs, lambda)) total += orbit_size(rs, dom);
  return total;
}

bool is_multiplicity_free(const RootSystemData& rs, const Weight& lambda) {
  FreudenthalEngine engine(rs, lambda);
  while (auto next = engine.step())
    if (next->second > 1) return false;
  return true;
}

}  // namespace multone
