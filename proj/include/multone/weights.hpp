#pragma once

#include "multone/root_system.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <optional>
#include <unordered_map>

namespace multone {

using BigInt = boost::multiprecision::cpp_int;

/// Weights with positive multiplicities, ordered canonically.
struct WeightMultiset {
  std::size_t rank = 0;
  std::map<Weight, std::int64_t> entries;

  std::size_t distinct() const { return entries.size(); }
  std::int64_t mass() const;
  std::int64_t multiplicity(const Weight& w) const;
  void add(const Weight& w, std::int64_t m = 1);

  friend bool operator==(const WeightMultiset&, const WeightMultiset&) = default;
};

inline constexpr std::size_t kDefaultDominantCap = 1'000'000;

/// Thrown when the dominance lattice below a weight exceeds the configured cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dominant weights below lambda, ordered by depth (height of lambda - mu), then
/// lexicographically descending.
std::vector<Weight> dominant_weights_below(const RootSystemData& rs, const Weight& lambda,
                                           std::size_t cap = kDefaultDominantCap);

/// Lazy top-down Freudenthal recursion. Dominant weights are discovered and
/// assigned multiplicities in order of depth, so callers may stop early.
class FreudenthalEngine {
 public:
  FreudenthalEngine(const RootSystemData& rs, Weight lambda, std::size_t cap = kDefaultDominantCap);

  /// Process the next dominant weight; returns it with its multiplicity, or
  /// nullopt when every dominant weight has been processed.
  std::optional<std::pair<Weight, std::int64_t>> step();
  void run();

  /// Multiplicity of any weight; requires run() (or enough steps) to have covered it.
  std::int64_t multiplicity(const Weight& mu) const;
  /// Dominant multiplicities in processing order.
  const std::vector<std::pair<Weight, std::int64_t>>& table() const { return order_; }

 private:
  struct Pending {
    std::int64_t depth;
    Weight weight;
    bool operator>(const Pending& o) const {
      return depth != o.depth ? depth > o.depth : weight < o.weight;
    }
  };

  std::int64_t compute(const Weight& mu) const;

  const RootSystemData& rs_;
  Weight lambda_;
  std::size_t cap_;
  std::int64_t norm_lambda_rho_;
  std::vector<Pending> heap_;
  // dominant weight -> simple-root coordinates of lambda - weight
  std::unordered_map<Weight, std::vector<std::int64_t>, WeightHash> discovered_;
  std::unordered_map<Weight, std::int64_t, WeightHash> mult_;
  std::vector<std::pair<Weight, std::int64_t>> order_;
};

std::int64_t freudenthal_multiplicity(const RootSystemData& rs, const Weight& lambda, const Weight& mu);

/// Full weight multiset of the characteristic-zero irreducible V(lambda).
WeightMultiset weight_system(const RootSystemData& rs, const Weight& lambda);
/// Set of weights of V(lambda) with multiplicities dropped (all set to 1).
WeightMultiset weight_set(const RootSystemData& rs, const Weight& lambda);

BigInt weyl_dimension(const RootSystemData& rs, const Weight& lambda);
/// Number of distinct weights of V(lambda), from orbit sizes of dominant weights.
std::uint64_t weight_count(const RootSystemData& rs, const Weight& lambda);

/// True iff every weight space of V(lambda) is one-dimensional. Stops at the
/// first multiplicity above one.
bool is_multiplicity_free(const RootSystemData& rs, const Weight& lambda);

}  // namespace multone
