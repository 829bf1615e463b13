#pragma once

#include "multone/weights.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace multone {

inline constexpr std::int64_t kDefaultWeilBound = 2187;  // 3^7

/// A count or identity that must hold exactly did not.
class IdentityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Weight data of the two small modules of Sp_2n in characteristic p.
struct WeilWeights {
  int n = 0;
  std::int64_t p = 0;
  SimpleType type;  // C_n, or A_1 when n == 1
  Weight hw1;       // omega_{n-1} + ((p-3)/2) omega_n
  Weight hw2;       // ((p-1)/2) omega_n
  WeightMultiset x1, x2;  // characteristic-zero weight sets, multiplicity 1 everywhere
  BigInt dim1, dim2;      // characteristic-zero Weyl dimensions, for reference
};

/// (p^n + sign) / 2 as an exact integer.
std::int64_t half_weil_dimension(int n, std::int64_t p, int sign);

/// Highest weights only; no enumeration.
std::pair<Weight, Weight> weil_highest_weights(int n, std::int64_t p);

/// Throws IdentityViolation when a distinct-weight count differs from
/// (p^n -+ 1)/2; DomainError outside the supported range.
WeilWeights build_weil_weights(int n, std::int64_t p, std::int64_t bound = kDefaultWeilBound);

using PairMultiset = std::map<std::pair<Weight, Weight>, std::int64_t>;

/// Splits epsilon coordinates into the first k and the last n - k.
PairMultiset restrict_weights_levi(const WeilWeights& w, int which, int k);

struct BranchingReport {
  int n = 0, k = 0;
  std::int64_t p = 0;
  bool pass = true;
  std::int64_t mass1 = 0, mass2 = 0;
  std::vector<std::string> defects;
};

/// Compares both Levi restrictions with the products predicted from ranks k and n - k.
BranchingReport check_branching_formulas(int n, std::int64_t p, int k, std::int64_t bound = kDefaultWeilBound);

struct SubgroupReport {
  int n = 0;
  std::int64_t p = 0;
  bool pass = true;
  std::int64_t mass1 = 0, mass2 = 0;
  std::vector<std::string> defects;
};

/// Restriction to the rank n - 1 subgroup on the last n - 1 epsilon coordinates.
SubgroupReport check_subgroup_restriction(int n, std::int64_t p, std::int64_t bound = kDefaultWeilBound);

struct ParityReport {
  int n = 0;
  std::int64_t p = 0;
  bool pass = true;
  int expected_parity2 = 0;  // n (p-1)/2 mod 2
  std::vector<std::string> defects;
};

/// Epsilon coordinate sums: even-part weights have parity n (p-1)/2, the other part the opposite.
ParityReport check_parity_separation(const WeilWeights& w);

}  // namespace multone
