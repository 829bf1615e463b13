#pragma once

#include "multone/execution.hpp"
#include "multone/root_system.hpp"
#include "multone/weights.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace multone {

bool is_prime(std::int64_t p);

/// Base-p digits of a dominant weight, taken coordinatewise.
struct PAdicExpansion {
  std::int64_t prime = 0;
  std::vector<Weight> layers;  // lambda_0, ..., lambda_k; trailing zero layers trimmed

  Weight reconstruct(std::size_t rank) const;
};

PAdicExpansion p_adic_expand(const Weight& w, std::int64_t p);

struct ClassifierOptions {
  /// Reproduce the printed C_n table exactly (omega_n only for n = 2).
  bool omega_cn_strict = false;
};

/// The set Omega(G) with a rule tag for every entry.
struct OmegaTable {
  SimpleType type;            // as requested
  SimpleType effective_type;  // after B2 -> C2, D3 -> A3, (B, p=2) -> C normalizations
  std::int64_t prime = 0;
  /// normalized[k] = original[coordinate_source[k]]
  std::vector<std::size_t> coordinate_source;
  std::map<Weight, std::vector<std::string>> entries;  // weight -> rule tags (deduplicated set)
  bool boundary = false;      // outside the printed table (B3, p > 2)
  std::vector<std::string> notes;

  bool contains(const Weight& w) const { return entries.count(w) != 0; }
  std::set<Weight> weights() const;
};

OmegaTable omega_table(SimpleType type, std::int64_t p, const ClassifierOptions& opts = {});

/// Maps a weight of `type` to coordinates of the table's effective type.
Weight normalize_weight(const OmegaTable& table, const Weight& w);

struct LayerReport {
  std::size_t level = 0;
  Weight weight;
  bool in_omega = false;
  std::string rule;  // "zero", an Omega rule tag, or "not-in-omega"
};

struct AdjacencyViolation {
  std::size_t level = 0;  // lambda_level triggered the rule on lambda_{level+1} = omega_1
  std::string rule;
};

struct ClassifierVerdict {
  SimpleType type;
  SimpleType effective_type;
  std::int64_t prime = 0;
  Weight omega;             // as given
  Weight normalized_omega;  // in the effective type's coordinates
  PAdicExpansion expansion;
  bool answer = false;
  bool boundary = false;
  std::vector<LayerReport> layer_reports;
  std::vector<AdjacencyViolation> adjacency_violations;
  std::vector<std::string> notes;
};

/// Rule tags for the three adjacency clauses.
inline constexpr const char* kAdjacencyCp2 = "adjacency:C:p=2:omega_n->omega_1";
inline constexpr const char* kAdjacencyG2p2 = "adjacency:G2:p=2:omega_1->omega_1";
inline constexpr const char* kAdjacencyG2p3 = "adjacency:G2:p=3:omega_2->omega_1";

/// Reusable decision procedure for one (type, p).
class Classifier {
 public:
  Classifier(SimpleType type, std::int64_t p, ClassifierOptions opts = {});

  ClassifierVerdict classify(const Weight& omega) const;
  /// Fast path for sweeps: answer only.
  bool answer(const Weight& omega) const;

  const OmegaTable& table() const { return table_; }
  const RootSystemData& effective_root_system() const { return *rs_; }

  /// Adjacency rule that forbids omega_1 right after `layer`, if any.
  std::optional<std::string> adjacency_rule(const Weight& layer) const;

 private:
  OmegaTable table_;
  const RootSystemData* rs_;
  std::optional<Weight> adjacency_trigger_;
  std::string adjacency_tag_;
};

ClassifierVerdict classify(SimpleType type, std::int64_t p, const Weight& omega, const ClassifierOptions& opts = {});

/// Dominant representatives of all pairwise differences of weights in `x` (0 included).
std::set<Weight> difference_dominants(const RootSystemData& rs, const WeightMultiset& x);

struct ObstructionWitness {
  Weight mu1, mu2, mu1p, mu2p;  // mu1 - mu2 = p (mu1p - mu2p) != 0
};

struct ObstructionResult {
  bool found = false;
  std::optional<ObstructionWitness> witness;
};

/// Condition (2) by brute force over difference sets. The witness is the
/// lexicographically least (mu1, mu2, mu1p, mu2p).
ObstructionResult tensor_obstruction(const RootSystemData& rs, std::int64_t p, const WeightMultiset& rho,
                                     const WeightMultiset& psi);

/// Characteristic-p weight set of L(lambda) where it is known, with provenance.
struct ModularWeightSet {
  WeightMultiset weights;
  bool licensed = false;
  std::string basis;  // "zero", "minuscule", "restricted", "table:...", or "proxy:char0"
};

ModularWeightSet modular_weight_set(const RootSystemData& rs, std::int64_t p, const Weight& lambda);

// ---------------------------------------------------------------------------
// Cross-validation

struct Discrepancy {
  std::string kind;   // "hard" or "proxy"
  std::string check;  // "layer-multiplicity", "adjacency", "verdict"
  std::string subject;
  std::string detail;

  friend auto operator<=>(const Discrepancy&, const Discrepancy&) = default;
};

struct AuditReport {
  SimpleType type;
  std::int64_t prime = 0;
  std::size_t points = 0;
  std::size_t yes = 0;
  std::size_t distinct_layers = 0;
  std::size_t distinct_pairs = 0;
  std::map<std::string, std::size_t> rules_fired;      // adjacency tag -> grid points
  std::map<std::string, bool> adjacency_rederived;     // adjacency tag -> obstruction confirmed
  std::vector<Discrepancy> discrepancies;              // sorted

  std::size_t hard_count() const;
};

/// Audits every weight with coordinates in [0, bound].
AuditReport audit_classifier(SimpleType type, std::int64_t p, std::int64_t bound, const ClassifierOptions& opts = {},
                             Execution exec = Execution::parallel);
/// Audits an explicit list of dominant weights.
AuditReport audit_classifier(SimpleType type, std::int64_t p, const std::vector<Weight>& grid,
                             const ClassifierOptions& opts = {}, Execution exec = Execution::parallel);

/// All weights with coordinates in [0, bound], in lexicographic order.
std::vector<Weight> box_grid(std::size_t rank, std::int64_t bound);

/// Conformance grid: coordinates in [0, p^2 - 1]; exhaustive when that box has at
/// most `exhaustive_cap` points, otherwise every weight with at most two nonzero
/// coordinates plus `sample` seeded random points. Sorted and deduplicated.
std::vector<Weight> conformance_grid(SimpleType type, std::int64_t p, std::size_t exhaustive_cap = 1'000'000,
                                     std::size_t sample = 20'000, std::uint64_t seed = 0x5eed);

}  // namespace multone
