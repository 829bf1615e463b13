#pragma once

#include "multone/cyclotomic.hpp"
#include "multone/execution.hpp"
#include "multone/finite_sp.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace multone {

/// Conventions for the generator operators on functions F_p^n -> Q(zeta_p).
/// Basis: delta functions, x = (x_1..x_n) at index x_1 + x_2 p + ...
struct WeilCalibration {
  bool legendre_twist = true;     // D_A carries the Legendre symbol of det A
  bool transpose_action = false;  // D_A f(x) = f(A^T x) instead of f(A^-1 x)
  bool upper_unipotent = false;   // Q_B pairs with [[I, sB], [0, I]] instead of [[I, 0], [sB, I]]
  int unipotent_sign = -1;        // s above
  bool fourier_inverse = false;   // F pairs with J^-1 instead of J
  int sign = 1;                   // F scalar: sign * zeta^zeta_power * G^-n
  int zeta_power = 0;

  std::string str() const;
  friend bool operator==(const WeilCalibration&, const WeilCalibration&) = default;
};

/// Search order for the scalar and pairing conventions.
std::vector<WeilCalibration> calibration_candidates(int p);

struct OscillatorGenerator {
  std::string name;
  FpMatrix element;
  Operator op;
};

/// Small generating set (Fourier, one multiplier, generators of GL_n) or, with
/// `complete`, every multiplier (all symmetric B), every GL_n element and the Fourier operator.
std::vector<OscillatorGenerator> oscillator_generators(int n, int p, const WeilCalibration& cal, bool complete = false);

struct WeilOptions {
  std::size_t group_cap = 100'000;
  std::int64_t max_dim = 9;       // p^n
  std::size_t screen_limit = 2000;  // elements used to reject calibrations early
  Execution exec = Execution::parallel;
};

struct CocycleFailure {
  WeilCalibration calibration;
  std::vector<int> word_a, word_b;  // two words for the same element
  std::optional<Cyc> scalar;        // rho(word_a) = scalar * rho(word_b), when proportional
  std::string str() const;
};

class CocycleObstruction : public std::runtime_error {
 public:
  CocycleObstruction(const std::string& what, std::vector<CocycleFailure> f)
      : std::runtime_error(what), failures(std::move(f)) {}
  std::vector<CocycleFailure> failures;
};

struct EdgeCheck {
  std::size_t edges = 0;  // non-tree edges compared
  std::optional<std::pair<int, int>> first_failure;  // (element, generator), least in that order
};

/// Compares rho(s) rho(g) with rho(s g) on every non-tree Cayley edge among the
/// first `limit` atlas elements.
EdgeCheck verify_edges(const GroupAtlas& atlas, const std::vector<Operator>& gen_ops, const std::vector<Operator>& ops,
                       std::size_t limit, Execution exec);

/// rho along the breadth-first tree for the first `limit` atlas elements.
std::vector<Operator> propagate(const GroupAtlas& atlas, const std::vector<Operator>& gen_ops, std::size_t limit);

struct WeilRep {
  int n = 0;
  int p = 0;
  int dim = 0;
  WeilCalibration calibration;
  std::size_t candidates_tried = 0;
  std::vector<CocycleFailure> rejected;  // at most a few, for the report
  std::size_t edges_checked = 0;
  GroupAtlas atlas;
  std::vector<OscillatorGenerator> gens;
  std::vector<Operator> ops;  // per atlas element
  std::vector<int> negate;    // basis index of -x

  const Operator& rho(const FpMatrix& g) const { return ops[static_cast<std::size_t>(atlas.at(g))]; }
};

/// Supported: p odd prime with p^n <= max_dim and |Sp_2n(p)| <= group_cap.
WeilRep build_weil_rep(int n, int p, const WeilOptions& opts = {});

/// Number of complete-formula generators whose operator differs from the built map.
struct GeneratorAudit {
  std::size_t checked = 0;
  std::vector<std::string> mismatches;
};
GeneratorAudit check_formula_generators(const WeilRep& rep);

struct SpotCheck {
  std::size_t products = 0, inverses = 0, conjugates = 0;
  std::size_t product_failures = 0, inverse_failures = 0, conjugate_failures = 0;
  bool pass() const { return product_failures + inverse_failures + conjugate_failures == 0; }
};
SpotCheck spot_check(const WeilRep& rep, std::uint64_t seed, std::size_t products = 1000, std::size_t inverses = 100,
                     std::size_t conjugates = 50);

struct ParitySplit {
  int dim_odd = 0, dim_even = 0;
  bool commutes = true;  // parity commutes with every rho(g)
  std::vector<Cyc> chi_odd, chi_even;  // per atlas element
  std::vector<int> reps;  // one representative index per pair {x, -x}, x != 0
};
ParitySplit parity_split(const WeilRep& rep, Execution exec = Execution::parallel);

/// rho(g) restricted to the odd or even functions, in the basis delta_x -+ delta_-x
/// (plus delta_0 for the even part).
Operator parity_block(const WeilRep& rep, const ParitySplit& split, int element, bool even);

struct CharacterNorms {
  Rational odd_odd, even_even, odd_even;
};
CharacterNorms character_norms(const WeilRep& rep, const ParitySplit& split, Execution exec = Execution::parallel);

/// Sum over the atlas of a(g) conj(b(g)), exact.
Cyc character_pairing_sum(const std::vector<Cyc>& a, const std::vector<Cyc>& b, Execution exec);

struct SimpleSpectrumReport {
  bool found = false;
  int element = -1;
  std::string element_str;
  std::int64_t order = 0;
  std::vector<std::int64_t> char_poly;
  std::vector<std::complex<double>> eig_odd, eig_even;
  double sep_odd = 0, sep_even = 0;
  bool simple_odd = false, simple_even = false;
  bool trace_power_consistent = false;  // eigenvalue multiplicities from traces of powers are 0/1
  bool pass() const { return found && simple_odd && simple_even && trace_power_consistent; }
};
SimpleSpectrumReport check_simple_spectrum(const WeilRep& rep, const ParitySplit& split, double tolerance = 1e-6);

/// <chi_n^i restricted to Sp_2k x Sp_2(n-k), chi_k^l (x) chi_(n-k)^m>.
struct ProductRestrictionReport {
  int n = 0, k = 0, p = 0;
  std::size_t subgroup_order = 0;
  // products[i][c]: i = 0 odd, 1 even; c indexes (odd,odd), (even,even), (odd,even), (even,odd)
  Rational products[2][4];
  bool pass = false;
};
ProductRestrictionReport check_product_restriction(const WeilRep& big, const WeilRep& left, const WeilRep& right,
                              Execution exec = Execution::parallel);

/// Dimension of the space of T with T rho_even(s) = rho_odd(s) T for the small generators,
/// computed in the image of Z[zeta, 1/2p] in F_l for a prime l = 1 mod p. This bounds the
/// dimension over Q(zeta) from above, so zero is exact.
std::size_t intertwiner_dimension(const WeilRep& rep, const ParitySplit& split);

/// Every character value of both pieces is fixed by zeta -> zeta^a for each square a.
bool galois_stable_under_squares(const WeilRep& rep, const ParitySplit& split);

struct BrauerReport {
  int p = 0;
  std::size_t regular_elements = 0;
  int dim_odd = 0, dim_even = 0;
  int sym_odd = 0, sym_even = 0;  // symmetric power degrees
  double max_err_odd = 0, max_err_even = 0;
  std::vector<std::string> mismatches;
  bool pass() const { return mismatches.empty(); }
};
/// Brauer characters of Sym^((p-3)/2) and Sym^((p-1)/2) of the natural SL_2(p) module
/// against the two pieces of the rank-one construction, on p-regular elements.
BrauerReport brauer_compare_sl2(int p, double tolerance = 1e-8, const WeilOptions& opts = {});
BrauerReport brauer_compare_sl2(const WeilRep& rep, double tolerance = 1e-8);

/// Brauer character of Sym^k of the natural module at g in SL_2(p), via eigenvalues in F_{p^2}.
std::complex<double> sym_power_brauer_character(const FpMatrix& g, int k);

}  // namespace multone
