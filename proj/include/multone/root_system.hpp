#pragma once

#include <boost/rational.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace multone {

/// Raised for inputs outside the supported domain (bad rank, E8, wrong type).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Rational = boost::rational<std::int64_t>;

enum class Family : char { A = 'A', B = 'B', C = 'C', D = 'D', E = 'E', F = 'F', G = 'G' };

struct SimpleType {
  Family family;
  int rank;

  /// Throws DomainError if the rank is not allowed for the family.
  void validate() const;
  std::string name() const;  // e.g. "C4"

  static SimpleType parse(const std::string& family, int rank);

  friend bool operator==(const SimpleType&, const SimpleType&) = default;
};

/// Integer coordinates in the fundamental-weight basis.
class Weight {
 public:
  Weight() = default;
  explicit Weight(std::size_t rank) : coords_(rank, 0) {}
  explicit Weight(std::vector<std::int64_t> coords) : coords_(std::move(coords)) {}
  Weight(std::initializer_list<std::int64_t> coords) : coords_(coords) {}

  static Weight fundamental(std::size_t rank, std::size_t i);  // omega_i, 1-based

  std::size_t rank() const { return coords_.size(); }
  std::int64_t operator[](std::size_t i) const { return coords_[i]; }
  std::int64_t& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<std::int64_t>& coords() const { return coords_; }

  bool is_zero() const;
  bool is_dominant() const;

  Weight& operator+=(const Weight& o);
  Weight& operator-=(const Weight& o);
  friend Weight operator+(Weight a, const Weight& b) { return a += b; }
  friend Weight operator-(Weight a, const Weight& b) { return a -= b; }
  friend Weight operator-(Weight a);
  friend Weight operator*(std::int64_t k, Weight a);

  friend bool operator==(const Weight&, const Weight&) = default;
  friend auto operator<=>(const Weight& a, const Weight& b) { return a.coords_ <=> b.coords_; }

  std::string str() const;  // "(a1,...,an)"

 private:
  std::vector<std::int64_t> coords_;
};

struct WeightHash {
  std::size_t operator()(const Weight& w) const noexcept;
};

/// A positive root together with the data needed for pairings.
struct PositiveRoot {
  Weight omega;                         // coordinates in the omega basis
  std::vector<std::int64_t> simple;     // coefficients in simple roots
  std::vector<std::int64_t> coroot;     // coefficients of the coroot in simple coroots
  Rational length2;                     // (alpha, alpha), long roots = 2
  std::int64_t height = 0;
};

struct RootSystemData {
  SimpleType type;
  /// cartan[i][j] = <alpha_j, alpha_i^vee>; column j is alpha_j in the omega basis.
  std::vector<std::vector<std::int64_t>> cartan;
  std::vector<Weight> simple_roots;
  std::vector<PositiveRoot> positive_roots;
  Weight highest_root;
  Weight rho;
  /// Invariant form on the omega basis, (long, long) = 2.
  std::vector<std::vector<Rational>> form;
  /// form scaled by form_scale so that it is integral.
  std::vector<std::vector<std::int64_t>> form_int;
  std::int64_t form_scale = 1;
  std::vector<Rational> simple_length2;
  /// Inverse Cartan matrix: converts omega coordinates to simple-root coordinates.
  std::vector<std::vector<Rational>> cartan_inverse;

  std::size_t rank() const { return cartan.size(); }
};

RootSystemData build_root_system(SimpleType type);

/// Cached, immutable root systems keyed by type. Safe to call from several threads.
const RootSystemData& root_system(SimpleType type);

Weight simple_reflection(const RootSystemData& rs, std::size_t i, const Weight& w);  // i is 1-based
std::vector<Weight> weyl_orbit(const RootSystemData& rs, const Weight& w);
Weight dominant_representative(const RootSystemData& rs, Weight w);
bool is_radical(const RootSystemData& rs, const Weight& w);
std::int64_t a_value(const RootSystemData& rs, const Weight& w);
bool is_minuscule(const RootSystemData& rs, const Weight& w);

std::int64_t coroot_pairing(const PositiveRoot& root, const Weight& w);
Rational inner_product(const RootSystemData& rs, const Weight& x, const Weight& y);
/// (x, y) multiplied by rs.form_scale; always integral.
std::int64_t scaled_inner_product(const RootSystemData& rs, const Weight& x, const Weight& y);

/// Simple-root coordinates of w (rational in general).
std::vector<Rational> root_coordinates(const RootSystemData& rs, const Weight& w);

/// Order of the Weyl group of the Cartan matrix (reducible input allowed).
std::uint64_t weyl_group_order(const std::vector<std::vector<std::int64_t>>& cartan);
std::uint64_t weyl_group_order(const RootSystemData& rs);
/// |W . w| computed from the stabilizer of the dominant representative.
std::uint64_t orbit_size(const RootSystemData& rs, const Weight& w);

/// epsilon coordinates for C_n (and A_1 read as C_1): omega_i = e_1 + ... + e_i.
std::vector<std::int64_t> epsilon_coords(const RootSystemData& rs, const Weight& w);
Weight from_epsilon_coords(const RootSystemData& rs, const std::vector<std::int64_t>& eps);

/// Symplectic group of rank n: C_n, or A_1 when n == 1.
SimpleType symplectic_type(int n);

}  // namespace multone
