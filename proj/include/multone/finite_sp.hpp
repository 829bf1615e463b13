#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace multone {

/// Square matrix over F_p, row-major, entries in [0, p).
class FpMatrix {
 public:
  FpMatrix() = default;
  FpMatrix(int size, int p);  // zero

  static FpMatrix identity(int size, int p);
  static FpMatrix from_rows(int p, const std::vector<std::vector<std::int64_t>>& rows);
  /// Standard form matrix [[0, I], [-I, 0]] of size 2n.
  static FpMatrix standard_form(int n, int p);

  int size() const { return size_; }
  int prime() const { return p_; }
  int operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * size_ + j)]; }
  void set(int i, int j, std::int64_t v);

  friend FpMatrix operator*(const FpMatrix& x, const FpMatrix& y);
  friend bool operator==(const FpMatrix&, const FpMatrix&) = default;

  FpMatrix transpose() const;
  std::optional<FpMatrix> inverse() const;
  std::int64_t det() const;
  FpMatrix pow(std::int64_t e) const;
  bool is_identity() const;
  /// M^T J M == J for the standard form J.
  bool is_symplectic() const;
  /// Multiplicative order (throws past `cap`).
  std::int64_t order(std::int64_t cap = 1'000'000) const;

  /// Base-p encoding of the entries; requires p^(size^2) < 2^64.
  std::uint64_t key() const;
  std::string str() const;

  /// Characteristic polynomial det(tI - M), coefficients low to high, monic.
  std::vector<std::int64_t> char_poly() const;

 private:
  int size_ = 0;
  int p_ = 0;
  std::vector<int> a_;
};

/// Irreducibility of a monic polynomial over F_p (coefficients low to high).
bool poly_irreducible_mod_p(const std::vector<std::int64_t>& f, std::int64_t p);

/// Order of Sp_2n(p).
std::uint64_t symplectic_group_order(int n, std::int64_t p);

/// Elements reached from the identity by left multiplication with generators,
/// in breadth-first order.
struct GroupAtlas {
  int n = 0;  // matrices are 2n x 2n
  int p = 0;
  std::vector<FpMatrix> gens;
  std::vector<FpMatrix> elements;
  std::vector<int> parent;   // -1 for the identity
  std::vector<int> via_gen;  // elements[i] = gens[via_gen[i]] * elements[parent[i]]
  std::unordered_map<std::uint64_t, int> index;

  std::size_t size() const { return elements.size(); }
  std::optional<int> find(const FpMatrix& m) const;
  int at(const FpMatrix& m) const;  // throws if absent
  /// Generator indices, leftmost first: elements[i] = gens[w[0]] * ... * gens[w.back()].
  std::vector<int> word(int i) const;
};

class GroupCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws std::invalid_argument if a generator is not symplectic.
GroupAtlas enumerate_group(int n, int p, const std::vector<FpMatrix>& gens, std::size_t cap = 100'000);

}  // namespace multone
