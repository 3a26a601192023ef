#pragma once

// Reduced (redundancy-free) Kronecker-power basis for an n-dimensional state.
//
// The augmented state of order N holds every monomial of total degree 1..N,
// degree-major, then lexicographic with the first variable dominant. For n = 2,
// N = 3 this is (y1, y2, y1^2, y1 y2, y2^2, y1^3, y1^2 y2, y1 y2^2, y2^3).

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace swingcf {

/// Exponent vector of a monomial y_1^{e_1} ... y_n^{e_n}.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);
  MultiIndex(std::initializer_list<int> exponents);

  std::size_t size() const { return exponents_.size(); }
  int degree() const { return degree_; }
  int operator[](std::size_t i) const { return exponents_[i]; }
  const std::vector<int>& exponents() const { return exponents_; }

  static MultiIndex zero(std::size_t n);
  static MultiIndex unit(std::size_t n, std::size_t i);

  MultiIndex operator+(const MultiIndex& other) const;

  // Ordering used by the basis: degree first, then larger leading exponents
  // first (y1^2 < y1 y2 < y2^2).
  bool operator<(const MultiIndex& other) const;
  bool operator==(const MultiIndex& other) const = default;

  std::string to_string() const;

 private:
  std::vector<int> exponents_;
  int degree_ = 0;
};

struct StateBasis {
  std::size_t n = 0;
  int order = 0;
  std::vector<MultiIndex> monomials;

  std::size_t size() const { return monomials.size(); }
  const MultiIndex& operator[](std::size_t i) const { return monomials[i]; }
};

/// C(n + r - 1, r): number of degree-r monomials in n variables.
std::size_t basis_dimension(std::size_t n, int r);

/// Sum of basis_dimension(n, r) for r = 1..N.
std::size_t augmented_dimension(std::size_t n, int order);

/// All degree-r monomials in n variables, in basis order.
std::vector<MultiIndex> monomials_of_degree(std::size_t n, int r);

StateBasis enumerate_basis(std::size_t n, int order);

/// Position of m in the basis; empty when deg(m) == 0 or deg(m) > N.
/// Throws std::invalid_argument on a length mismatch.
std::optional<std::size_t> monomial_position(const StateBasis& basis, const MultiIndex& m);

}  // namespace swingcf
