#include "swingcf/kron_state.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace swingcf {

MultiIndex::MultiIndex(std::vector<int> exponents) : exponents_(std::move(exponents)) {
  for (int e : exponents_) {
    if (e < 0) throw std::invalid_argument("MultiIndex: negative exponent");
  }
  degree_ = std::accumulate(exponents_.begin(), exponents_.end(), 0);
}

MultiIndex::MultiIndex(std::initializer_list<int> exponents)
    : MultiIndex(std::vector<int>(exponents)) {}

MultiIndex MultiIndex::zero(std::size_t n) { return MultiIndex(std::vector<int>(n, 0)); }

MultiIndex MultiIndex::unit(std::size_t n, std::size_t i) {
  std::vector<int> e(n, 0);
  e.at(i) = 1;
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (size() != other.size()) throw std::invalid_argument("MultiIndex: size mismatch in product");
  std::vector<int> e(exponents_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exponents_[i];
  return MultiIndex(std::move(e));
}

bool MultiIndex::operator<(const MultiIndex& other) const {
  if (degree_ != other.degree_) return degree_ < other.degree_;
  return std::lexicographical_compare(other.exponents_.begin(), other.exponents_.end(),
                                      exponents_.begin(), exponents_.end());
}

std::string MultiIndex::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    if (exponents_[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += "y" + std::to_string(i + 1);
    if (exponents_[i] > 1) out += "^" + std::to_string(exponents_[i]);
  }
  return out.empty() ? "1" : out;
}

std::size_t basis_dimension(std::size_t n, int r) {
  if (n == 0 || r <= 0) throw std::invalid_argument("basis_dimension: n and r must be positive");
  // C(n + r - 1, r) computed incrementally; every partial product is an
  // exact binomial coefficient.
  std::size_t result = 1;
  for (int k = 1; k <= r; ++k) result = result * (n - 1 + static_cast<std::size_t>(k)) / k;
  return result;
}

std::size_t augmented_dimension(std::size_t n, int order) {
  if (n == 0 || order <= 0) throw std::invalid_argument("augmented_dimension: n and N must be positive");
  std::size_t total = 0;
  for (int r = 1; r <= order; ++r) total += basis_dimension(n, r);
  return total;
}

namespace {

void fill_degree(std::size_t var, int remaining, std::vector<int>& current,
                 std::vector<MultiIndex>& out) {
  if (var + 1 == current.size()) {
    current[var] = remaining;
    out.emplace_back(current);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[var] = e;
    fill_degree(var + 1, remaining - e, current, out);
  }
  current[var] = 0;
}

}  // namespace

std::vector<MultiIndex> monomials_of_degree(std::size_t n, int r) {
  if (n == 0 || r < 0) throw std::invalid_argument("monomials_of_degree: invalid arguments");
  std::vector<MultiIndex> out;
  std::vector<int> current(n, 0);
  fill_degree(0, r, current, out);
  return out;
}

StateBasis enumerate_basis(std::size_t n, int order) {
  if (n == 0 || order <= 0) throw std::invalid_argument("enumerate_basis: n and N must be positive");
  StateBasis basis{n, order, {}};
  basis.monomials.reserve(augmented_dimension(n, order));
  for (int r = 1; r <= order; ++r) {
    auto layer = monomials_of_degree(n, r);
    basis.monomials.insert(basis.monomials.end(), layer.begin(), layer.end());
  }
  return basis;
}

std::optional<std::size_t> monomial_position(const StateBasis& basis, const MultiIndex& m) {
  if (m.size() != basis.n) throw std::invalid_argument("monomial_position: length mismatch");
  if (m.degree() == 0 || m.degree() > basis.order) return std::nullopt;
  auto it = std::lower_bound(basis.monomials.begin(), basis.monomials.end(), m);
  if (it == basis.monomials.end() || !(*it == m)) return std::nullopt;
  return static_cast<std::size_t>(it - basis.monomials.begin());
}

}  // namespace swingcf
