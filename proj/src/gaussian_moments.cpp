#include "swingcf/gaussian_moments.hpp"

#include <cmath>
#include <stdexcept>

namespace swingcf {

namespace {

void match(std::vector<int>& free, Pairing& current, std::vector<Pairing>& out) {
  if (free.empty()) {
    out.push_back(current);
    return;
  }
  const int first = free.front();
  for (std::size_t j = 1; j < free.size(); ++j) {
    const int partner = free[j];
    std::vector<int> rest;
    rest.reserve(free.size() - 2);
    for (std::size_t k = 1; k < free.size(); ++k)
      if (k != j) rest.push_back(free[k]);
    current.pairs.emplace_back(first, partner);
    match(rest, current, out);
    current.pairs.pop_back();
  }
}

}  // namespace

std::vector<Pairing> enumerate_pairings(int order) {
  if (order < 2 || order % 2 != 0) throw std::invalid_argument("enumerate_pairings: order must be even and >= 2");
  std::vector<int> free(order);
  for (int i = 0; i < order; ++i) free[i] = i;
  std::vector<Pairing> out;
  Pairing current;
  match(free, current, out);
  return out;
}

double double_factorial_odd(int k) {
  if (k < 0 || k % 2 != 0) throw std::invalid_argument("double_factorial_odd: k must be even and non-negative");
  double r = 1.0;
  for (int j = k - 1; j > 1; j -= 2) r *= j;
  return r;
}

double wick_central_moment(const PairCovariance& cov, int order) {
  double total = 0.0;
  for (const auto& pairing : enumerate_pairings(order)) {
    double prod = 1.0;
    for (const auto& [i, j] : pairing.pairs) prod *= cov(i, j);
    total += prod;
  }
  return total;
}

double central_even_moment(double variance, int k) {
  if (k < 2 || k % 2 != 0) throw std::invalid_argument("central_even_moment: order must be even and >= 2");
  if (variance < 0) throw std::invalid_argument("central_even_moment: variance must be non-negative");
  return double_factorial_odd(k) * std::pow(variance, k / 2);
}

double central_moment(double variance, int k) {
  if (k < 0) throw std::invalid_argument("central_moment: negative order");
  if (k == 0) return 1.0;
  if (k % 2 != 0) return 0.0;
  return central_even_moment(variance, k);
}

double raw_moment(int k, double mean, double variance) {
  if (variance < 0) throw std::invalid_argument("raw_moment: variance must be non-negative");
  const double m = mean, P = variance;
  const double m2 = m * m;
  switch (k) {
    case 1: return m;
    case 2: return P + m2;
    case 3: return 3 * m * P + m2 * m;
    case 4: return 3 * P * P + 6 * m2 * P + m2 * m2;
    case 5: return 15 * m * P * P + 10 * m2 * m * P + m2 * m2 * m;
    case 6: return 15 * P * P * P + 45 * m2 * P * P + 15 * m2 * m2 * P + m2 * m2 * m2;
    default: throw std::invalid_argument("raw_moment: order must be in 1..6");
  }
}

double gaussian_monomial_moment(const MultiIndex& mono, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
  const auto n = static_cast<Eigen::Index>(mono.size());
  if (mean.size() != n || cov.rows() != n || cov.cols() != n)
    throw std::invalid_argument("gaussian_monomial_moment: dimension mismatch");

  // Flatten y^e into a list of factor variables, then sum over which factors
  // take their centred part.
  std::vector<int> factor_var;
  for (Eigen::Index i = 0; i < n; ++i)
    for (int k = 0; k < mono[static_cast<std::size_t>(i)]; ++k) factor_var.push_back(static_cast<int>(i));
  const int f = static_cast<int>(factor_var.size());
  if (f > 20) throw std::invalid_argument("gaussian_monomial_moment: degree too large");

  double total = 0.0;
  for (unsigned mask = 0; mask < (1u << f); ++mask) {
    std::vector<int> centred;
    double mean_part = 1.0;
    for (int k = 0; k < f; ++k) {
      if (mask & (1u << k))
        centred.push_back(factor_var[k]);
      else
        mean_part *= mean(factor_var[k]);
    }
    if (centred.size() % 2 != 0) continue;
    double central = 1.0;
    if (!centred.empty()) {
      central = wick_central_moment(
          [&](int a, int b) { return cov(centred[a], centred[b]); }, static_cast<int>(centred.size()));
    }
    total += mean_part * central;
  }
  return total;
}

}  // namespace swingcf
