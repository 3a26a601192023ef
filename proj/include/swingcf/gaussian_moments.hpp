#pragma once

// Gaussian moment closure: Isserlis/Wick pairings, central and raw moments.

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "swingcf/kron_state.hpp"

namespace swingcf {

/// A perfect matching of {0, ..., 2m-1}; each pair has first < second.
struct Pairing {
  std::vector<std::pair<int, int>> pairs;
};

/// Symmetric covariance lookup over zero-based factor indices.
using PairCovariance = std::function<double(int, int)>;

/// All (2m-1)!! perfect matchings of `order` points. The first element is
/// always paired with each later element in turn, recursively, so the
/// sequence is deterministic.
std::vector<Pairing> enumerate_pairings(int order);

/// (k-1)!! for even k >= 0 (1 when k == 0).
double double_factorial_odd(int k);

/// Sum over pairings of the product of pair covariances.
double wick_central_moment(const PairCovariance& cov, int order);

/// E(y - y_hat)^k for a scalar Gaussian with variance P, k even.
double central_even_moment(double variance, int k);

/// E(y - y_hat)^k for any k >= 0; zero for odd k.
double central_moment(double variance, int k);

/// E y^k for k = 1..6 from the mean and variance of a scalar Gaussian.
double raw_moment(int k, double mean, double variance);

/// E prod_i y_i^{e_i} for a Gaussian vector with the given mean and
/// covariance, by expanding each factor around the mean and applying Wick's
/// theorem to the centred part.
double gaussian_monomial_moment(const MultiIndex& mono, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov);

}  // namespace swingcf
