#include "doctest.h"

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "swingcf/gaussian_moments.hpp"

using namespace swingcf;

namespace {

// Sample mean and standard error of f over n draws.
struct Estimate {
  double mean;
  double se;
};

template <class F>
Estimate monte_carlo(long n, F&& draw) {
  double s = 0.0, s2 = 0.0;
  for (long i = 0; i < n; ++i) {
    const double v = draw();
    s += v;
    s2 += v * v;
  }
  const double mean = s / n;
  return {mean, std::sqrt((s2 / n - mean * mean) / (n - 1))};
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("pairing counts are (2m-1)!!") {
  const int expected[] = {1, 3, 15, 105, 945};
  for (int m = 1; m <= 5; ++m) {
    const auto pairings = enumerate_pairings(2 * m);
    CHECK(pairings.size() == static_cast<std::size_t>(expected[m - 1]));
    CHECK(double_factorial_odd(2 * m) == expected[m - 1]);

    std::set<std::vector<std::pair<int, int>>> distinct;
    for (const auto& pr : pairings) {
      std::vector<int> seen(2 * m, 0);
      for (const auto& [i, j] : pr.pairs) {
        CHECK(i < j);
        ++seen[i];
        ++seen[j];
      }
      for (int c : seen) CHECK(c == 1);
      distinct.insert(pr.pairs);
    }
    CHECK(distinct.size() == pairings.size());
  }
  CHECK_THROWS_AS(enumerate_pairings(5), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_pairings(0), std::invalid_argument);
}

TEST_CASE("pairing order is deterministic") {
  const auto a = enumerate_pairings(6), b = enumerate_pairings(6);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].pairs == b[i].pairs);
  CHECK(a.front().pairs == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}, {4, 5}});
}

TEST_CASE("sixth-order Wick with constant covariance") {
  for (double p : {0.5, 1.0, 2.0, 3.7}) {
    CHECK(wick_central_moment([p](int, int) { return p; }, 6) == doctest::Approx(15 * p * p * p));
    for (int m = 1; m <= 5; ++m)
      CHECK(wick_central_moment([p](int, int) { return p; }, 2 * m) ==
            doctest::Approx(central_even_moment(p, 2 * m)));
  }
}

TEST_CASE("Wick moment vanishes when every product has a zero factor") {
  // Index 0 is uncorrelated with everything, so every pairing contains a zero.
  const auto cov = [](int i, int j) { return (i == 0 || j == 0) ? 0.0 : 1.0; };
  CHECK(wick_central_moment(cov, 6) == 0.0);
}

TEST_CASE("fourth-order Wick against Monte Carlo") {
  std::mt19937_64 rng(20240501);
  Eigen::Matrix4d G;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) G(i, j) = u(rng);
  const Eigen::Matrix4d S = G * G.transpose() + 0.5 * Eigen::Matrix4d::Identity();
  const Eigen::Matrix4d Lc = S.llt().matrixL();

  const double wick = wick_central_moment([&S](int i, int j) { return S(i, j); }, 4);
  CHECK(wick == doctest::Approx(S(0, 1) * S(2, 3) + S(0, 2) * S(1, 3) + S(0, 3) * S(1, 2)).epsilon(1e-14));

  std::normal_distribution<double> n01;
  const auto est = monte_carlo(1'000'000, [&] {
    Eigen::Vector4d z;
    for (int i = 0; i < 4; ++i) z(i) = n01(rng);
    const Eigen::Vector4d x = Lc * z;
    return x.prod();
  });
  MESSAGE("wick ", wick, " mc ", est.mean, " se ", est.se);
  CHECK(std::abs(est.mean - wick) < 3 * est.se);
}

TEST_CASE("central even moments") {
  CHECK(central_even_moment(2.0, 6) == 120.0);
  CHECK(central_even_moment(0.3, 2) == doctest::Approx(0.3));
  CHECK(central_even_moment(1.0, 4) == 3.0);
  CHECK(central_even_moment(1.0, 4) == static_cast<double>(enumerate_pairings(4).size()));
  CHECK_THROWS_AS(central_even_moment(1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(central_even_moment(-1.0, 2), std::invalid_argument);
  CHECK(central_moment(2.0, 3) == 0.0);
  CHECK(central_moment(2.0, 0) == 1.0);
}

TEST_CASE("raw moments") {
  CHECK(raw_moment(6, 0.0, 1.0) == 15.0);
  CHECK(raw_moment(3, 2.0, 0.0) == 8.0);
  CHECK(raw_moment(4, 1.0, 1.0) == 10.0);
  const double y = 0.7, P = 1.3;
  CHECK(raw_moment(6, y, P) ==
        doctest::Approx(15 * P * P * P + 45 * y * y * P * P + 15 * std::pow(y, 4) * P + std::pow(y, 6)));
  CHECK_THROWS_AS(raw_moment(0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(raw_moment(7, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("raw moments follow the binomial expansion of central moments") {
  for (double y : {-1.5, 0.0, 0.4, 2.0})
    for (double P : {0.0, 0.2, 1.0, 3.0})
      for (int k = 1; k <= 6; ++k) {
        double expected = 0.0;
        for (int j = 0; j <= k; ++j) expected += binomial(k, j) * std::pow(y, k - j) * central_moment(P, j);
        CHECK(raw_moment(k, y, P) == doctest::Approx(expected).epsilon(1e-13));
      }
}

TEST_CASE("raw moments against Monte Carlo") {
  const double y = 0.8, P = 0.6;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> dist(y, std::sqrt(P));
  std::vector<double> draws(1'000'000);
  for (auto& v : draws) v = dist(rng);
  for (int k = 1; k <= 6; ++k) {
    std::size_t i = 0;
    const auto est = monte_carlo(static_cast<long>(draws.size()), [&] { return std::pow(draws[i++], k); });
    MESSAGE("k=", k, " exact ", raw_moment(k, y, P), " mc ", est.mean, " se ", est.se);
    CHECK(std::abs(est.mean - raw_moment(k, y, P)) < 3 * est.se);
  }
}

TEST_CASE("multivariate monomial moments") {
  Eigen::Vector2d m(0.3, -1.1);
  Eigen::Matrix2d S;
  S << 0.5, 0.2, 0.2, 0.8;
  CHECK(gaussian_monomial_moment({0, 0}, m, S) == 1.0);
  CHECK(gaussian_monomial_moment({1, 0}, m, S) == doctest::Approx(m(0)));
  CHECK(gaussian_monomial_moment({1, 1}, m, S) == doctest::Approx(m(0) * m(1) + S(0, 1)));
  CHECK(gaussian_monomial_moment({2, 1}, m, S) ==
        doctest::Approx((m(0) * m(0) + S(0, 0)) * m(1) + 2 * m(0) * S(0, 1)));
  for (int k = 1; k <= 6; ++k)
    CHECK(gaussian_monomial_moment({k, 0}, m, S) == doctest::Approx(raw_moment(k, m(0), S(0, 0))));

  // Independent components factor.
  Eigen::Matrix2d D = Eigen::Vector2d(0.5, 0.8).asDiagonal();
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      CHECK(gaussian_monomial_moment({i, j}, m, D) ==
            doctest::Approx(raw_moment(i, m(0), 0.5) * raw_moment(j, m(1), 0.8)));

  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01;
  const Eigen::Matrix2d Lc = S.llt().matrixL();
  const auto est = monte_carlo(1'000'000, [&] {
    const Eigen::Vector2d x = m + Lc * Eigen::Vector2d(n01(rng), n01(rng));
    return x(0) * x(0) * x(1) * x(1) * x(1);
  });
  CHECK(std::abs(est.mean - gaussian_monomial_moment({2, 3}, m, S)) < 3 * est.se);
}
