#include "doctest.h"

#include <array>
#include <cmath>
#include <random>
#include <set>
#include <utility>

#include "printed_coefficients.hpp"
#include "swingcf/poly_ito.hpp"
#include "swingcf/swing_carleman.hpp"

using namespace swingcf;
using namespace swingcf::printed;
using Poly = Polynomial<double>;

namespace {

Poly scalar_poly(std::initializer_list<std::pair<int, double>> terms) {
  Poly p(1);
  for (const auto& [k, c] : terms) p.add_term(MultiIndex{k}, c);
  return p;
}

std::array<double, 4> draw4(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return {u(rng), u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_CASE("polynomial arithmetic") {
  const Poly y = Poly::variable(1, 0);
  const Poly one = Poly::constant(1, 1.0);
  const Poly sq = (y + one) * (y + one);
  CHECK(sq.coefficient(MultiIndex{2}) == 1.0);
  CHECK(sq.coefficient(MultiIndex{1}) == 2.0);
  CHECK(sq.coefficient(MultiIndex{0}) == 1.0);
  CHECK(sq.degree() == 2);
  CHECK((sq - sq).is_zero());
  CHECK((sq - sq).degree() == -1);
  CHECK(sq.derivative(0) == 2.0 * y + 2.0 * one);
  const std::array<double, 1> at{3.0};
  CHECK(sq.evaluate(at) == 16.0);
}

TEST_CASE("truncate") {
  const double b2 = 0.7, b3 = -1.3;
  const Poly p = scalar_poly({{6, b3 * b3}, {5, 2 * b2 * b3}, {3, 1.0}});
  CHECK(truncate(p, 3) == scalar_poly({{3, 1.0}}));
  const Poly low = scalar_poly({{0, 1.0}, {2, -2.0}, {3, 0.5}});
  CHECK(truncate(low, 3) == low);
  CHECK(truncate(truncate(p, 4), 4) == truncate(p, 4));
}

TEST_CASE("ito_differential of y^2 for the scalar cubic SDE") {
  std::mt19937_64 rng(7);
  const auto a = draw4(rng);
  const auto b = draw4(rng);
  const auto sde = scalar_cubic_sde(a, b);
  const auto d = ito_differential(MultiIndex{2}, sde);
  CHECK(d.drift.coefficient(MultiIndex{6}) == doctest::Approx(b[3] * b[3]).epsilon(1e-14));
  const Poly want_diff = scalar_poly({{1, 2 * b[0]}, {2, 2 * b[1]}, {3, 2 * b[2]}, {4, 2 * b[3]}});
  CHECK(d.diffusion.size() == 1);
  for (int k = 0; k <= 6; ++k)
    CHECK(d.diffusion[0].coefficient(MultiIndex{k}) == doctest::Approx(want_diff.coefficient(MultiIndex{k})));

  // Truncating the drift at degree 3 gives the closed-form y^2 evolution.
  const Poly want_drift = scalar_poly({{0, b[0] * b[0]},
                                       {1, 2 * (a[0] + b[0] * b[1])},
                                       {2, b[1] * b[1] + 2 * a[1] + 2 * b[0] * b[2]},
                                       {3, 2 * a[2] + 2 * b[1] * b[2] + 2 * b[0] * b[3]}});
  const Poly got = truncate(d.drift, 3);
  for (int k = 0; k <= 6; ++k)
    CHECK(got.coefficient(MultiIndex{k}) == doctest::Approx(want_drift.coefficient(MultiIndex{k})).epsilon(1e-14));
}

TEST_CASE("ito_differential on the swing SDE") {
  const SwingParams p{0.25, 0.2, 0.25, 1.2, 1.0, 1.0, 0.08, 0.06, 100.0};
  const auto sde = swing_poly_sde<double>(p, 3);
  const auto d = ito_differential(MultiIndex{1, 0}, sde);
  CHECK(d.drift == Poly::variable(2, 1));
  for (const auto& g : d.diffusion) CHECK(g.is_zero());
  CHECK_THROWS_AS(ito_differential(MultiIndex{0, 0}, sde), std::invalid_argument);
}

TEST_CASE("zero diffusion leaves the drift untouched") {
  PolySDE<double> sde(2, 1);
  sde.drift[0] = Poly::variable(2, 1) * Poly::variable(2, 0) + Poly::constant(2, 3.0);
  sde.drift[1] = Poly::variable(2, 0) * -2.0;
  const auto d = ito_differential(MultiIndex{1, 0}, sde);
  CHECK(d.drift == sde.drift[0]);
  CHECK(d.diffusion[0].is_zero());
}

TEST_CASE("ito_differential is linear in the drift and in the first-order diffusion") {
  std::mt19937_64 rng(11);
  const auto a1 = draw4(rng), a2 = draw4(rng), b = draw4(rng), b2 = draw4(rng);
  std::array<double, 4> asum{}, bsum{}, zero{};
  for (int k = 0; k < 4; ++k) {
    asum[k] = a1[k] + a2[k];
    bsum[k] = b[k] + b2[k];
  }
  const MultiIndex m{3};
  const auto d1 = ito_differential(m, scalar_cubic_sde(a1, b));
  const auto d2 = ito_differential(m, scalar_cubic_sde(a2, b));
  const auto d0 = ito_differential(m, scalar_cubic_sde(zero, b));
  const auto ds = ito_differential(m, scalar_cubic_sde(asum, b));
  const Poly resid = ds.drift - d1.drift - d2.drift + d0.drift;
  for (const auto& [mono, c] : resid.terms()) CHECK(std::abs(c) < 1e-12);

  const auto e1 = ito_differential(m, scalar_cubic_sde(zero, b));
  const auto e2 = ito_differential(m, scalar_cubic_sde(zero, b2));
  const auto es = ito_differential(m, scalar_cubic_sde(zero, bsum));
  const Poly dres = es.diffusion[0] - e1.diffusion[0] - e2.diffusion[0];
  for (const auto& [mono, c] : dres.terms()) CHECK(std::abs(c) < 1e-12);
}

TEST_CASE("carleman_embed on the scalar linear SDE") {
  const double a1 = -0.8, b0 = 0.6;
  const auto sys = carleman_embed(scalar_cubic_sde<double>({0, a1, 0, 0}, {b0, 0, 0, 0}), 3);
  Eigen::Vector3d A0;
  A0 << 0, b0 * b0, 0;
  Eigen::Matrix3d A, D;
  A << a1, 0, 0, 0, 2 * a1, 0, 3 * b0 * b0, 0, 3 * a1;
  D << 0, 0, 0, 2 * b0, 0, 0, 0, 3 * b0, 0;
  Eigen::Vector3d L(b0, 0, 0);
  CHECK((sys.A0 - A0).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((sys.A - A).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((sys.D[0] - D).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((sys.L[0] - L).cwiseAbs().maxCoeff() < 1e-15);

  const auto thm = theorem_matrices<double>({0, 1, 0, 0}, {1, 0, 0, 0});
  Eigen::Matrix3d A1;
  A1 << 1, 0, 0, 0, 2, 0, 3, 0, 3;
  CHECK((thm.A - A1).cwiseAbs().maxCoeff() == 0.0);
  CHECK(thm.A0(1) == 1.0);
}

TEST_CASE("theorem_matrices equals carleman_embed on random coefficients") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = draw4(rng), b = draw4(rng);
    const auto embedded = carleman_embed(scalar_cubic_sde(a, b), 3);
    const auto closed = theorem_matrices(a, b);
    CHECK(max_abs_difference(embedded, closed) <= 1e-12);
  }
  const auto z = theorem_matrices<double>({0, 0, 0, 0}, {0, 0, 0, 0});
  CHECK(z.A.isZero(0.0));
  CHECK(z.D[0].isZero(0.0));
  CHECK(z.A0.isZero(0.0));
  CHECK(z.L[0].isZero(0.0));
}

TEST_CASE("carleman_embed rejects inputs above the order") {
  const auto sde = scalar_cubic_sde<double>({0, 1, 0, 1}, {0, 0, 0, 0});
  CHECK_THROWS_AS(carleman_embed(sde, 2), std::invalid_argument);
  CHECK_NOTHROW(carleman_embed(sde, 4));
  CHECK_THROWS_AS(carleman_embed(sde, 0), std::invalid_argument);
}

TEST_CASE("deterministic degeneracy") {
  std::mt19937_64 rng(5);
  const auto a = draw4(rng);
  const auto sys = carleman_embed(scalar_cubic_sde<double>(a, {0, 0, 0, 0}), 3);
  CHECK(sys.D[0].isZero(0.0));
  CHECK(sys.L[0].isZero(0.0));
  // d(y^k)/dt = k y^{k-1} f(y), truncated at degree 3.
  Eigen::Vector3d A0 = Eigen::Vector3d::Zero();
  Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
  for (int k = 1; k <= 3; ++k) {
    for (int j = 0; j < 4; ++j) {
      const int deg = k - 1 + j;
      if (deg == 0) A0(k - 1) += k * a[j];
      else if (deg <= 3) A(k - 1, deg - 1) += k * a[j];
    }
  }
  CHECK((sys.A0 - A0).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((sys.A - A).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("mean ODE of the embedded OU process matches closed-form moments") {
  const double a1 = -1.0, b0 = 0.5, y0 = 1.0;
  const auto sys = carleman_embed(scalar_cubic_sde<double>({0, a1, 0, 0}, {b0, 0, 0, 0}), 3);
  Eigen::VectorXd m(3);
  m << y0, y0 * y0, y0 * y0 * y0;
  const double dt = 1e-4;
  double worst = 0.0;
  for (int k = 1; k <= 10000; ++k) {
    m += sys.drift(m) * dt;
    const double t = k * dt;
    const double mu = y0 * std::exp(a1 * t);
    const double var = b0 * b0 * (std::exp(2 * a1 * t) - 1) / (2 * a1);
    const Eigen::Vector3d exact(mu, mu * mu + var, mu * mu * mu + 3 * mu * var);
    worst = std::max(worst, (m - exact).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-3);
}


TEST_CASE("audit of the displayed theorem matrices") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.3, 2.0);
  std::set<std::pair<int, int>> flagged_A, flagged_D;
  for (int trial = 0; trial < 20; ++trial) {
    Derivs d{{u(rng), u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng), u(rng)}, u(rng) + 0.5};
    const double fact[4] = {1, 1, 2, 6};
    std::array<double, 4> a{}, b{};
    for (int k = 0; k < 4; ++k) {
      a[k] = d.f[k] / fact[k];
      b[k] = d.s * d.g[k] / fact[k];
    }
    const auto thm = theorem_matrices(a, b);
    const auto embedded = carleman_embed(scalar_cubic_sde(a, b), 3);
    CHECK(max_abs_difference(thm, embedded) <= 1e-12);

    const Eigen::Matrix3d pa = printed_A(d), pd = printed_D(d);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (std::abs(pa(i, j) - thm.A(i, j)) > 1e-9) flagged_A.insert({i, j});
        if (std::abs(pd(i, j) - thm.D[0](i, j)) > 1e-9) flagged_D.insert({i, j});
      }
    }
    CHECK(thm.A0(0) == doctest::Approx(d.f[0]));
    CHECK(thm.A0(1) == doctest::Approx(d.s * d.s * d.g[0] * d.g[0]));
    CHECK(thm.L[0](0) == doctest::Approx(d.s * d.g[0]));
  }
  // Only the y^2 and y^3 diagonal entries disagree with the derivation.
  const std::set<std::pair<int, int>> expected{{1, 1}, {2, 2}};
  CHECK(flagged_A == expected);
  CHECK(flagged_D.empty());
}
