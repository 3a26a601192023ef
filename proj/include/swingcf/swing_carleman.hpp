#pragma once

// Order-3 Carleman augmentation of the swing SDE over
//
//   xi = (y1, y2, y1^2, y1 y2, y2^2, y1^3, y1^2 y2, y1 y2^2, y2^3)
//
// with sin(y1) replaced by y1 - y1^3/6 in the drift, the diffusion and the
// observation. Block partition sizes are (2, 3, 4).

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swingcf/kron_state.hpp"
#include "swingcf/poly_ito.hpp"
#include "swingcf/swing_model.hpp"

namespace swingcf {

inline constexpr int kSwingAugmentedDim = 9;

template <typename Scalar>
using Vector9 = Eigen::Matrix<Scalar, kSwingAugmentedDim, 1>;
template <typename Scalar>
using Matrix9 = Eigen::Matrix<Scalar, kSwingAugmentedDim, kSwingAugmentedDim>;
template <typename Scalar>
using Row9 = Eigen::Matrix<Scalar, 1, kSwingAugmentedDim>;

using AugmentedState = Vector9<double>;

/// Named positions in the augmented state.
namespace xi {
inline constexpr int y1 = 0, y2 = 1, y1y1 = 2, y1y2 = 3, y2y2 = 4, y1y1y1 = 5, y1y1y2 = 6, y1y2y2 = 7, y2y2y2 = 8;
}

template <typename Scalar = double>
struct SwingCarlemanSystem {
  Vector9<Scalar> A0 = Vector9<Scalar>::Zero();
  Matrix9<Scalar> A = Matrix9<Scalar>::Zero();
  Matrix9<Scalar> D1 = Matrix9<Scalar>::Zero();
  Matrix9<Scalar> D2 = Matrix9<Scalar>::Zero();
  Vector9<Scalar> L1 = Vector9<Scalar>::Zero();
  Vector9<Scalar> L2 = Vector9<Scalar>::Zero();
  Row9<Scalar> C = Row9<Scalar>::Zero();

  BilinearSDE<Scalar> to_bilinear() const {
    BilinearSDE<Scalar> out(enumerate_basis(2, 3), 2);
    out.A0 = A0;
    out.A = A;
    out.D[0] = D1;
    out.D[1] = D2;
    out.L[0] = L1;
    out.L[1] = L2;
    return out;
  }
};

/// Fills every nonzero block of the order-3 swing system.
template <typename Scalar = double>
SwingCarlemanSystem<Scalar> build_system(const SwingParams& p) {
  p.validate();
  const Scalar k1 = p.k1();
  const Scalar k2 = p.k2();
  const Scalar d = p.damping_ratio();
  const Scalar pm = p.power_ratio();
  const Scalar s1 = p.sigma1 / p.M;
  const Scalar s2 = p.sigma2 * p.k2();
  const Scalar q1 = s1 * s1;
  const Scalar q2 = s2 * s2;
  using namespace xi;

  SwingCarlemanSystem<Scalar> sys;
  sys.A0(y2) = pm;
  sys.A0(y2y2) = q1;

  auto& A = sys.A;
  // degree-1 rows
  A(y1, y2) = 1;
  A(y2, y1) = -k2;
  A(y2, y2) = -d;
  A(y2, y1y1y1) = k2 / 6;
  // degree-2 rows
  A(y1y1, y1y2) = 2;
  A(y1y2, y1) = pm;
  A(y1y2, y1y1) = -k2;
  A(y1y2, y1y2) = -d;
  A(y1y2, y2y2) = 1;
  A(y2y2, y2) = 2 * pm;
  A(y2y2, y1y1) = q2;
  A(y2y2, y1y2) = -2 * k2;
  A(y2y2, y2y2) = -2 * d;
  // degree-3 rows
  A(y1y1y1, y1y1y2) = 3;
  A(y1y1y2, y1y1) = pm;
  A(y1y1y2, y1y1y1) = -k2;
  A(y1y1y2, y1y1y2) = -d;
  A(y1y1y2, y1y2y2) = 2;
  A(y1y2y2, y1) = q1;
  A(y1y2y2, y1y2) = 2 * pm;
  A(y1y2y2, y1y1y1) = q2;
  A(y1y2y2, y1y1y2) = -2 * k2;
  A(y1y2y2, y1y2y2) = -2 * d;
  A(y1y2y2, y2y2y2) = 1;
  A(y2y2y2, y2) = 3 * q1;
  A(y2y2y2, y2y2) = 3 * pm;
  A(y2y2y2, y1y1y2) = 3 * q2;
  A(y2y2y2, y1y2y2) = -3 * k2;
  A(y2y2y2, y2y2y2) = -3 * d;

  sys.D1(y1y2, y1) = s1;
  sys.D1(y2y2, y2) = 2 * s1;
  sys.D1(y1y1y2, y1y1) = s1;
  sys.D1(y1y2y2, y1y2) = 2 * s1;
  sys.D1(y2y2y2, y2y2) = 3 * s1;

  sys.D2(y2, y1) = -s2;
  sys.D2(y2, y1y1y1) = s2 / 6;
  sys.D2(y1y2, y1y1) = -s2;
  sys.D2(y2y2, y1y2) = -2 * s2;
  sys.D2(y1y1y2, y1y1y1) = -s2;
  // Signs below follow the Itô derivation (see docs/NOTES.md).
  sys.D2(y1y2y2, y1y1y2) = -2 * s2;
  sys.D2(y2y2y2, y1y2y2) = -3 * s2;

  sys.L1(y2) = s1;

  sys.C(y1) = k1;
  sys.C(y1y1y1) = -k1 / 6;
  return sys;
}

/// Polynomial form of the swing SDE with sin(y1) replaced by its Taylor
/// polynomial of the given odd degree (1 or 3).
template <typename Scalar = double>
PolySDE<Scalar> swing_poly_sde(const SwingParams& p, int sine_degree = 3) {
  if (sine_degree != 1 && sine_degree != 3) throw std::invalid_argument("swing_poly_sde: sine degree must be 1 or 3");
  p.validate();
  using Poly = Polynomial<Scalar>;
  Poly sine = Poly::variable(2, 0);
  if (sine_degree == 3) sine.add_term(MultiIndex{3, 0}, Scalar(-1) / Scalar(6));

  PolySDE<Scalar> sde(2, 2);
  sde.drift[0] = Poly::variable(2, 1);
  sde.drift[1] = Poly::constant(2, Scalar(p.power_ratio())) - Scalar(p.k2()) * sine -
                 Scalar(p.damping_ratio()) * Poly::variable(2, 1);
  sde.diffusion[1][0] = Poly::constant(2, Scalar(p.sigma1 / p.M));
  sde.diffusion[1][1] = Scalar(-p.sigma2 * p.k2()) * sine;
  return sde;
}

template <typename Scalar = double>
Vector9<Scalar> lift(const Eigen::Matrix<Scalar, 2, 1>& s) {
  const Scalar a = s(0), b = s(1);
  Vector9<Scalar> out;
  out << a, b, a * a, a * b, b * b, a * a * a, a * a * b, a * b * b, b * b * b;
  return out;
}

/// Image of the augmented state under y_{component} -> y_{component} + shift,
/// expanded binomially over the basis. Exact on lifted states.
AugmentedState shift_component(const AugmentedState& state, int component, double shift);

struct AugmentedPath {
  double dt = 0.0;
  Eigen::Matrix<double, kSwingAugmentedDim, Eigen::Dynamic> xi;

  long steps() const { return xi.cols() - 1; }
};

/// Euler-Maruyama on the 9-dimensional bilinear SDE, driven by the same
/// (dW1, dW2) increments as the truth simulator.
AugmentedPath simulate_bilinear(const SwingCarlemanSystem<double>& sys, const AugmentedState& xi0,
                                const NoisePath& noise, const std::optional<Disturbance>& dist = std::nullopt,
                                std::optional<long> steps = std::nullopt);

struct Discrepancy {
  std::string block;  // "A0", "A", "D1", "D2", "L1", "L2"
  int row = 0;
  int col = 0;
  double stored = 0.0;
  double oracle = 0.0;
};

/// Entrywise comparison of build_system against carleman_embed of the
/// cubic-truncated swing SDE. Empty when they agree within `tolerance`.
std::vector<Discrepancy> oracle_check(const SwingParams& p, double tolerance = 1e-12);

std::vector<Discrepancy> compare_systems(const BilinearSDE<double>& stored, const BilinearSDE<double>& oracle,
                                         double tolerance);

}  // namespace swingcf
