#include "swingcf/swing_carleman.hpp"

#include <cmath>

namespace swingcf {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

AugmentedState shift_component(const AugmentedState& state, int component, double shift) {
  static const StateBasis basis = enumerate_basis(2, 3);
  AugmentedState out = AugmentedState::Zero();
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const auto& mono = basis[r];
    const int e = mono[component];
    for (int j = 0; j <= e; ++j) {
      std::vector<int> exps = mono.exponents();
      exps[component] = j;
      const MultiIndex lower(std::move(exps));
      const double weight = binomial(e, j) * std::pow(shift, e - j);
      if (lower.degree() == 0) {
        out(static_cast<Eigen::Index>(r)) += weight;
      } else {
        out(static_cast<Eigen::Index>(r)) += weight * state(static_cast<Eigen::Index>(*monomial_position(basis, lower)));
      }
    }
  }
  return out;
}

AugmentedPath simulate_bilinear(const SwingCarlemanSystem<double>& sys, const AugmentedState& xi0,
                                const NoisePath& noise, const std::optional<Disturbance>& dist,
                                std::optional<long> steps) {
  const long n = steps.value_or(noise.steps());
  if (n > noise.steps()) throw std::invalid_argument("simulate_bilinear: noise path shorter than requested run");
  if (!xi0.allFinite()) throw NumericalFailure("simulate_bilinear: non-finite initial state", 0);

  const long jump_at = dist ? disturbance_step(noise.dt, dist->time) : -1;
  AugmentedPath path;
  path.dt = noise.dt;
  path.xi.resize(kSwingAugmentedDim, n + 1);
  AugmentedState x = xi0;
  for (long k = 0; k <= n; ++k) {
    if (k == jump_at) x = shift_component(x, 0, dist->delta_jump);
    path.xi.col(k) = x;
    if (k == n) break;
    const double dw1 = noise.dW(0, k), dw2 = noise.dW(1, k);
    AugmentedState next = x + (sys.A0 + sys.A * x) * noise.dt + (sys.D1 * x + sys.L1) * dw1 + (sys.D2 * x + sys.L2) * dw2;
    x = next;
    if (!x.allFinite()) throw NumericalFailure("simulate_bilinear: non-finite augmented state", k + 1);
  }
  return path;
}

std::vector<Discrepancy> compare_systems(const BilinearSDE<double>& stored, const BilinearSDE<double>& oracle,
                                         double tolerance) {
  if (stored.dim() != oracle.dim() || stored.channels() != oracle.channels())
    throw std::invalid_argument("compare_systems: shape mismatch");
  std::vector<Discrepancy> out;
  auto scan_vec = [&](const std::string& name, const Eigen::VectorXd& s, const Eigen::VectorXd& o) {
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (std::abs(s(i) - o(i)) > tolerance) out.push_back({name, static_cast<int>(i), 0, s(i), o(i)});
  };
  auto scan_mat = [&](const std::string& name, const Eigen::MatrixXd& s, const Eigen::MatrixXd& o) {
    for (Eigen::Index i = 0; i < s.rows(); ++i)
      for (Eigen::Index j = 0; j < s.cols(); ++j)
        if (std::abs(s(i, j) - o(i, j)) > tolerance)
          out.push_back({name, static_cast<int>(i), static_cast<int>(j), s(i, j), o(i, j)});
  };
  scan_vec("A0", stored.A0, oracle.A0);
  scan_mat("A", stored.A, oracle.A);
  for (std::size_t k = 0; k < stored.channels(); ++k) {
    scan_mat("D" + std::to_string(k + 1), stored.D[k], oracle.D[k]);
    scan_vec("L" + std::to_string(k + 1), stored.L[k], oracle.L[k]);
  }
  return out;
}

std::vector<Discrepancy> oracle_check(const SwingParams& p, double tolerance) {
  const auto stored = build_system<double>(p).to_bilinear();
  const auto oracle = carleman_embed(swing_poly_sde<double>(p, 3), 3);
  return compare_systems(stored, oracle, tolerance);
}

}  // namespace swingcf
