#pragma once

// Single-machine-infinite-bus swing dynamics with noisy mechanical power and
// bus voltage:
//
//   d(delta)     = omega dt
//   d(omega)     = (Pm/M - (D/M) omega - k2 sin(delta)) dt
//                  + (sigma1/M) dW1 - sigma2 k2 sin(delta) dW2
//   dz           = k1 sin(delta) dt + d(eta),   var(d eta) = phi_n dt
//
// with k1 = V E / X and k2 = k1 / M.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace swingcf {

struct SwingParams {
  double D = 0.0;       // damping
  double M = 1.0;       // inertia coefficient
  double X = 1.0;       // reactance
  double Et = 1.0;      // internal EMF magnitude
  double V = 1.0;       // infinite-bus voltage
  double Pm = 0.0;      // mechanical power
  double sigma1 = 0.0;  // mechanical-power noise intensity
  double sigma2 = 0.0;  // bus-voltage noise intensity
  double phi_n = 1.0;   // observation noise variance rate

  double k1() const { return V * Et / X; }
  double k2() const { return V * Et / (M * X); }
  double damping_ratio() const { return D / M; }
  double power_ratio() const { return Pm / M; }

  /// Stable equilibrium angle asin(Pm X / (V E)).
  double equilibrium_angle() const;

  /// Throws std::invalid_argument when a parameter is out of range.
  void validate() const;
};

/// (y1, y2) = (rotor angle, rotor speed deviation).
using SwingState = Eigen::Vector2d;

struct Disturbance {
  double time = 0.0;
  double delta_jump = 0.0;
};

/// Thrown when an integrator or filter produces a non-finite value.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, long step)
      : std::runtime_error(what + " at step " + std::to_string(step)), detail_(what), step_(step) {}
  long step() const { return step_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
  long step_;
};

inline constexpr const char* kRngAlgorithm = "mt19937_64/seed_seq(lo,hi,stream)/box-muller";

/// Standard normal draws from mt19937_64. The uniform-to-normal map is
/// spelled out here so output does not depend on the standard library's
/// std::normal_distribution.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint32_t stream);
  double next();

 private:
  double uniform_open();

  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Stream ids for one seed; each consumer owns a disjoint sub-stream.
enum class NoiseStream : std::uint32_t { process = 0, observation = 1 };

struct NoisePath {
  double dt = 0.0;
  std::uint64_t seed = 0;
  Eigen::Matrix2Xd dW;  // column k: (dW1, dW2) over [t_k, t_k + dt)
  Eigen::VectorXd dB;   // unit-intensity observation increments

  long steps() const { return dW.cols(); }
};

struct StatePath {
  double dt = 0.0;
  Eigen::Matrix2Xd y;  // column k is the state at t_k = k dt

  long steps() const { return y.cols() - 1; }
  double time(long k) const { return static_cast<double>(k) * dt; }
};

/// Number of Euler steps covering [0, horizon].
long step_count(double dt, double horizon);

/// Step index at which a disturbance scheduled at `time` fires.
long disturbance_step(double dt, double time);

Eigen::Vector2d drift(const SwingState& s, const SwingParams& p);
Eigen::Matrix2d diffusion(const SwingState& s, const SwingParams& p);

NoisePath generate_noise(double dt, double horizon, std::uint64_t seed);

/// Euler-Maruyama on the exact swing SDE. The disturbance, when present, is
/// added to y1 at the first step with t >= time, before that step is taken;
/// the stored state at that index is the post-jump state.
StatePath simulate_truth(const SwingParams& p, const SwingState& init,
                         const std::optional<Disturbance>& dist, const NoisePath& noise,
                         std::optional<long> steps = std::nullopt);

/// dz_k = k1 sin(y1_k) dt + sqrt(phi_n) dB_k, one entry per step.
Eigen::VectorXd observe(const StatePath& path, const SwingParams& p, const NoisePath& noise);

}  // namespace swingcf
