#include "swingcf/swing_model.hpp"

#include <cmath>
#include <numbers>

namespace swingcf {

double SwingParams::equilibrium_angle() const {
  const double ratio = Pm / k1();
  if (std::abs(ratio) > 1.0) throw std::domain_error("SwingParams: Pm exceeds the maximum transferable power");
  return std::asin(ratio);
}

void SwingParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!(finite(D) && finite(M) && finite(X) && finite(Et) && finite(V) && finite(Pm) && finite(sigma1) &&
        finite(sigma2) && finite(phi_n)))
    throw std::invalid_argument("SwingParams: non-finite parameter");
  if (M <= 0) throw std::invalid_argument("SwingParams: M must be positive");
  if (X <= 0) throw std::invalid_argument("SwingParams: X must be positive");
  if (phi_n <= 0) throw std::invalid_argument("SwingParams: phi_n must be positive");
  if (D < 0) throw std::invalid_argument("SwingParams: D must be non-negative");
  if (sigma1 < 0 || sigma2 < 0) throw std::invalid_argument("SwingParams: noise intensities must be non-negative");
  if (!finite(k2())) throw std::invalid_argument("SwingParams: derived constants are not finite");
}

GaussianStream::GaussianStream(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32), stream};
  engine_.seed(seq);
}

double GaussianStream::uniform_open() {
  // 53 random bits mapped to (0, 1).
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double GaussianStream::next() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform_open()));
  const double theta = 2.0 * std::numbers::pi * uniform_open();
  cached_ = r * std::sin(theta);
  has_cached_ = true;
  return r * std::cos(theta);
}

long step_count(double dt, double horizon) {
  if (!(dt > 0)) throw std::invalid_argument("step_count: dt must be positive");
  if (!(horizon >= dt)) throw std::invalid_argument("step_count: horizon must be at least dt");
  return static_cast<long>(std::ceil(horizon / dt - 1e-9));
}

long disturbance_step(double dt, double time) {
  if (time < 0) throw std::invalid_argument("Disturbance: time must be non-negative");
  return static_cast<long>(std::ceil(time / dt - 1e-9));
}

Eigen::Vector2d drift(const SwingState& s, const SwingParams& p) {
  return {s(1), -p.k2() * std::sin(s(0)) - p.damping_ratio() * s(1) + p.power_ratio()};
}

Eigen::Matrix2d diffusion(const SwingState& s, const SwingParams& p) {
  Eigen::Matrix2d g;
  g << 0.0, 0.0, p.sigma1 / p.M, -p.sigma2 * p.k2() * std::sin(s(0));
  return g;
}

NoisePath generate_noise(double dt, double horizon, std::uint64_t seed) {
  const long n = step_count(dt, horizon);
  NoisePath noise;
  noise.dt = dt;
  noise.seed = seed;
  noise.dW.resize(2, n);
  noise.dB.resize(n);
  const double scale = std::sqrt(dt);
  GaussianStream process(seed, static_cast<std::uint32_t>(NoiseStream::process));
  GaussianStream observation(seed, static_cast<std::uint32_t>(NoiseStream::observation));
  for (long k = 0; k < n; ++k) {
    noise.dW(0, k) = scale * process.next();
    noise.dW(1, k) = scale * process.next();
    noise.dB(k) = scale * observation.next();
  }
  return noise;
}

StatePath simulate_truth(const SwingParams& p, const SwingState& init, const std::optional<Disturbance>& dist,
                         const NoisePath& noise, std::optional<long> steps) {
  p.validate();
  const long n = steps.value_or(noise.steps());
  if (n > noise.steps()) throw std::invalid_argument("simulate_truth: noise path shorter than requested run");
  if (!init.allFinite()) throw NumericalFailure("simulate_truth: non-finite initial state", 0);

  const long jump_at = dist ? disturbance_step(noise.dt, dist->time) : -1;
  StatePath path;
  path.dt = noise.dt;
  path.y.resize(2, n + 1);
  SwingState y = init;
  for (long k = 0; k <= n; ++k) {
    if (k == jump_at) y(0) += dist->delta_jump;
    path.y.col(k) = y;
    if (k == n) break;
    y += drift(y, p) * noise.dt + diffusion(y, p) * noise.dW.col(k);
    if (!y.allFinite()) throw NumericalFailure("simulate_truth: non-finite state", k + 1);
  }
  return path;
}

Eigen::VectorXd observe(const StatePath& path, const SwingParams& p, const NoisePath& noise) {
  const long n = path.steps();
  if (n > noise.steps()) throw std::invalid_argument("observe: noise path shorter than state path");
  Eigen::VectorXd dz(n);
  const double k1 = p.k1();
  const double obs_scale = std::sqrt(p.phi_n);
  for (long k = 0; k < n; ++k) dz(k) = k1 * std::sin(path.y(0, k)) * path.dt + obs_scale * noise.dB(k);
  return dz;
}

}  // namespace swingcf
