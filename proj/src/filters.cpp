#include "swingcf/filters.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "swingcf/gaussian_moments.hpp"

namespace swingcf {

double EKFState::min_eigenvalue() const {
  // Closed form for a symmetric 2x2 matrix.
  const double mid = 0.5 * (P11 + P22);
  const double rad = std::hypot(0.5 * (P11 - P22), P12);
  return mid - rad;
}

Eigen::Vector3d ekf_covariance_rate(const EKFState& st, const SwingParams& p) {
  const double k1 = p.k1(), k2 = p.k2(), d = p.damping_ratio();
  const double s1 = p.sigma1 / p.M, s2 = p.sigma2 * k2;
  const double sn = std::sin(st.mean(0)), cs = std::cos(st.mean(0));
  const double h2 = k1 * k1 * cs * cs / p.phi_n;
  return {2 * st.P12 - h2 * st.P11 * st.P11,
          -2 * k2 * st.P12 * cs - 2 * d * st.P22 + s1 * s1 + s2 * s2 * sn * sn - h2 * st.P12 * st.P12,
          st.P22 - k2 * st.P11 * cs - d * st.P12 - h2 * st.P11 * st.P12};
}

EKFState ekf_step(const EKFState& st, double dz, double dt, const SwingParams& p) {
  if (!(dt > 0)) throw std::invalid_argument("ekf_step: dt must be positive");
  const double k1 = p.k1(), k2 = p.k2(), d = p.damping_ratio(), pm = p.power_ratio();
  const double s1 = p.sigma1 / p.M, s2 = p.sigma2 * k2;
  const double a = st.mean(0), b = st.mean(1);
  const double sn = std::sin(a), cs = std::cos(a);
  const double inv_phi = 1.0 / p.phi_n;
  const double innovation = dz - k1 * sn * dt;

  EKFState out;
  out.mean(0) = a + b * dt + k1 * st.P11 * cs * inv_phi * innovation;
  out.mean(1) = b + (-k2 * sn - d * b + pm) * dt + k1 * st.P12 * cs * inv_phi * innovation;

  // Covariance: the Riccati rate split into a propagation congruence and a
  // scalar measurement update. Agrees with the Euler step to first order in
  // dt and keeps P positive semidefinite.
  Eigen::Matrix2d F;
  F << 0.0, 1.0, -k2 * cs, -d;
  const Eigen::Matrix2d Phi = Eigen::Matrix2d::Identity() + F * dt;
  Eigen::Matrix2d P = Phi * st.covariance() * Phi.transpose();
  P(1, 1) += (s1 * s1 + s2 * s2 * sn * sn) * dt;
  const Eigen::Vector2d h(k1 * cs, 0.0);
  const Eigen::Vector2d Ph = P * h;
  P -= Ph * Ph.transpose() / (p.phi_n / dt + h.dot(Ph));
  out.P11 = P(0, 0);
  out.P22 = P(1, 1);
  out.P12 = 0.5 * (P(0, 1) + P(1, 0));

  if (!(out.mean.allFinite() && std::isfinite(out.P11) && std::isfinite(out.P12) && std::isfinite(out.P22)))
    throw std::runtime_error("ekf_step: non-finite state");
  return out;
}

CarlemanFilterState carleman_filter_step(const CarlemanFilterState& st, double dz, double dt, const SwingParams& p) {
  if (!(dt > 0)) throw std::invalid_argument("carleman_filter_step: dt must be positive");
  const double k1 = p.k1(), k2 = p.k2(), d = p.damping_ratio(), pm = p.power_ratio();
  const double q1 = (p.sigma1 / p.M) * (p.sigma1 / p.M);
  const double q2 = (p.sigma2 * k2) * (p.sigma2 * k2);
  const double a = st.m(xi::y1), b = st.m(xi::y2);
  const double P1 = st.Py1, P2 = st.Py2, P12 = st.Py1y2;
  const double a2 = a * a, a3 = a2 * a, a4 = a2 * a2, b2 = b * b, b3 = b2 * b;
  const double P1s = P1 * P1, P12s = P12 * P12;

  // Shared innovation of the cubic observation model, scaled by 1/phi_n.
  const double g = (dz - (k1 * a - k1 / 6 * a3) * dt) / p.phi_n;

  Eigen::Matrix<double, 9, 1> drift, gain;

  drift(0) = b;
  gain(0) = k1 * P1 - k1 / 2 * a2 * P1 - k1 / 2 * P1s;

  drift(1) = pm - k2 * a - d * b + k2 / 2 * a * P1 + k2 / 6 * a3;
  gain(1) = k1 * P12 - k1 / 2 * a2 * P12 - k1 / 2 * P1 * P12;

  drift(2) = 2 * P12 + 2 * a * b;
  gain(2) = 2 * k1 * a * P1 - k1 * a3 * P1 - 5 * k1 / 2 * a * P1s;

  drift(3) = pm * a - k2 * P1 - k2 * a2 - d * P12 - d * a * b + P2 + b2;
  gain(3) = k1 * b * P1 + k1 * a * P12 - k1 / 2 * a2 * b * P1 - k1 / 2 * a3 * P12 - 3 * k1 / 2 * a * P1 * P12 -
            k1 / 2 * b * P1s;

  drift(4) = q1 + 2 * pm * b + q2 * P1 + q2 * a2 - 2 * k2 * P12 - 2 * k2 * a * b - 2 * d * P2 - 2 * d * b2;
  gain(4) = 2 * k1 * b * P12 - k1 * a2 * b * P12 - k1 * b * P1 * P12 - k1 / 2 * a * P12s;

  drift(5) = 3 * b * P1 + 3 * a2 * b + 6 * a * P12;
  gain(5) = 3 * k1 * a2 * P1 + 3 * k1 * P1s - 3 * k1 / 2 * a4 * P1 - 6 * k1 * a2 * P1s - 5 * k1 / 2 * P1s * P1;

  drift(6) = pm * P1 + pm * a2 - 3 * k2 * a * P1 - k2 * a3 - d * b * P1 - d * a2 * b - 2 * d * a * P12 + 2 * a * P2 +
             2 * a * b2 + 4 * b * P12;
  gain(6) = 2 * k1 * a * b * P1 + k1 * a2 * P12 + 3 * k1 * P1 * P12 - k1 * a3 * b * P1 - k1 / 2 * a4 * P12 -
            4 * k1 * a2 * P1 * P12 - 2 * k1 * a * b * P1s - 3 * k1 / 2 * P1s * P12;

  drift(7) = q1 * a + 2 * pm * P12 + 2 * pm * a * b + 3 * q2 * a * P1 + q2 * a3 - 2 * k2 * b * P1 - 2 * k2 * a2 * b -
             4 * k2 * a * P12 - 2 * d * a * P2 - 2 * d * a * b2 - 4 * d * b * P12 + 3 * b * P2 + b3;
  gain(7) = k1 * b2 * P1 + 2 * k1 * a * b * P12 + k1 * P1 * P2 + k1 * P12s - 3 * k1 * a * b * P1 * P12 -
            k1 / 2 * a2 * P1 * P2 - k1 * a2 * P12s - k1 / 2 * b2 * P1s - k1 / 2 * P1s * P2 - 2 * k1 * P1 * P12s;

  drift(8) = 3 * q1 * b + 3 * pm * P2 + 3 * pm * b2 + 3 * q2 * b * P1 + 3 * q2 * a2 * b + 6 * q2 * a * P12 -
             3 * k2 * a * P2 - 3 * k2 * a * b2 - 6 * k2 * b * P12 - 9 * d * b * P2 - 3 * d * b3;
  gain(8) = 3 * k1 * a2 * P12 + 3 * k1 * P2 * P12 - 3 * k1 / 2 * P1 * P12 * P2 - k1 * P12s * P12 -
            3 * k1 / 2 * b2 * P1 * P12 - 3 * k1 / 2 * a * b * P12s - 3 * k1 / 2 * a2 * P2 * P12 -
            3 * k1 / 2 * a2 * b2 * P12;

  // Covariance scalars. The y1 and y1y2 brackets are shared by the
  // observation-correction terms below.
  const double bracket_y1 = k1 * P1 - k1 / 2 * a2 * P1 + k1 / 2 * P1s;
  const double bracket_y1y2 = k1 * P12 - k1 / 2 * a2 * P12 + k1 / 2 * P1 * P12;
  const double inv_phi = 1.0 / p.phi_n;

  const double dP1 = 2 * P12 + 2 * k2 * a * P1s - bracket_y1 * inv_phi;
  const double dP2 = q1 + q2 * P1 + q2 * a2 - 2 * k2 * P12 - 2 * d * P2 - k2 * a * b * P1 - k2 / 3 * a2 * b +
                     k2 * a * P1 * P2 + k2 / 2 * a * P12s - bracket_y1y2 * inv_phi;
  const double dP12 = -k2 * P1 - d * P12 + P2 + 2 * k2 * a * P1 * P12 - k2 / 2 * a2 * P1 - k2 / 6 * a4 -
                      bracket_y1 * bracket_y1y2 * inv_phi;

  CarlemanFilterState out;
  out.m = st.m + drift * dt + gain * g;
  out.Py1 = P1 + dP1 * dt;
  out.Py2 = P2 + dP2 * dt;
  out.Py1y2 = P12 + dP12 * dt;

  for (int i = 0; i < 9; ++i)
    if (!std::isfinite(out.m(i)))
      throw std::runtime_error("carleman_filter_step: non-finite moment update in equation " + std::to_string(i + 1));
  if (!std::isfinite(out.Py1)) throw std::runtime_error("carleman_filter_step: non-finite Py1 update");
  if (!std::isfinite(out.Py2)) throw std::runtime_error("carleman_filter_step: non-finite Py2 update");
  if (!std::isfinite(out.Py1y2)) throw std::runtime_error("carleman_filter_step: non-finite Py1y2 update");
  return out;
}

GenericFilterState bilinear_kalman_step(const BilinearSDE<double>& sys, const Eigen::RowVectorXd& C, double phi_n,
                                        const GenericFilterState& st, double dz, double dt) {
  const Eigen::Index n = sys.dim();
  if (C.size() != n || st.xi_hat.size() != n || st.P.rows() != n || st.P.cols() != n)
    throw std::invalid_argument("bilinear_kalman_step: dimension mismatch");
  if (!(dt > 0)) throw std::invalid_argument("bilinear_kalman_step: dt must be positive");
  if (!(phi_n > 0)) throw std::invalid_argument("bilinear_kalman_step: phi_n must be positive");

  const Eigen::VectorXd& x = st.xi_hat;
  const Eigen::MatrixXd& P = st.P;
  const Eigen::VectorXd PCt = P * C.transpose();
  const double innovation = dz - C.dot(x) * dt;

  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < sys.channels(); ++k) {
    const Eigen::VectorXd Dx = sys.D[k] * x;
    const Eigen::VectorXd& L = sys.L[k];
    Q += L * L.transpose() + L * Dx.transpose() + Dx * L.transpose() + sys.D[k] * P * sys.D[k].transpose() +
         Dx * Dx.transpose();
  }

  GenericFilterState out;
  out.xi_hat = x + sys.drift(x) * dt + PCt * (innovation / phi_n);
  const Eigen::MatrixXd AP = sys.A * P;
  out.P = P + (AP + AP.transpose() + Q - PCt * PCt.transpose() / phi_n) * dt;
  out.P = 0.5 * (out.P + out.P.transpose());
  if (!(out.xi_hat.allFinite() && out.P.allFinite())) throw std::runtime_error("bilinear_kalman_step: non-finite state");
  return out;
}

std::string_view to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::carleman: return "carleman";
    case FilterKind::ekf: return "ekf";
    case FilterKind::generic: return "generic";
  }
  return "unknown";
}

FilterKind parse_filter_kind(std::string_view name) {
  if (name == "carleman") return FilterKind::carleman;
  if (name == "ekf") return FilterKind::ekf;
  if (name == "generic") return FilterKind::generic;
  throw std::invalid_argument("unknown filter '" + std::string(name) + "' (valid: carleman, ekf, generic)");
}

CarlemanFilterState initial_carleman_state(const FilterInit& init) {
  static const StateBasis basis = enumerate_basis(2, 3);
  const Eigen::Matrix2d cov = init.covariance();
  CarlemanFilterState st;
  for (std::size_t i = 0; i < basis.size(); ++i)
    st.m(static_cast<Eigen::Index>(i)) = gaussian_monomial_moment(basis[i], init.mean, cov);
  st.Py1 = init.Py1;
  st.Py2 = init.Py2;
  st.Py1y2 = init.Py1y2;
  return st;
}

EKFState initial_ekf_state(const FilterInit& init) {
  EKFState st;
  st.mean = init.mean;
  st.P11 = init.Py1;
  st.P22 = init.Py2;
  st.P12 = init.Py1y2;
  return st;
}

GenericFilterState initial_generic_state(const FilterInit& init) {
  static const StateBasis basis = enumerate_basis(2, 3);
  const Eigen::Matrix2d cov = init.covariance();
  const auto n = static_cast<Eigen::Index>(basis.size());
  GenericFilterState st;
  st.xi_hat.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) st.xi_hat(i) = gaussian_monomial_moment(basis[i], init.mean, cov);
  st.P.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const MultiIndex prod = basis[i] + basis[j];
      const double c = gaussian_monomial_moment(prod, init.mean, cov) - st.xi_hat(i) * st.xi_hat(j);
      st.P(i, j) = c;
      st.P(j, i) = c;
    }
  }
  return st;
}

namespace {

EstimatePath make_path(FilterKind kind, long steps, double dt, Eigen::Index rows) {
  EstimatePath path;
  path.kind = kind;
  path.dt = dt;
  path.means.resize(rows, steps + 1);
  path.cov.resize(3, steps + 1);
  path.health.assign(static_cast<std::size_t>(steps + 1), 0);
  return path;
}

void rethrow_with_step(const std::exception& e, FilterKind kind, long step) {
  throw NumericalFailure(std::string(to_string(kind)) + " filter: " + e.what(), step);
}

}  // namespace

EstimatePath run_filter(FilterKind kind, const Eigen::VectorXd& dz, const FilterInit& init, const SwingParams& p,
                        double dt) {
  p.validate();
  const long n = dz.size();
  switch (kind) {
    case FilterKind::ekf: {
      auto path = make_path(kind, n, dt, 2);
      EKFState st = initial_ekf_state(init);
      path.min_cov_eigenvalue = st.min_eigenvalue();
      for (long k = 0;; ++k) {
        path.means.col(k) = st.mean;
        path.cov.col(k) << st.P11, st.P22, st.P12;
        const double lam = st.min_eigenvalue();
        path.min_cov_eigenvalue = std::min(path.min_cov_eigenvalue, lam);
        if (lam < -1e-9) {
          path.health[k] = 1;
          ++path.negative_variance_events;
        }
        if (k == n) break;
        try {
          st = ekf_step(st, dz(k), dt, p);
        } catch (const std::exception& e) {
          rethrow_with_step(e, kind, k + 1);
        }
      }
      return path;
    }
    case FilterKind::carleman: {
      auto path = make_path(kind, n, dt, 9);
      CarlemanFilterState st = initial_carleman_state(init);
      path.min_cov_eigenvalue = init.covariance().selfadjointView<Eigen::Lower>().eigenvalues().minCoeff();
      for (long k = 0;; ++k) {
        path.means.col(k) = st.m;
        path.cov.col(k) << st.Py1, st.Py2, st.Py1y2;
        Eigen::Matrix2d P;
        P << st.Py1, st.Py1y2, st.Py1y2, st.Py2;
        path.min_cov_eigenvalue =
            std::min(path.min_cov_eigenvalue, P.selfadjointView<Eigen::Lower>().eigenvalues().minCoeff());
        if (st.negative_variance()) {
          path.health[k] = 1;
          ++path.negative_variance_events;
        }
        if (k == n) break;
        try {
          st = carleman_filter_step(st, dz(k), dt, p);
        } catch (const std::exception& e) {
          rethrow_with_step(e, kind, k + 1);
        }
      }
      return path;
    }
    case FilterKind::generic: {
      const auto sys = build_system<double>(p);
      const Eigen::RowVectorXd C = sys.C;
      const auto bilinear = sys.to_bilinear();
      auto path = make_path(kind, n, dt, 9);
      GenericFilterState st = initial_generic_state(init);
      path.min_cov_eigenvalue = st.P.selfadjointView<Eigen::Lower>().eigenvalues().minCoeff();
      for (long k = 0;; ++k) {
        path.means.col(k) = st.xi_hat;
        path.cov.col(k) << st.P(0, 0), st.P(1, 1), st.P(0, 1);
        path.min_cov_eigenvalue =
            std::min(path.min_cov_eigenvalue, st.P.topLeftCorner<2, 2>().selfadjointView<Eigen::Lower>().eigenvalues().minCoeff());
        if (st.P.diagonal().minCoeff() < 0.0) {
          path.health[k] = 1;
          ++path.negative_variance_events;
        }
        if (k == n) break;
        try {
          st = bilinear_kalman_step(bilinear, C, p.phi_n, st, dz(k), dt);
        } catch (const std::exception& e) {
          rethrow_with_step(e, kind, k + 1);
        }
      }
      return path;
    }
  }
  throw std::logic_error("run_filter: unhandled filter kind");
}

std::vector<GenericFilterState> run_bilinear_filter(const BilinearSDE<double>& sys, const Eigen::RowVectorXd& C,
                                                    double phi_n, const GenericFilterState& init,
                                                    const Eigen::VectorXd& dz, double dt) {
  std::vector<GenericFilterState> out;
  out.reserve(static_cast<std::size_t>(dz.size() + 1));
  out.push_back(init);
  for (Eigen::Index k = 0; k < dz.size(); ++k) {
    try {
      out.push_back(bilinear_kalman_step(sys, C, phi_n, out.back(), dz(k), dt));
    } catch (const std::exception& e) {
      throw NumericalFailure(std::string("generic filter: ") + e.what(), static_cast<long>(k + 1));
    }
  }
  return out;
}

}  // namespace swingcf
