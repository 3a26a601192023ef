#pragma once

// Continuous-discrete Euler realizations of three swing-state estimators.
// Every step consumes one observation increment dz over [t_k, t_k + dt) and
// reads only the pre-step state.

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "swingcf/poly_ito.hpp"
#include "swingcf/swing_carleman.hpp"
#include "swingcf/swing_model.hpp"

namespace swingcf {

/// Conditional moments of the order-3 augmented state plus the three
/// covariance scalars the reduced filter propagates.
struct CarlemanFilterState {
  AugmentedState m = AugmentedState::Zero();
  double Py1 = 0.0;
  double Py2 = 0.0;
  double Py1y2 = 0.0;

  bool negative_variance() const { return Py1 < 0.0 || Py2 < 0.0; }
};

struct EKFState {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  double P11 = 0.0;
  double P12 = 0.0;
  double P22 = 0.0;

  Eigen::Matrix2d covariance() const {
    Eigen::Matrix2d P;
    P << P11, P12, P12, P22;
    return P;
  }
  double min_eigenvalue() const;
};

struct GenericFilterState {
  Eigen::VectorXd xi_hat;
  Eigen::MatrixXd P;
};

/// Continuous-time EKF covariance rate (dP11, dP22, dP12)/dt.
Eigen::Vector3d ekf_covariance_rate(const EKFState& st, const SwingParams& p);

EKFState ekf_step(const EKFState& st, double dz, double dt, const SwingParams& p);

CarlemanFilterState carleman_filter_step(const CarlemanFilterState& st, double dz, double dt, const SwingParams& p);

/// Kalman-Bucy filter for dxi = (A0 + A xi) dt + sum (D xi + L) dW with a
/// linear observation dz = C xi dt + d(eta). The process-noise term sums the
/// multiplicative contributions of every channel.
GenericFilterState bilinear_kalman_step(const BilinearSDE<double>& sys, const Eigen::RowVectorXd& C, double phi_n,
                                        const GenericFilterState& st, double dz, double dt);

enum class FilterKind { carleman, ekf, generic };

std::string_view to_string(FilterKind kind);
FilterKind parse_filter_kind(std::string_view name);

/// Initial mean and covariance of (y1, y2).
struct FilterInit {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  double Py1 = 0.0;
  double Py2 = 0.0;
  double Py1y2 = 0.0;

  Eigen::Matrix2d covariance() const {
    Eigen::Matrix2d P;
    P << Py1, Py1y2, Py1y2, Py2;
    return P;
  }
};

/// Gaussian-consistent starting state for the reduced Carleman filter.
CarlemanFilterState initial_carleman_state(const FilterInit& init);
EKFState initial_ekf_state(const FilterInit& init);
/// Full 9x9 covariance of the lifted state under a Gaussian (y1, y2).
GenericFilterState initial_generic_state(const FilterInit& init);

struct EstimatePath {
  FilterKind kind = FilterKind::ekf;
  double dt = 0.0;
  Eigen::MatrixXd means;    // rows: y1_hat, y2_hat[, m3..m9]; column k at t_k
  Eigen::Matrix3Xd cov;     // rows: Py1, Py2, Py1y2
  std::vector<int> health;  // 1 when the step carries a negative variance
  long negative_variance_events = 0;
  double min_cov_eigenvalue = 0.0;

  long steps() const { return means.cols() - 1; }
};

EstimatePath run_filter(FilterKind kind, const Eigen::VectorXd& dz, const FilterInit& init, const SwingParams& p,
                        double dt);

/// Fold of bilinear_kalman_step over an observation stream; returns the
/// per-step states including the initial one.
std::vector<GenericFilterState> run_bilinear_filter(const BilinearSDE<double>& sys, const Eigen::RowVectorXd& C,
                                                    double phi_n, const GenericFilterState& init,
                                                    const Eigen::VectorXd& dz, double dt);

}  // namespace swingcf
