#pragma once

// Coefficients as they appear in the printed formulation, kept as data for
// the audits. The library builds its matrices independently.

#include <array>
#include <cmath>
#include <random>
#include <set>
#include <utility>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swingcf/swing_carleman.hpp"

namespace swingcf::printed {

namespace ix = swingcf::xi;

// A printed coefficient of the swing system, located in the bilinear blocks.
struct PrintedEntry {
  std::string label;
  std::string block;  // A0, A, D2
  int row;
  int col;
  double printed;
};

inline std::vector<PrintedEntry> printed_entries(const SwingParams& p) {
  const double k2 = p.k2(), s1 = p.sigma1 / p.M, s2 = p.sigma2 * k2, q1 = s1 * s1, q2 = s2 * s2;
  return {
      {"y2 drift, cubic term", "A", ix::y2, ix::y1y1y1, k2},
      {"y2 diffusion W2, cubic term", "D2", ix::y2, ix::y1y1y1, s2},
      {"y2^2 drift, constant", "A0", ix::y2y2, 0, q1 + q2},
      {"y2^2 drift, y1^2 term", "A", ix::y2y2, ix::y1y1, 0.0},
      {"y1 y2^2 drift, y1^3 term", "A", ix::y1y2y2, ix::y1y1y1, q2},
      {"y1 y2^2 drift, y1 term", "A", ix::y1y2y2, ix::y1, q1},
      {"y2^3 drift, y2 term", "A", ix::y2y2y2, ix::y2, -3 * q1},
      {"y2^3 drift, y1^2 y2 term", "A", ix::y2y2y2, ix::y1y1y2, -3 * q2},
      {"y1 y2^2 diffusion W2 in equation form", "D2", ix::y1y2y2, ix::y1y1y2, -2 * s2},
      {"y2^3 diffusion W2 in equation form", "D2", ix::y2y2y2, ix::y1y2y2, -3 * s2},
      {"D2 display, y1 y2^2 row", "D2", ix::y1y2y2, ix::y1y1y2, 2 * s2},
      {"D2 display, y2^3 row", "D2", ix::y2y2y2, ix::y1y2y2, 3 * s2},
      {"A33 display, y1 y2^2 row", "A", ix::y1y2y2, ix::y1y1y1, q2},
      {"A33 display, y2^3 row", "A", ix::y2y2y2, ix::y1y1y2, 3 * q2},
      {"A31 display, y2^3 row", "A", ix::y2y2y2, ix::y2, 3 * q1},
  };
}

inline double lookup(const BilinearSDE<double>& sys, const PrintedEntry& e) {
  if (e.block == "A0") return sys.A0(e.row);
  if (e.block == "A") return sys.A(e.row, e.col);
  if (e.block == "D2") return sys.D[1](e.row, e.col);
  throw std::invalid_argument(e.block);
}

// Displayed order-3 matrices of the scalar theorem, in terms of f, g and their
// derivatives at 0.

struct Derivs {
  std::array<double, 4> f;  // f, f', f'', f'''
  std::array<double, 4> g;
  double s;
};

inline Eigen::Matrix3d printed_A(const Derivs& d) {
  const auto& f = d.f;
  const auto& g = d.g;
  const double s = d.s, s2 = s * s;
  Eigen::Matrix3d A;
  A << f[1], f[2] / 2, f[3] / 6,  //
      2 * f[0] + 2 * s2 * g[0] * g[1], 2 * f[1] + s * g[1] * g[1] + 2 * s2 * g[0] * g[2],
      f[2] + s2 * g[1] * g[2] + 2.0 / 6.0 * s2 * g[0] * g[3],  //
      3 * s2 * g[0] * g[0], 3 * f[0] + 6 * s2 * g[0] * g[1], 3 * f[1] + 3 * s * g[1] * g[1] + 6 * s2 * g[0] * g[2];
  return A;
}

inline Eigen::Matrix3d printed_D(const Derivs& d) {
  const auto& g = d.g;
  const double s = d.s;
  Eigen::Matrix3d D;
  D << s * g[1], s * g[2] / 2, s * g[3] / 6,  //
      2 * s * g[0], 2 * s * g[1], s * g[2],   //
      0, 3 * s * g[0], 3 * s * g[1];
  return D;
}


/// Entries of the displayed scalar matrices that disagree with the derived
/// ones over random coefficient draws.
struct TheoremAudit {
  std::set<std::pair<int, int>> flagged_A, flagged_D;
};

template <class Rng>
TheoremAudit audit_theorem(Rng& rng, int trials) {
  std::uniform_real_distribution<double> u(0.3, 2.0);
  TheoremAudit out;
  const double fact[4] = {1, 1, 2, 6};
  for (int trial = 0; trial < trials; ++trial) {
    Derivs d{{u(rng), u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng), u(rng)}, u(rng) + 0.5};
    std::array<double, 4> a{}, b{};
    for (int k = 0; k < 4; ++k) {
      a[k] = d.f[k] / fact[k];
      b[k] = d.s * d.g[k] / fact[k];
    }
    const auto thm = theorem_matrices(a, b);
    const Eigen::Matrix3d pa = printed_A(d), pd = printed_D(d);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (std::abs(pa(i, j) - thm.A(i, j)) > 1e-9) out.flagged_A.insert({i, j});
        if (std::abs(pd(i, j) - thm.D[0](i, j)) > 1e-9) out.flagged_D.insert({i, j});
      }
  }
  return out;
}

/// Labels for the scalar-theorem entries, keyed by zero-based (row, col).
inline std::string theorem_label(char block, int row, int col) {
  static const char* names[] = {"y", "y^2", "y^3"};
  return std::string("scalar ") + block + " display, " + names[row] + " row, " + names[col] + " column";
}

}  // namespace swingcf::printed
