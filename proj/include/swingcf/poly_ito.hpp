#pragma once

// Itô calculus on polynomial SDEs and the Carleman embedding into a bilinear
// SDE over the reduced Kronecker basis.
//
//   dy_i = f_i(y) dt + sum_phi G_{i,phi}(y) dW_phi
//
// For a basis monomial p(y) the Itô rule gives
//
//   dp = (grad p . f + 1/2 sum_{ij} d2p/dy_i dy_j (G G^T)_{ij}) dt
//        + sum_phi (grad p . G_{:,phi}) dW_phi
//
// Truncating at degree N and sorting terms by degree yields
//
//   dxi = (A0 + A xi) dt + sum_phi (D_phi xi + L_phi) dW_phi.

#include <array>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "swingcf/kron_state.hpp"
#include "swingcf/polynomial.hpp"

namespace swingcf {

template <typename Scalar = double>
struct PolySDE {
  using Poly = Polynomial<Scalar>;

  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<Poly> drift;                  // n entries
  std::vector<std::vector<Poly>> diffusion;  // n x m entries

  PolySDE() = default;
  PolySDE(std::size_t n_, std::size_t m_)
      : n(n_), m(m_), drift(n_, Poly(n_)), diffusion(n_, std::vector<Poly>(m_, Poly(n_))) {
    validate();
  }

  int max_degree() const {
    int d = -1;
    for (const auto& f : drift) d = std::max(d, f.degree());
    for (const auto& row : diffusion)
      for (const auto& g : row) d = std::max(d, g.degree());
    return d;
  }

  void validate() const {
    if (n == 0) throw std::invalid_argument("PolySDE: state dimension must be positive");
    if (m == 0) throw std::invalid_argument("PolySDE: at least one noise channel is required");
    if (drift.size() != n || diffusion.size() != n)
      throw std::invalid_argument("PolySDE: drift/diffusion row count must equal n");
    for (const auto& f : drift)
      if (f.variables() != n) throw std::invalid_argument("PolySDE: drift polynomial arity mismatch");
    for (const auto& row : diffusion) {
      if (row.size() != m) throw std::invalid_argument("PolySDE: diffusion column count must equal m");
      for (const auto& g : row)
        if (g.variables() != n) throw std::invalid_argument("PolySDE: diffusion polynomial arity mismatch");
    }
  }
};

template <typename Scalar = double>
struct BilinearSDE {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  StateBasis basis;
  Vector A0;
  Matrix A;
  std::vector<Matrix> D;
  std::vector<Vector> L;

  BilinearSDE() = default;
  BilinearSDE(StateBasis b, std::size_t channels) : basis(std::move(b)) {
    const auto dim = static_cast<Eigen::Index>(basis.size());
    A0 = Vector::Zero(dim);
    A = Matrix::Zero(dim, dim);
    D.assign(channels, Matrix::Zero(dim, dim));
    L.assign(channels, Vector::Zero(dim));
  }

  Eigen::Index dim() const { return A.rows(); }
  std::size_t channels() const { return D.size(); }

  template <typename Derived>
  Vector drift(const Eigen::MatrixBase<Derived>& xi) const {
    return A0 + A * xi;
  }

  template <typename Derived>
  Vector diffusion(std::size_t channel, const Eigen::MatrixBase<Derived>& xi) const {
    return D[channel] * xi + L[channel];
  }

  bool all_finite() const {
    bool ok = A0.allFinite() && A.allFinite();
    for (std::size_t k = 0; k < D.size(); ++k) ok = ok && D[k].allFinite() && L[k].allFinite();
    return ok;
  }
};

template <typename Scalar = double>
struct ItoDifferential {
  Polynomial<Scalar> drift;
  std::vector<Polynomial<Scalar>> diffusion;
};

/// Exact (untruncated) Itô differential of y^mono under the given SDE.
template <typename Scalar>
ItoDifferential<Scalar> ito_differential(const MultiIndex& mono, const PolySDE<Scalar>& sde) {
  using Poly = Polynomial<Scalar>;
  sde.validate();
  if (mono.size() != sde.n) throw std::invalid_argument("ito_differential: monomial arity mismatch");
  if (mono.degree() == 0) throw std::invalid_argument("ito_differential: degree-0 monomial has zero differential");

  const Poly p = Poly::monomial(mono);
  std::vector<Poly> grad;
  grad.reserve(sde.n);
  for (std::size_t i = 0; i < sde.n; ++i) grad.push_back(p.derivative(i));

  ItoDifferential<Scalar> out{Poly(sde.n), std::vector<Poly>(sde.m, Poly(sde.n))};
  for (std::size_t i = 0; i < sde.n; ++i) {
    if (grad[i].is_zero()) continue;
    out.drift += grad[i] * sde.drift[i];
    for (std::size_t k = 0; k < sde.m; ++k) out.diffusion[k] += grad[i] * sde.diffusion[i][k];
  }

  // Itô correction, 1/2 sum_{ij} p_{ij} (G G^T)_{ij}; the symmetric
  // off-diagonal pairs are folded so the 1/2 only meets even diagonal weights.
  for (std::size_t i = 0; i < sde.n; ++i) {
    for (std::size_t j = i; j < sde.n; ++j) {
      Poly hess = grad[i].derivative(j);
      if (hess.is_zero()) continue;
      Poly cov(sde.n);
      for (std::size_t k = 0; k < sde.m; ++k) cov += sde.diffusion[i][k] * sde.diffusion[j][k];
      if (cov.is_zero()) continue;
      if (i == j) hess *= Scalar(0.5);
      out.drift += hess * cov;
    }
  }
  return out;
}

/// Carleman embedding at order N. Inputs of degree above N are rejected.
template <typename Scalar>
BilinearSDE<Scalar> carleman_embed(const PolySDE<Scalar>& sde, int order) {
  sde.validate();
  if (order < 1) throw std::invalid_argument("carleman_embed: order must be >= 1");
  if (sde.max_degree() > order)
    throw std::invalid_argument("carleman_embed: SDE polynomial degree exceeds the Carleman order");

  BilinearSDE<Scalar> out(enumerate_basis(sde.n, order), sde.m);
  const auto& basis = out.basis;

  auto place = [&](const Polynomial<Scalar>& poly, Eigen::Index row, auto&& on_constant, auto&& on_linear) {
    for (const auto& [mono, coeff] : poly.terms()) {
      if (mono.degree() == 0) {
        on_constant(row, coeff);
        continue;
      }
      auto col = monomial_position(basis, mono);
      if (!col) throw std::logic_error("carleman_embed: truncated differential left the basis");
      on_linear(row, static_cast<Eigen::Index>(*col), coeff);
    }
  };

  for (std::size_t r = 0; r < basis.size(); ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    auto d = ito_differential(basis[r], sde);
    place(
        d.drift.truncated(order), row, [&](Eigen::Index i, Scalar c) { out.A0(i) += c; },
        [&](Eigen::Index i, Eigen::Index j, Scalar c) { out.A(i, j) += c; });
    for (std::size_t k = 0; k < sde.m; ++k) {
      place(
          d.diffusion[k].truncated(order), row, [&](Eigen::Index i, Scalar c) { out.L[k](i) += c; },
          [&](Eigen::Index i, Eigen::Index j, Scalar c) { out.D[k](i, j) += c; });
    }
  }
  return out;
}

/// dy = (a0 + a1 y + a2 y^2 + a3 y^3) dt + (b0 + b1 y + b2 y^2 + b3 y^3) dW.
template <typename Scalar>
PolySDE<Scalar> scalar_cubic_sde(const std::array<Scalar, 4>& a, const std::array<Scalar, 4>& b) {
  PolySDE<Scalar> sde(1, 1);
  for (int k = 0; k < 4; ++k) {
    sde.drift[0].add_term(MultiIndex{k}, a[k]);
    sde.diffusion[0][0].add_term(MultiIndex{k}, b[k]);
  }
  return sde;
}

/// Closed-form order-3 matrices for the scalar cubic SDE, written out entry
/// by entry from the Taylor coefficients a_k = f^(k)(0)/k!, b_k = sigma g^(k)(0)/k!.
template <typename Scalar>
BilinearSDE<Scalar> theorem_matrices(const std::array<Scalar, 4>& a, const std::array<Scalar, 4>& b) {
  const auto [a0, a1, a2, a3] = a;
  const auto [b0, b1, b2, b3] = b;
  BilinearSDE<Scalar> out(enumerate_basis(1, 3), 1);
  out.A0 << a0, b0 * b0, 0;
  out.A << a1, a2, a3,                                              //
      2 * a0 + 2 * b0 * b1, 2 * a1 + b1 * b1 + 2 * b0 * b2, 2 * a2 + 2 * b1 * b2 + 2 * b0 * b3,  //
      3 * b0 * b0, 3 * a0 + 6 * b0 * b1, 3 * a1 + 3 * b1 * b1 + 6 * b0 * b2;
  out.D[0] << b1, b2, b3,  //
      2 * b0, 2 * b1, 2 * b2,  //
      0, 3 * b0, 3 * b1;
  out.L[0] << b0, 0, 0;
  return out;
}

/// Largest absolute entrywise difference between two systems over the same basis.
template <typename Scalar>
Scalar max_abs_difference(const BilinearSDE<Scalar>& x, const BilinearSDE<Scalar>& y) {
  if (x.dim() != y.dim() || x.channels() != y.channels())
    throw std::invalid_argument("max_abs_difference: shape mismatch");
  Scalar d = (x.A0 - y.A0).cwiseAbs().maxCoeff();
  d = std::max(d, (x.A - y.A).cwiseAbs().maxCoeff());
  for (std::size_t k = 0; k < x.channels(); ++k) {
    d = std::max(d, (x.D[k] - y.D[k]).cwiseAbs().maxCoeff());
    d = std::max(d, (x.L[k] - y.L[k]).cwiseAbs().maxCoeff());
  }
  return d;
}

}  // namespace swingcf
