#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "swingcf/kron_state.hpp"

namespace swingcf {

/// Sparse multivariate polynomial over n variables. Terms with an exactly
/// zero coefficient are never stored.
template <typename Scalar = double>
class Polynomial {
 public:
  using Terms = std::map<MultiIndex, Scalar>;

  Polynomial() = default;
  explicit Polynomial(std::size_t n) : n_(n) {}

  static Polynomial constant(std::size_t n, Scalar c) {
    Polynomial p(n);
    p.add_term(MultiIndex::zero(n), c);
    return p;
  }

  static Polynomial monomial(const MultiIndex& m, Scalar c = Scalar(1)) {
    Polynomial p(m.size());
    p.add_term(m, c);
    return p;
  }

  /// The coordinate function y_{i+1}.
  static Polynomial variable(std::size_t n, std::size_t i, Scalar c = Scalar(1)) {
    return monomial(MultiIndex::unit(n, i), c);
  }

  std::size_t variables() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  Scalar coefficient(const MultiIndex& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  int degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }

  void add_term(const MultiIndex& m, Scalar c) {
    if (m.size() != n_) throw std::invalid_argument("Polynomial: monomial has wrong arity");
    if (c == Scalar(0)) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Scalar(0)) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_arity(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    check_arity(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }

  Polynomial& operator*=(Scalar s) {
    if (s == Scalar(0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, Scalar s) { return a *= s; }
  friend Polynomial operator*(Scalar s, Polynomial a) { return a *= s; }
  friend Polynomial operator-(Polynomial a) { return a *= Scalar(-1); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_arity(b);
    Polynomial out(a.n_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(ma + mb, ca * cb);
    return out;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  /// Partial derivative with respect to y_{i+1}.
  Polynomial derivative(std::size_t i) const {
    Polynomial out(n_);
    for (const auto& [m, c] : terms_) {
      const int e = m[i];
      if (e == 0) continue;
      std::vector<int> exps = m.exponents();
      exps[i] -= 1;
      out.add_term(MultiIndex(std::move(exps)), c * Scalar(e));
    }
    return out;
  }

  /// Drops every term of total degree above max_degree.
  Polynomial truncated(int max_degree) const {
    if (max_degree < 0) throw std::invalid_argument("Polynomial::truncated: negative degree");
    Polynomial out(n_);
    for (const auto& [m, c] : terms_)
      if (m.degree() <= max_degree) out.terms_.emplace(m, c);
    return out;
  }

  Scalar evaluate(std::span<const Scalar> y) const {
    if (y.size() != n_) throw std::invalid_argument("Polynomial::evaluate: wrong point dimension");
    Scalar sum(0);
    for (const auto& [m, c] : terms_) {
      Scalar term = c;
      for (std::size_t i = 0; i < n_; ++i)
        for (int k = 0; k < m[i]; ++k) term *= y[i];
      sum += term;
    }
    return sum;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
      if (!out.empty()) out += " + ";
      out += fmt::format("{:.17g}", static_cast<double>(c));
      if (m.degree() > 0) out += "*" + m.to_string();
    }
    return out;
  }

 private:
  void check_arity(const Polynomial& o) const {
    if (o.n_ != n_) throw std::invalid_argument("Polynomial: operands over different variable counts");
  }

  std::size_t n_ = 0;
  Terms terms_;
};

template <typename Scalar>
Polynomial<Scalar> truncate(const Polynomial<Scalar>& p, int max_degree) {
  return p.truncated(max_degree);
}

}  // namespace swingcf
