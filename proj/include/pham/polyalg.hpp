#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pham/closed_forms.hpp"

namespace pham {

using Complex = std::complex<double>;
using Monomial = std::vector<int>;  // exponent multi-index, length n_vars
using CVector = std::vector<Complex>;

/// Multivariate polynomial with complex coefficients. Zero coefficients are
/// never stored.
class SparsePoly {
 public:
  explicit SparsePoly(std::size_t n_vars = 0) : n_vars_(n_vars) {}

  /// Builds a perturbation polynomial and checks it lies in the versal box of
  /// `a`: 0 <= alpha_i <= a_i - 1 and no constant term.
  static SparsePoly versal(const ExponentVector& a, std::map<Monomial, Complex> terms);

  static SparsePoly monomial(std::size_t n_vars, Monomial exps, Complex coeff);

  std::size_t n_vars() const { return n_vars_; }
  const std::map<Monomial, Complex>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Monomial& exps, Complex coeff);
  Complex coefficient(const Monomial& exps) const;

  Complex evaluate(std::span<const Complex> z) const;

  SparsePoly derivative(std::size_t var) const;
  std::vector<SparsePoly> gradient() const;

  bool in_versal_box(const ExponentVector& a) const;
  int degree() const;
  /// Largest index r such that some monomial depends on z_r (0-based), -1 if constant.
  int highest_variable() const;

  SparsePoly& operator+=(const SparsePoly& o);
  SparsePoly& operator-=(const SparsePoly& o);
  SparsePoly& operator*=(Complex s);
  friend SparsePoly operator+(SparsePoly l, const SparsePoly& r) { return l += r; }
  friend SparsePoly operator-(SparsePoly l, const SparsePoly& r) { return l -= r; }
  friend SparsePoly operator*(SparsePoly p, Complex s) { return p *= s; }
  friend SparsePoly operator*(Complex s, SparsePoly p) { return p *= s; }
  friend bool operator==(const SparsePoly&, const SparsePoly&) = default;

 private:
  std::size_t n_vars_;
  std::map<Monomial, Complex> terms_;
};

/// f = sum z_i^{a_i+1} / (a_i+1) when normalized, sum z_i^{a_i+1} otherwise.
class PhamFunction {
 public:
  explicit PhamFunction(ExponentVector a, bool normalized = true)
      : a_(std::move(a)), normalized_(normalized) {}

  const ExponentVector& exponents() const { return a_; }
  bool normalized() const { return normalized_; }
  std::size_t n_vars() const { return a_.size(); }

  Complex evaluate(std::span<const Complex> z) const;
  /// Kept symbolic: for the normalized form each entry is exactly z_i^{a_i}.
  std::vector<SparsePoly> gradient() const;
  CVector gradient_at(std::span<const Complex> z) const;
  /// Diagonal of the Hessian at z.
  CVector hessian_diagonal_at(std::span<const Complex> z) const;
  SparsePoly to_sparse() const;

 private:
  ExponentVector a_;
  bool normalized_;
};

/// det of the matrix of second partial derivatives of p at z.
Complex hessian_det_at(const SparsePoly& p, std::span<const Complex> z);

Eigen::MatrixXcd hessian_at(const SparsePoly& p, std::span<const Complex> z);

/// All roots (with multiplicity) of c_0 + c_1 z + ... + c_d z^d by Aberth-Ehrlich
/// simultaneous iteration (at most 200 sweeps), followed by one Newton polish per root.
/// Coefficients are in ascending order. Throws NonConvergence carrying the
/// worst residual if any root misses |p(r)| <= 1e-12 max|c| max(1,|r|)^d.
CVector univariate_roots(std::span<const Complex> coeffs);

/// Value of an ascending-order univariate polynomial.
Complex horner(std::span<const Complex> coeffs, Complex z);

}  // namespace pham
