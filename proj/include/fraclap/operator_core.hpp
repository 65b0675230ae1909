#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fraclap/gegenbauer.hpp"
#include "fraclap/specfun.hpp"

namespace fraclap {

/// Monomial-basis polynomial; coeffs[k] multiplies x^k.
class Polynomial {
 public:
  /// Coefficients at or below this fraction of the largest one do not count
  /// towards the degree.
  static constexpr double kTrimThreshold = 1e-14;

  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);

  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  /// Degree after trimming; -1 for the zero polynomial.
  int degree() const noexcept;
  double operator()(double x) const noexcept;

 private:
  std::vector<double> coeffs_;
};

/// Normalization constants of the one-dimensional fractional Laplacian.
struct NormConstants {
  double s;
  double c1;                  ///< C_1(s) = 2^{2s} s Gamma(s+1/2) / (sqrt(pi) Gamma(1-s))
  std::optional<double> cs;   ///< C_s = -Gamma(2s-1) sin(pi s)/pi; empty at s = 1/2
  double weighted_prefactor;  ///< (1-2s) C_s = C_1(s)/(2s), finite for every s

  static NormConstants of(SExponent s);
};

/// lambda_j^s c_j. Eigenvalues do not depend on the interval.
GegenbauerCoeffs apply_diagonal(const GegenbauerCoeffs& c);

/// c_j / lambda_j^s.
GegenbauerCoeffs solve_diagonal(const GegenbauerCoeffs& f);

/// L^s_n on (0, 1): the principal-value image of y^{s-1}(1-y)^{s-1} y^n under
/// the kernel sgn(x-y)|x-y|^{-2s}. Degree n-1; zero for n = 0.
Polynomial ln_polynomial(std::size_t n, SExponent s);

/// Image of y^s (1-y)^s y^n on (0, 1) under the fractional Laplacian:
/// (1-2s) C_s [ (s+n) L^s_n - (2s+n) L^s_{n+1} ], a polynomial of degree n.
Polynomial ts_weighted_monomial_image(std::size_t n, SExponent s);

/// Matrix of p -> (-Delta)^s[y^s (1-y)^s p] on (0, 1) in the monomial basis
/// {1, y, ..., y^m}; column n holds the image of y^n. Upper-triangular.
std::vector<std::vector<double>> monomial_operator_matrix(std::size_t m, SExponent s);

/// Monomial coefficients of C_n^{(s+1/2)}(2y-1) for n = 0..m; column n holds
/// the coefficients of the degree-n polynomial, stored as mat[k][n].
std::vector<std::vector<double>> gegenbauer_monomial_matrix(std::size_t m, SExponent s);

/// N^s_{s+n}(x) = sum_k (2s)_k / (s-n+k) x^k / k! for |x| < 1, truncated once
/// a geometric bound on the tail drops below tol.
double n_alpha_series(std::size_t n, SExponent s, double x, double tol = 1e-15);

}  // namespace fraclap
