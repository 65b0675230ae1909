#pragma once

#include <cstddef>
#include <numbers>

namespace fraclap {

/// Fractional order s of the operator, restricted to the open interval (0, 1).
class SExponent {
 public:
  explicit SExponent(double s);

  double value() const noexcept { return s_; }
  operator double() const noexcept { return s_; }

 private:
  double s_;
};

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// Gamma(a) / Gamma(b) for a, b > 0.
///
/// Small arguments go through a direct quotient. Once max(a, b) exceeds
/// kGammaRatioAsymptoticThreshold both arguments are shifted above the
/// Stirling range and the ratio is formed from the difference of Stirling
/// series, which avoids the cancellation in exp(lgamma(a) - lgamma(b)).
double gamma_ratio(double a, double b);

inline constexpr double kGammaRatioAsymptoticThreshold = 100.0;

/// Gamma(b + delta) / Gamma(b). Same as gamma_ratio, but the offset is taken
/// as given, so no rounding enters through forming b + delta.
double gamma_ratio_offset(double b, double delta);

/// Rising factorial (z)_k = Gamma(z+k) / Gamma(z).
double pochhammer(double z, std::size_t k);

/// lambda_n^s = Gamma(2s+n+1) / n!, eigenvalue of the weighted operator on
/// the Gegenbauer polynomial C_n^{(s+1/2)}.
double eigenvalue_lambda(std::size_t n, SExponent s);

/// mu_n^s = -Gamma(2s+n-1) / n!, eigenvalue of the weighted single-layer
/// operator on C_n^{(s-1/2)} over (-1, 1). Throws DomainError for n = 0 and
/// s <= 1/2; the logarithmic value at s = 1/2 is kLogKernelQ00.
double eigenvalue_mu(std::size_t n, SExponent s);

/// Q_00 of the s = 1/2 single-layer operator on (0, 1): -2 log 2.
inline constexpr double kLogKernelQ00 = -2.0 * std::numbers::ln2;

/// L^2 norm of C_j^{(t+1/2)} under the weight (1-x^2)^t on [-1, 1].
/// Accepts any t > -1/2 so that derivative bases (t = s + k) are covered.
double gegenbauer_norm_h(std::size_t j, double t);

inline double gegenbauer_norm_h(std::size_t j, SExponent s) {
  return gegenbauer_norm_h(j, s.value());
}

}  // namespace fraclap
