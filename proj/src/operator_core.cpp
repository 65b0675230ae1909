#include "fraclap/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fraclap/errors.hpp"

namespace fraclap {
namespace {

SExponent fractional_order_of(const GegenbauerCoeffs& c) {
  if (!(c.s > 0.0 && c.s < 1.0)) {
    throw DomainError("weighted operator needs a basis with fractional order in (0, 1)");
  }
  return SExponent(c.s);
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

int Polynomial::degree() const noexcept {
  double scale = 0.0;
  for (double c : coeffs_) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return -1;
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    if (std::abs(coeffs_[k]) > kTrimThreshold * scale) return static_cast<int>(k);
  }
  return -1;
}

double Polynomial::operator()(double x) const noexcept {
  double acc = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * x + coeffs_[k];
  return acc;
}

NormConstants NormConstants::of(SExponent s) {
  const double sv = s.value();
  NormConstants nc{};
  nc.s = sv;
  nc.c1 = std::exp2(2.0 * sv) * sv * std::tgamma(sv + 0.5) /
          (std::sqrt(std::numbers::pi) * std::tgamma(1.0 - sv));
  nc.weighted_prefactor = nc.c1 / (2.0 * sv);
  if (sv != 0.5) nc.cs = -std::tgamma(2.0 * sv - 1.0) * std::sin(std::numbers::pi * sv) / std::numbers::pi;
  return nc;
}

GegenbauerCoeffs apply_diagonal(const GegenbauerCoeffs& c) {
  const SExponent s = fractional_order_of(c);
  GegenbauerCoeffs out = c;
  for (std::size_t j = 0; j < out.size(); ++j) out.coeffs[j] *= eigenvalue_lambda(j, s);
  return out;
}

GegenbauerCoeffs solve_diagonal(const GegenbauerCoeffs& f) {
  const SExponent s = fractional_order_of(f);
  GegenbauerCoeffs out = f;
  for (std::size_t j = 0; j < out.size(); ++j) out.coeffs[j] /= eigenvalue_lambda(j, s);
  return out;
}

Polynomial ln_polynomial(std::size_t n, SExponent s) {
  if (n == 0) return Polynomial(std::vector<double>{0.0});
  const double sv = s.value();
  const double gs = std::tgamma(sv);
  std::vector<double> coeffs(n);
  double rising_over_fact = 1.0;  // (2s)_k / k!
  for (std::size_t k = 0; k < n; ++k) {
    const double m = static_cast<double>(n - k);  // n - k >= 1
    coeffs[k] = gs * rising_over_fact * gamma_ratio(m + 1.0 - sv, m) / (sv - m);
    rising_over_fact *= (2.0 * sv + static_cast<double>(k)) / static_cast<double>(k + 1);
  }
  return Polynomial(std::move(coeffs));
}

Polynomial ts_weighted_monomial_image(std::size_t n, SExponent s) {
  // (s+n) L_n - (2s+n) L_{n+1} collapsed term by term; the two L coefficients
  // nearly cancel, so the combined form is used directly.
  const double sv = s.value();
  const double scale = NormConstants::of(s).weighted_prefactor * std::tgamma(sv + 1.0);
  std::vector<double> p(n + 1, 0.0);
  double rising_over_fact = 2.0 * sv;  // (2s)_{k+1} / k!
  for (std::size_t k = 0; k <= n; ++k) {
    const double m = static_cast<double>(n - k);
    p[k] = scale * rising_over_fact * gamma_ratio(m + 1.0 - sv, m + 1.0) / (sv - m);
    rising_over_fact *= (2.0 * sv + static_cast<double>(k) + 1.0) / static_cast<double>(k + 1);
  }
  return Polynomial(std::move(p));
}

std::vector<std::vector<double>> monomial_operator_matrix(std::size_t m, SExponent s) {
  std::vector<std::vector<double>> mat(m + 1, std::vector<double>(m + 1, 0.0));
  for (std::size_t n = 0; n <= m; ++n) {
    const auto col = ts_weighted_monomial_image(n, s).coeffs();
    for (std::size_t k = 0; k < col.size(); ++k) mat[k][n] = col[k];
  }
  return mat;
}

std::vector<std::vector<double>> gegenbauer_monomial_matrix(std::size_t m, SExponent s) {
  const double alpha = s.value() + 0.5;
  std::vector<std::vector<double>> polys;  // polys[n][k]
  polys.push_back({1.0});
  if (m >= 1) polys.push_back({-2.0 * alpha, 4.0 * alpha});
  for (std::size_t n = 1; n < m; ++n) {
    const double nd = static_cast<double>(n);
    // (n+1) C_{n+1} = 2(n+alpha) t C_n - (n+2alpha-1) C_{n-1}, t = 2y - 1
    std::vector<double> next(n + 2, 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
      next[k + 1] += 4.0 * (nd + alpha) * polys[n][k];
      next[k] -= 2.0 * (nd + alpha) * polys[n][k];
    }
    for (std::size_t k = 0; k < n; ++k) next[k] -= (nd + 2.0 * alpha - 1.0) * polys[n - 1][k];
    for (double& v : next) v /= nd + 1.0;
    polys.push_back(std::move(next));
  }
  std::vector<std::vector<double>> mat(m + 1, std::vector<double>(m + 1, 0.0));
  for (std::size_t n = 0; n <= m; ++n) {
    for (std::size_t k = 0; k <= n; ++k) mat[k][n] = polys[n][k];
  }
  return mat;
}

double n_alpha_series(std::size_t n, SExponent s, double x, double tol) {
  if (!(std::abs(x) < 1.0)) throw DomainError("n_alpha_series: requires |x| < 1");
  constexpr std::size_t kMaxTerms = 1'000'000;
  const double sv = s.value();
  const double nd = static_cast<double>(n);
  const double ax = std::abs(x);

  double term = 1.0;  // (2s)_k x^k / k!
  double sum = 0.0;
  for (std::size_t k = 0; k < kMaxTerms; ++k) {
    const double kd = static_cast<double>(k);
    sum += term / (sv - nd + kd);
    term *= (2.0 * sv + kd) / (kd + 1.0) * x;

    // Past k = n the denominators grow, and the term ratio is bounded by
    // |x| max(1, (2s+k+1)/(k+2)), so the tail is dominated by a geometric series.
    if (kd + 1.0 > nd) {
      const double ratio = ax * std::max(1.0, (2.0 * sv + kd + 1.0) / (kd + 2.0));
      if (ratio < 1.0) {
        const double bound = std::abs(term) / std::abs(sv - nd + kd + 1.0) / (1.0 - ratio);
        if (bound < tol) return sum;
      }
    }
  }
  throw ConvergenceError("n_alpha_series: no convergence within 10^6 terms at x = " +
                         std::to_string(x));
}

}  // namespace fraclap
