#include "fraclap/gegenbauer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fraclap/errors.hpp"

namespace fraclap {

GegenbauerCoeffs::GegenbauerCoeffs(double weight_exponent, Interval iv, std::vector<double> c)
    : s(weight_exponent), interval(iv), coeffs(std::move(c)) {
  if (!(s > -0.5)) throw DomainError("GegenbauerCoeffs: weight exponent must exceed -1/2");
  if (coeffs.empty()) throw DomainError("GegenbauerCoeffs: coefficient vector is empty");
}

double eval_gegenbauer(std::size_t n, double alpha, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * alpha * x;
  for (std::size_t k = 2; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    const double next =
        (2.0 * x * (kd + alpha - 1.0) * cur - (kd + 2.0 * alpha - 2.0) * prev) / kd;
    prev = cur;
    cur = next;
  }
  return cur;
}

void eval_gegenbauer_all(double alpha, double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = 2.0 * alpha * x;
  for (std::size_t k = 2; k < out.size(); ++k) {
    const double kd = static_cast<double>(k);
    out[k] = (2.0 * x * (kd + alpha - 1.0) * out[k - 1] - (kd + 2.0 * alpha - 2.0) * out[k - 2]) / kd;
  }
}

std::vector<double> gegenbauer_norms(std::size_t n, double t) {
  std::vector<double> h(n + 1);
  for (std::size_t j = 0; j <= n; ++j) h[j] = gegenbauer_norm_h(j, t);
  return h;
}

GegenbauerCoeffs forward_transform(std::span<const double> values, const QuadratureRule& rule,
                                   SExponent s, Interval interval) {
  if (values.size() != rule.size()) {
    throw DomainError("forward_transform: " + std::to_string(values.size()) +
                      " values for a rule with " + std::to_string(rule.size()) + " nodes");
  }
  if (rule.alpha != s.value()) {
    throw DomainError("forward_transform: rule exponent does not match s");
  }
  const std::size_t npts = rule.size();
  const double alpha = s.value() + 0.5;
  std::vector<double> acc(npts, 0.0), poly(npts);
  for (std::size_t i = 0; i < npts; ++i) {
    eval_gegenbauer_all(alpha, rule.nodes[i], poly);
    const double fw = values[i] * rule.weights[i];
    for (std::size_t j = 0; j < npts; ++j) acc[j] += fw * poly[j];
  }
  const auto h = gegenbauer_norms(npts - 1, s.value());
  for (std::size_t j = 0; j < npts; ++j) acc[j] /= h[j];
  return GegenbauerCoeffs(s.value(), interval, std::move(acc));
}

namespace {

double sum_expansion(const std::vector<double>& c, const std::vector<double>& h, double alpha,
                     double t) {
  double acc = c[0] / h[0];
  if (c.size() == 1) return acc;
  double prev = 1.0;
  double cur = 2.0 * alpha * t;
  acc += c[1] * cur / h[1];
  for (std::size_t k = 2; k < c.size(); ++k) {
    const double kd = static_cast<double>(k);
    const double next =
        (2.0 * t * (kd + alpha - 1.0) * cur - (kd + 2.0 * alpha - 2.0) * prev) / kd;
    prev = cur;
    cur = next;
    acc += c[k] * cur / h[k];
  }
  return acc;
}

}  // namespace

double evaluate_expansion(const GegenbauerCoeffs& c, double x) {
  const auto h = gegenbauer_norms(c.size() - 1, c.s);
  return sum_expansion(c.coeffs, h, c.s + 0.5, c.interval.to_reference(x));
}

FlaggedValue evaluate_expansion_checked(const GegenbauerCoeffs& c, double x) {
  return {evaluate_expansion(c, x), !c.interval.contains(x)};
}

std::vector<double> evaluate_expansion_reference(const GegenbauerCoeffs& c,
                                                 std::span<const double> t) {
  const auto h = gegenbauer_norms(c.size() - 1, c.s);
  std::vector<double> out;
  out.reserve(t.size());
  for (double ti : t) out.push_back(sum_expansion(c.coeffs, h, c.s + 0.5, ti));
  return out;
}

double derivative_factor_a(std::size_t j, std::size_t k, double s) {
  if (j < k) throw DomainError("derivative_factor_a: requires j >= k");
  const double kd = static_cast<double>(k);
  const double ratio = gegenbauer_norm_h(j - k, s + kd) / gegenbauer_norm_h(j, s);
  double rising = 1.0;  // Gamma(s+1/2+k) / Gamma(s+1/2)
  for (std::size_t r = 0; r < k; ++r) rising *= s + 0.5 + static_cast<double>(r);
  return std::exp2(kd) * ratio * rising;
}

GegenbauerCoeffs differentiate_coeffs(const GegenbauerCoeffs& c, std::size_t k) {
  if (k == 0) return c;
  if (k >= c.size()) {
    throw DomainError("differentiate_coeffs: order " + std::to_string(k) +
                      " leaves no coefficients for length " + std::to_string(c.size()));
  }
  const double chain = std::pow(2.0 / c.interval.length(), static_cast<double>(k));
  std::vector<double> out(c.size() - k);
  for (std::size_t j = k; j < c.size(); ++j) {
    out[j - k] = chain * derivative_factor_a(j, k, c.s) * c.coeffs[j];
  }
  return GegenbauerCoeffs(c.s + static_cast<double>(k), c.interval, std::move(out));
}

TransformTable::TransformTable(const QuadratureRule& rule, SExponent s)
    : n_(rule.size()), weights_(rule.weights), table_(n_ * n_) {
  if (rule.alpha != s.value()) throw DomainError("TransformTable: rule exponent does not match s");
  const auto h = gegenbauer_norms(n_ - 1, s.value());
  for (std::size_t i = 0; i < n_; ++i) {
    std::span<double> row(table_.data() + i * n_, n_);
    eval_gegenbauer_all(s.value() + 0.5, rule.nodes[i], row);
    for (std::size_t j = 0; j < n_; ++j) row[j] /= h[j];
  }
}

void TransformTable::forward(std::span<const double> values, std::span<double> coeffs) const {
  std::fill(coeffs.begin(), coeffs.end(), 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const double fw = values[i] * weights_[i];
    const double* row = table_.data() + i * n_;
    for (std::size_t j = 0; j < n_; ++j) coeffs[j] += fw * row[j];
  }
}

void TransformTable::inverse(std::span<const double> coeffs, std::span<double> values) const {
  for (std::size_t i = 0; i < n_; ++i) {
    const double* row = table_.data() + i * n_;
    double acc = 0.0;
    for (std::size_t j = 0; j < n_; ++j) acc += row[j] * coeffs[j];
    values[i] = acc;
  }
}

}  // namespace fraclap
