#include "fraclap/sobolev_metrics.hpp"

#include <algorithm>
#include <cmath>

#include "fraclap/errors.hpp"

namespace fraclap {
namespace {

struct LineFit {
  double slope;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("fit: abscissae are all equal");
  return {sxy / sxx};
}

}  // namespace

double hrs_norm(const GegenbauerCoeffs& c, double r) {
  if (r < 0.0) throw DomainError("hrs_norm: r must be nonnegative");
  double acc = 0.0;
  for (std::size_t j = 0; j < c.coeffs.size(); ++j) {
    const double jj = static_cast<double>(j);
    acc += c.coeffs[j] * c.coeffs[j] * std::pow(1.0 + jj * jj, r);
  }
  return std::sqrt(acc);
}

double error_between(const GegenbauerCoeffs& c1, const GegenbauerCoeffs& c2, double r) {
  if (c1.s != c2.s) throw DomainError("error_between: weight exponents differ");
  if (!(c1.interval == c2.interval)) throw DomainError("error_between: intervals differ");
  const std::size_t n = std::max(c1.size(), c2.size());
  GegenbauerCoeffs d = c1.size() >= c2.size() ? c1 : c2;
  for (std::size_t j = 0; j < n; ++j) {
    const double a = j < c1.size() ? c1.coeffs[j] : 0.0;
    const double b = j < c2.size() ? c2.coeffs[j] : 0.0;
    d.coeffs[j] = a - b;
  }
  return hrs_norm(d, r);
}

OrderFit fit_order(const std::vector<double>& ns, const std::vector<double>& errs) {
  if (ns.size() != errs.size()) throw DomainError("fit_order: size mismatch");
  if (ns.size() < 3) throw DomainError("fit_order: at least 3 rows needed");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (!(errs[i] > 0.0) || !(ns[i] > 0.0)) {
      throw DomainError("fit_order: errors and N must be positive");
    }
    lx.push_back(std::log(ns[i]));
    ly.push_back(std::log(errs[i]));
  }
  if (std::all_of(ly.begin(), ly.end(), [&](double v) { return v == ly.front(); })) {
    throw DomainError("fit_order: errors are identical");
  }
  OrderFit out;
  out.order = -least_squares(lx, ly).slope;
  const std::size_t tail = std::max<std::size_t>(3, (lx.size() + 1) / 2);
  const std::vector<double> tx(lx.end() - static_cast<std::ptrdiff_t>(tail), lx.end());
  const std::vector<double> ty(ly.end() - static_cast<std::ptrdiff_t>(tail), ly.end());
  out.tail_order = -least_squares(tx, ty).slope;
  out.super_algebraic = out.tail_order > out.order + 0.5;
  return out;
}

DecayFit coefficient_decay_check(const GegenbauerCoeffs& c, std::size_t k) {
  const std::size_t n = c.size();
  if (n < 16) throw DomainError("coefficient_decay_check: at least 16 coefficients needed");
  double cmax = 0.0;
  for (double v : c.coeffs) cmax = std::max(cmax, std::abs(v));
  DecayFit out;
  if (cmax == 0.0) {
    out.status = DecayStatus::all_zero_tail;
    return out;
  }
  const double floor = 1e-13 * cmax * std::pow(10.0, -static_cast<double>(std::min<std::size_t>(k, 2)));

  std::vector<double> lx, ly;
  double tail_max = 0.0;
  std::size_t nonzero = 0;
  for (std::size_t j = n / 2; j < n; ++j) {
    const double v = std::abs(c.coeffs[j]);
    tail_max = std::max(tail_max, v);
    if (v > floor) {
      lx.push_back(std::log(static_cast<double>(j)));
      ly.push_back(std::log(v));
    }
  }
  for (double v : c.coeffs) nonzero += std::abs(v) > floor ? 1 : 0;

  if (nonzero <= 1) {
    out.status = DecayStatus::single_spike;
    return out;
  }
  if (tail_max <= 1e-13 * cmax) {
    out.status = DecayStatus::spectrally_exact;
    return out;
  }
  if (lx.size() < 3) {
    out.status = DecayStatus::all_zero_tail;
    return out;
  }
  out.exponent = -least_squares(lx, ly).slope;
  return out;
}

double derivative_factor_b(std::size_t j, std::size_t k, double s) {
  if (j < k) throw DomainError("derivative_factor_b: j must be at least k");
  double prod = 1.0;
  for (std::size_t r = 0; r < k; ++r) {
    const double rr = static_cast<double>(r), jj = static_cast<double>(j);
    prod *= (2.0 * s + 2.0 * rr + 1.0) / ((jj - rr) * (2.0 * s + rr + jj + 1.0));
  }
  return gegenbauer_norm_h(j - k, s + static_cast<double>(k)) / gegenbauer_norm_h(j, s) * prod;
}

std::size_t reference_resolution(std::size_t n_max) {
  return std::max(2 * n_max, n_max + 16);
}

}  // namespace fraclap
