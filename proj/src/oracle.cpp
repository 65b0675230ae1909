#include "fraclap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include <boost/math/quadrature/gauss.hpp>

#include "fraclap/errors.hpp"
#include "fraclap/operator_core.hpp"

namespace fraclap {
namespace {

using Gauss = boost::math::quadrature::gauss<double, 16>;

// Integral of g over [lo, hi] (lo < hi) with 16-point Gauss.
template <class G>
double panel(G&& g, double lo, double hi) {
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  return half * Gauss::integrate([&](double t) { return g(mid + half * t); }, -1.0, 1.0);
}

// Integral over distance d from an endpoint, d in [0, len], of k(d) * u'(d).
// Panels are graded dyadically toward d = 0; the innermost one is mapped by
// d = delta tau^{1/s}, which absorbs a d^{s-1} edge singularity. When
// `far_end` > 0 extra geometric panels are placed toward d = len, spaced by
// far_end 2^k.
template <class F>
double graded_integral(F&& f, double len, double s, std::size_t levels, double grade_span,
                       double far_end) {
  std::vector<double> pts{0.0};
  const double h = std::min(grade_span, len);
  for (std::size_t k = levels; k-- > 0;) pts.push_back(h * std::ldexp(1.0, -static_cast<int>(k)));
  if (far_end > 0.0) {
    std::vector<double> geo;
    for (double d = far_end; d < len - h; d *= 2.0) geo.push_back(len - d);
    std::reverse(geo.begin(), geo.end());
    pts.insert(pts.end(), geo.begin(), geo.end());
  }
  if (pts.back() < len) pts.push_back(len);

  double acc = 0.0;
  const double delta = pts[1];
  const double inv_s = 1.0 / s;
  acc += panel(
      [&](double tau) {
        const double t = std::max(tau, 0.0);
        const double d = delta * std::pow(t, inv_s);
        return f(d) * delta * inv_s * std::pow(t, inv_s - 1.0);
      },
      0.0, 1.0);
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] > pts[i]) acc += panel(f, pts[i], pts[i + 1]);
  }
  return acc;
}

// Excised integral over [a, x - eps] U [x + eps, b] with odd kernel k(x - z).
// Within R of x the two sides are paired as k(r) (u'(x-r) - u'(x+r)) so the
// large symmetric parts cancel before integration.
template <class K>
double excised(const Integrand& uprime, double x, Interval iv, double s, double eps, K&& kernel,
               std::size_t levels) {
  const double len = iv.b - iv.a;
  const double xa = x - iv.a, bx = iv.b - x;
  const double reach = 0.5 * std::min(xa, bx);

  auto paired = [&](double r) {
    return kernel(r) * (uprime(EvalPoint{x - r, xa - r, bx + r}) - uprime(EvalPoint{x + r, xa + r, bx - r}));
  };
  double near = 0.0;
  for (double lo = eps; lo < reach;) {
    const double hi = std::min(2.0 * lo, reach);
    near += panel(paired, lo, hi);
    lo = hi;
  }

  auto left = [&](double d) {
    return kernel(xa - d) * uprime(EvalPoint{iv.a + d, d, len - d});
  };
  auto right = [&](double e) {
    return kernel(-(bx - e)) * uprime(EvalPoint{iv.b - e, len - e, e});
  };
  return near + graded_integral(left, xa - reach, s, levels, 0.5 * xa, reach) +
         graded_integral(right, bx - reach, s, levels, 0.5 * bx, reach);
}

template <class K>
PVResult richardson(const Integrand& uprime, double x, Interval iv, double s, double prefactor,
                    K&& kernel, const PVConfig& cfg) {
  if (!(iv.a < x && x < iv.b)) throw DomainError("oracle: x must be interior");
  if (cfg.levels < 3) throw ConfigError("oracle: at least 3 extrapolation levels are required");
  const double eps0 = cfg.eps_scale * std::min(x - iv.a, iv.b - x);
  PVResult out{0.0, 0.0, {}};
  for (std::size_t m = 0; m < cfg.levels; ++m) {
    const double eps = std::ldexp(eps0, -static_cast<int>(m));
    std::vector<double> row{prefactor * excised(uprime, x, iv, s, eps, kernel, cfg.grading)};
    for (std::size_t k = 1; k <= m; ++k) {
      const double p = 2.0 * static_cast<double>(k) - 2.0 * s;
      const double prev = out.table[m - 1][k - 1];
      row.push_back(row[k - 1] + (row[k - 1] - prev) / (std::exp2(p) - 1.0));
    }
    out.table.push_back(std::move(row));
  }
  const std::size_t last = cfg.levels - 1;
  out.value = out.table[last][last];
  out.error_estimate = std::abs(out.value - out.table[last - 1][last - 1]);
  if (!(out.error_estimate <= cfg.cauchy_tol * std::max(1.0, std::abs(out.value)))) {
    std::vector<double> diag;
    for (std::size_t m = 0; m <= last; ++m) diag.push_back(out.table[m][m]);
    throw ConvergenceError("oracle: Richardson estimates are not settling", diag);
  }
  return out;
}

}  // namespace

PVResult pv_apply_detailed(const Integrand& uprime, double x, SExponent s, Interval interval,
                           const PVConfig& cfg) {
  const double sv = s.value();
  auto kernel = [sv](double r) { return std::copysign(std::pow(std::abs(r), -2.0 * sv), r); };
  return richardson(uprime, x, interval, sv, NormConstants::of(s).weighted_prefactor, kernel, cfg);
}

double pv_apply(const Integrand& uprime, double x, SExponent s, Interval interval,
                const PVConfig& cfg) {
  return pv_apply_detailed(uprime, x, s, interval, cfg).value;
}

double pv_apply_log(const Integrand& uprime, double x, Interval interval, const PVConfig& cfg) {
  auto kernel = [](double r) { return 1.0 / r; };
  return richardson(uprime, x, interval, 0.5, std::numbers::inv_pi, kernel, cfg).value;
}

double pv_exterior(const Integrand& uprime, double x, SExponent s, Interval iv,
                   const PVConfig& cfg) {
  if (iv.a <= x && x <= iv.b) throw DomainError("pv_exterior: x must lie outside [a, b]");
  const double sv = s.value();
  const double len = iv.b - iv.a;
  const double gap = x < iv.a ? iv.a - x : x - iv.b;
  std::size_t levels = cfg.grading;
  if (gap < len) {
    levels = std::max<std::size_t>(levels, static_cast<std::size_t>(std::ceil(std::log2(len / gap))) + 6);
  }
  // Split at the midpoint; each half is graded toward its own endpoint.
  const double half = 0.5 * len;
  auto from_a = [&](double d) {
    const double r = x - (iv.a + d);
    return std::copysign(std::pow(std::abs(r), -2.0 * sv), r) *
           uprime(EvalPoint{iv.a + d, d, len - d});
  };
  auto from_b = [&](double e) {
    const double r = x - (iv.b - e);
    return std::copysign(std::pow(std::abs(r), -2.0 * sv), r) *
           uprime(EvalPoint{iv.b - e, len - e, e});
  };
  const double total = graded_integral(from_a, half, sv, levels, half, 0.0) +
                       graded_integral(from_b, half, sv, levels, half, 0.0);
  return NormConstants::of(s).weighted_prefactor * total;
}

Integrand weighted_derivative(std::function<double(double)> phi,
                              std::function<double(double)> dphi, double s) {
  return [phi = std::move(phi), dphi = std::move(dphi), s](const EvalPoint& p) {
    const double w = std::pow(p.from_a * p.to_b, s);
    const double dw = s * std::pow(p.from_a, s - 1.0) * std::pow(p.to_b, s - 1.0) * (p.to_b - p.from_a);
    return dw * phi(p.z) + w * dphi(p.z);
  };
}

}  // namespace fraclap
