#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "fraclap/interval.hpp"
#include "fraclap/specfun.hpp"

namespace fraclap {

/// Brute-force principal-value evaluation of the fractional Laplacian. Slow
/// by design; used only as ground truth in tests and in `eigencheck`.

/// Integration point handed to the integrand. Distances to both endpoints
/// are computed without cancellation, so integrands with edge singularities
/// should use them instead of z.
struct EvalPoint {
  double z;
  double from_a;  ///< z - a
  double to_b;    ///< b - z
};

using Integrand = std::function<double(const EvalPoint&)>;

struct PVConfig {
  /// eps_0 = eps_scale * min(x - a, b - x); eps_m = eps_0 2^-m.
  double eps_scale = 1e-2;
  std::size_t levels = 6;
  /// Dyadic panels toward each endpoint.
  std::size_t grading = 12;
  /// Successive diagonal Richardson estimates must agree to this (relative
  /// to max(1, |value|)) or the evaluation fails.
  double cauchy_tol = 1e-5;
};

struct PVResult {
  double value;
  double error_estimate;
  /// Richardson table, row m holds the extrapolants built from eps_0..eps_m.
  std::vector<std::vector<double>> table;
};

/// C_1(s)/(2s) PV int_a^b sgn(x-z) |x-z|^{-2s} u'(z) dz for u vanishing at the
/// endpoints; x must lie in the open interval.
double pv_apply(const Integrand& uprime, double x, SExponent s, Interval interval,
                const PVConfig& cfg = {});
PVResult pv_apply_detailed(const Integrand& uprime, double x, SExponent s, Interval interval,
                           const PVConfig& cfg = {});

/// s = 1/2 case: (1/pi) PV int_a^b u'(z) / (x - z) dz.
double pv_apply_log(const Integrand& uprime, double x, Interval interval,
                    const PVConfig& cfg = {});

/// C_1(s)/(2s) int_a^b sgn(x-z) |x-z|^{-2s} u'(z) dz for x outside [a, b].
double pv_exterior(const Integrand& uprime, double x, SExponent s, Interval interval,
                   const PVConfig& cfg = {});

/// u'(z) for u = omega^s phi with omega = (z-a)(b-z), where phi and dphi are
/// functions of z.
Integrand weighted_derivative(std::function<double(double)> phi,
                              std::function<double(double)> dphi, double s);

}  // namespace fraclap
