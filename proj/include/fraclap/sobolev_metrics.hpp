#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fraclap/gegenbauer.hpp"

namespace fraclap {

/// (sum_j |c_j|^2 (1+j^2)^r)^{1/2}. With r = 0 this is the L^2_s norm.
double hrs_norm(const GegenbauerCoeffs& c, double r);

/// hrs_norm of c1 - c2, zero-padding the shorter vector. Throws DomainError if
/// the weight exponents or intervals differ.
double error_between(const GegenbauerCoeffs& c1, const GegenbauerCoeffs& c2, double r);

struct OrderFit {
  double order = 0.0;       ///< err ~ N^{-order} over all rows
  double tail_order = 0.0;  ///< same fit over the last half of the rows
  bool super_algebraic = false;
};

/// Least-squares slope of log(err) against log(N), sign-flipped. Needs at
/// least 3 rows with positive errors and distinct N; throws DomainError
/// otherwise.
OrderFit fit_order(const std::vector<double>& ns, const std::vector<double>& errs);

enum class DecayStatus { ok, all_zero_tail, single_spike, spectrally_exact };

struct DecayFit {
  double exponent = 0.0;  ///< q in |c_j| ~ j^{-q}
  DecayStatus status = DecayStatus::ok;
};

/// Fits |c_j| ~ j^{-q} over the tail half of the indices. `k` is the number of
/// derivatives expected to be square-integrable; it only sets the floor below
/// which coefficients are treated as roundoff (relative to max |c_j|).
DecayFit coefficient_decay_check(const GegenbauerCoeffs& c, std::size_t k);

/// B_j^k: maps the coefficient of C~_{j-k}^{(s+k+1/2)} of v^{(k)} back to v_j
/// (reference variable), the inverse of derivative_factor_a. Requires j >= k.
double derivative_factor_b(std::size_t j, std::size_t k, double s);

struct ConvergenceRow {
  std::size_t n = 0;
  double err_l2s = 0.0;
  double err_h2ss = 0.0;
  double seconds = 0.0;
};

struct ConvergenceReport {
  double s = 0.5;
  std::vector<std::pair<double, double>> domain;
  std::string rhs_label;
  std::size_t reference_n = 0;
  std::vector<ConvergenceRow> rows;
  OrderFit fit_l2s;
  OrderFit fit_h2ss;
};

/// Reference resolution for a sweep whose largest N is n_max.
std::size_t reference_resolution(std::size_t n_max);

}  // namespace fraclap
