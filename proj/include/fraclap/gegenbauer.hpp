#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fraclap/interval.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/specfun.hpp"

namespace fraclap {

/// Coefficients in the normalized basis C~_j = C_j^{(s+1/2)} / h_j, taken in
/// the reference variable of `interval`.
///
/// `s` is the weight exponent of the basis. It is a fractional order in (0, 1)
/// for solution and data expansions, and s + k after k differentiations, so it
/// is stored as a plain real constrained to s > -1/2.
struct GegenbauerCoeffs {
  double s = 0.5;
  Interval interval;
  std::vector<double> coeffs;

  GegenbauerCoeffs() = default;
  GegenbauerCoeffs(double weight_exponent, Interval iv, std::vector<double> c);

  std::size_t size() const noexcept { return coeffs.size(); }
};

/// C_n^{(alpha)}(x) by the three-term recurrence.
double eval_gegenbauer(std::size_t n, double alpha, double x);

/// C_0^{(alpha)}(x) .. C_n^{(alpha)}(x) in one pass; out.size() must be n+1.
void eval_gegenbauer_all(double alpha, double x, std::span<double> out);

/// h_0 .. h_n for weight exponent t.
std::vector<double> gegenbauer_norms(std::size_t n, double t);

/// f_j = (1/h_j) sum_i f(x_i) C_j(x_i) w_i for j = 0..n, with the (n+1)-point
/// rule for weight (1-x^2)^s. `values` are samples at the rule nodes (the
/// reference nodes mapped onto `interval`).
GegenbauerCoeffs forward_transform(std::span<const double> values, const QuadratureRule& rule,
                                   SExponent s, Interval interval);

/// sum_j c_j C~_j(x~) with x~ the reference variable of x.
double evaluate_expansion(const GegenbauerCoeffs& c, double x);

struct FlaggedValue {
  double value;
  bool outside;  ///< x was not inside the open interval
};
FlaggedValue evaluate_expansion_checked(const GegenbauerCoeffs& c, double x);

/// Evaluates the expansion at reference points t in [-1, 1].
std::vector<double> evaluate_expansion_reference(const GegenbauerCoeffs& c,
                                                 std::span<const double> t);

/// A_j^k: maps v_{j,s} to the coefficient of C~_{j-k}^{(s+k+1/2)} in v^{(k)}
/// (reference variable). Requires j >= k.
double derivative_factor_a(std::size_t j, std::size_t k, double s);

/// k-th derivative in the basis with weight exponent s + k, including the
/// chain-rule factor (2/(b-a))^k. Throws DomainError if k >= size().
GegenbauerCoeffs differentiate_coeffs(const GegenbauerCoeffs& c, std::size_t k);

/// Dense table T(i, j) = C~_j(t_i), row-major, for repeated transforms on a
/// fixed rule.
class TransformTable {
 public:
  TransformTable(const QuadratureRule& rule, SExponent s);

  std::size_t size() const noexcept { return n_; }
  double at(std::size_t node, std::size_t mode) const noexcept { return table_[node * n_ + mode]; }

  /// Node values -> normalized coefficients.
  void forward(std::span<const double> values, std::span<double> coeffs) const;
  /// Normalized coefficients -> node values.
  void inverse(std::span<const double> coeffs, std::span<double> values) const;

 private:
  std::size_t n_;
  std::vector<double> weights_;
  std::vector<double> table_;
};

}  // namespace fraclap
