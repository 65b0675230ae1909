#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fraclap/interval.hpp"
#include "fraclap/specfun.hpp"

namespace fraclap {

/// Finite union of open intervals with disjoint closures, in ascending order.
class Domain {
 public:
  /// Throws ConfigError naming the first offending pair.
  explicit Domain(std::vector<Interval> intervals);

  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  std::size_t size() const noexcept { return intervals_.size(); }
  const Interval& operator[](std::size_t i) const noexcept { return intervals_[i]; }

  /// Index of the interval containing x, if any.
  std::optional<std::size_t> locate(double x) const noexcept;

 private:
  std::vector<Interval> intervals_;
};

namespace rhs {
struct Constant { double value = 1.0; };
/// 1 / (x^2 + 0.01)
struct Runge {};
/// |x|
struct AbsX {};
struct Monomials { std::vector<double> coeffs; };
/// C~_k^{(s+1/2)} in the reference variable of the interval holding x.
struct GegenbauerMode { std::size_t k = 0; };
/// Samples (x_i, f_i) interpolated by local cubic Lagrange pieces. Nodes
/// generally differ from the quadrature nodes, so accuracy is limited to the
/// interpolant.
struct Tabulated { std::vector<double> x; std::vector<double> f; };
}  // namespace rhs

/// Right-hand side descriptor; evaluable at any point of the domain.
class RightHandSide {
 public:
  using Variant = std::variant<rhs::Constant, rhs::Runge, rhs::AbsX, rhs::Monomials,
                               rhs::GegenbauerMode, rhs::Tabulated>;

  RightHandSide() : impl_(rhs::Constant{}) {}
  RightHandSide(Variant v);  // NOLINT(google-explicit-constructor)

  /// Parses NAME[:params]: "constant[:c]", "runge", "absx",
  /// "polynomial:c0,c1,...", "gegenbauer-mode:k", "table:PATH".
  static RightHandSide parse(const std::string& text);

  double operator()(double x, const Domain& domain, SExponent s) const;

  /// Canonical text form accepted by parse().
  std::string label() const;

  /// Non-empty when the rhs is only known through an interpolant.
  std::string accuracy_warning() const;

  const Variant& variant() const noexcept { return impl_; }

 private:
  Variant impl_;
  std::string source_;  // path for tabulated data
};

struct ProblemSpec {
  SExponent s{0.5};
  Domain domain{{Interval(-1.0, 1.0)}};
  RightHandSide rhs;
  /// One entry per interval, or a single entry shared by all intervals.
  std::vector<std::size_t> n{16};
  double gmres_tol = 1e-13;
  /// 0 selects the total number of unknowns.
  std::size_t gmres_maxit = 0;
  std::string output_prefix = "fraclap";

  std::size_t resolution(std::size_t interval) const;
  void validate() const;
};

}  // namespace fraclap
