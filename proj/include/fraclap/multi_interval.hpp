#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fraclap/gegenbauer.hpp"
#include "fraclap/problem.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/specfun.hpp"

namespace fraclap {

/// y = A x; both spans have the system dimension.
using LinearMap = std::function<void(std::span<const double>, std::span<double>)>;

struct GmresResult {
  std::vector<double> x;
  std::size_t iterations = 0;
  /// Relative residual ||b - A x_m|| / ||b|| for m = 0, 1, ...
  std::vector<double> residual_history;
  bool converged = false;
};

/// Unrestarted GMRES with modified Gram-Schmidt and Givens rotations, started
/// from x_0 = 0. On exhaustion the best iterate is returned with
/// converged = false. maxit = 0 means the system dimension.
GmresResult gmres(const LinearMap& apply_a, std::span<const double> rhs, double tol,
                  std::size_t maxit);

/// Values of the cross-interval remainder at every node of every interval,
/// concatenated in interval order. `phi_nodes[l]` holds phi at the nodes of
/// `rules[l]`. The result at a node of interval j is
///   -C_1(s) sum_{l != j} sum_i |x - y_i|^{-1-2s} phi(y_i) w_i
/// where the mapped weights already carry the edge weight.
std::vector<double> apply_offdiagonal(const std::vector<std::vector<double>>& phi_nodes,
                                      const std::vector<MappedRule>& rules, SExponent s);

/// Coefficient form of the above; phi is evaluated at the rule nodes first.
std::vector<double> apply_offdiagonal(const std::vector<GegenbauerCoeffs>& phi,
                                      const std::vector<MappedRule>& rules, SExponent s);

struct MultiSolution {
  SExponent s{0.5};
  Domain domain{{Interval()}};
  std::vector<GegenbauerCoeffs> blocks;
  std::size_t gmres_iterations = 0;
  double final_residual = 0.0;
  std::vector<double> residual_history;

  /// phi(x); zero outside the domain.
  double phi(double x) const;
  /// u(x) = omega^s(x) phi(x); zero outside the domain.
  double u(double x) const;
};

MultiSolution solve(const ProblemSpec& spec);

}  // namespace fraclap
