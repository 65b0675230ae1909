#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "fraclap/interval.hpp"

namespace fraclap {

/// Gauss-Jacobi rule on [-1, 1] for the symmetric weight (1-x^2)^alpha.
/// Nodes strictly increasing, weights positive, mirrored pairs equal.
struct QuadratureRule {
  double alpha = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Rule pulled back to (a, b); integrates against (y-a)^alpha (b-y)^alpha.
/// The reference rule is kept alongside since transforms work on [-1, 1].
struct MappedRule {
  Interval interval;
  QuadratureRule reference;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Total mass  int_{-1}^{1} (1-x^2)^alpha dx = sqrt(pi) Gamma(alpha+1) / Gamma(alpha+3/2).
double jacobi_total_mass(double alpha);

/// (n+1)-point rule, exact for polynomials of degree <= 2n+1.
///
/// Built by Golub-Welsch: the symmetric tridiagonal Jacobi matrix of the
/// monic Gegenbauer recurrence is diagonalized by implicit-shift QL, tracking
/// only the first row of the eigenvector matrix. Mirrored nodes and weights
/// are averaged afterwards so the rule is exactly symmetric.
QuadratureRule gauss_jacobi(std::size_t n, double alpha);

MappedRule map_to_interval(const QuadratureRule& rule, Interval interval);

// Binary layout (little-endian): "GJRULE01", u64 point count, f64 alpha,
// f64 nodes[count], f64 weights[count].
void write_rule(std::ostream& os, const QuadratureRule& rule);
QuadratureRule read_rule(std::istream& is);

/// Memoizing rule source with an optional on-disk cache directory.
/// Thread-safe; returned rules are copies.
class RuleCache {
 public:
  RuleCache() = default;
  explicit RuleCache(std::filesystem::path directory);

  QuadratureRule get(std::size_t n, double alpha);

  std::filesystem::path file_for(std::size_t n, double alpha) const;

 private:
  std::filesystem::path directory_;
  std::map<std::pair<std::size_t, double>, QuadratureRule> memo_;
  std::mutex mutex_;
};

}  // namespace fraclap
