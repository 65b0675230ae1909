// Test-side generators and high-precision reference values. Nothing here
// calls into the library under test.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace testsupport {

using Big = boost::multiprecision::cpp_bin_float_50;

inline double rel_err(double got, double want) {
  if (want == 0.0) return std::abs(got);
  return std::abs(got - want) / std::abs(want);
}

/// Seeded source of random test cases.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  std::vector<double> vec(std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::vector<double> v(n);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }
  /// Interval with endpoints in [-10, 10] and length in [0.05, 5].
  std::pair<double, double> interval() {
    const double a = uniform(-10.0, 10.0);
    return {a, a + uniform(0.05, 5.0)};
  }
  double s() { return uniform(0.02, 0.98); }

 private:
  std::mt19937_64 rng_;
};

/// Runs `body(gen, case_index)` for `cases` cases from a fixed seed.
template <class F>
void for_all(std::uint64_t seed, int cases, F&& body) {
  Gen gen(seed);
  for (int i = 0; i < cases; ++i) body(gen, i);
}

inline Big big_gamma(const Big& x) { return boost::math::tgamma(x); }

/// C_n^{(alpha)}(x) from the explicit finite sum, in 50-digit arithmetic.
inline double big_gegenbauer(std::size_t n, double alpha, double x) {
  const Big a = alpha, two_x = Big(2) * Big(x);
  Big acc = 0;
  for (std::size_t k = 0; 2 * k <= n; ++k) {
    Big term = big_gamma(Big(n - k) + a) / (big_gamma(a) * boost::math::factorial<Big>(static_cast<unsigned>(k)) *
                                            boost::math::factorial<Big>(static_cast<unsigned>(n - 2 * k)));
    term *= pow(two_x, static_cast<int>(n - 2 * k));
    acc += (k % 2 == 0) ? term : Big(-term);
  }
  return static_cast<double>(acc);
}

/// int_{-1}^{1} x^m (1-x^2)^alpha dx.
inline double beta_moment(std::size_t m, double alpha) {
  if (m % 2 == 1) return 0.0;
  const Big half_m = Big(m) / 2 + Big(0.5), ap = Big(alpha) + 1;
  return static_cast<double>(big_gamma(half_m) * big_gamma(ap) / big_gamma(half_m + ap));
}

/// L^2 norm of C_j^{(s+1/2)} against (1-x^2)^s, in 50-digit arithmetic.
inline double big_norm_h(std::size_t j, double s) {
  const Big S = s, pi = boost::math::constants::pi<Big>();
  const Big g = big_gamma(S + Big(0.5));
  const Big h2 = pow(Big(2), -2 * S) * pi / (g * g) * big_gamma(Big(j) + 2 * S + 1) /
                 (big_gamma(Big(j) + 1) * (Big(j) + S + Big(0.5)));
  return static_cast<double>(sqrt(h2));
}

/// Gamma(2s+n+1)/n! in 50-digit arithmetic.
inline double big_lambda(std::size_t n, double s) {
  return static_cast<double>(big_gamma(Big(2 * s) + Big(n) + 1) / big_gamma(Big(n) + 1));
}

/// C_1(s) in 50-digit arithmetic.
inline double big_c1(double s) {
  const Big S = s, pi = boost::math::constants::pi<Big>();
  return static_cast<double>(pow(Big(2), 2 * S) * S * big_gamma(S + Big(0.5)) / (sqrt(pi) * big_gamma(1 - S)));
}

}  // namespace testsupport
