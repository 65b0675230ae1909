#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "fraclap/errors.hpp"
#include "fraclap/quadrature.hpp"
#include "support.hpp"

using namespace fraclap;
using testsupport::rel_err;

namespace {

double apply_rule(const QuadratureRule& r, std::size_t m) {
  double acc = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) acc += r.weights[i] * std::pow(r.nodes[i], static_cast<double>(m));
  return acc;
}

void check_shape(const QuadratureRule& r) {
  const std::size_t n = r.size();
  for (std::size_t i = 0; i < n; ++i) {
    REQUIRE(r.nodes[i] > -1.0);
    REQUIRE(r.nodes[i] < 1.0);
    REQUIRE(r.weights[i] > 0.0);
    if (i > 0) REQUIRE(r.nodes[i] > r.nodes[i - 1]);
    REQUIRE(std::abs(r.nodes[i] + r.nodes[n - 1 - i]) <= 1e-13);
    REQUIRE(std::abs(r.weights[i] - r.weights[n - 1 - i]) <= 1e-13 * r.weights[i]);
  }
}

}  // namespace

TEST_CASE("single-point rule") {
  for (double alpha : {-0.5, 0.0, 0.3, 0.5, 2.0}) {
    const auto r = gauss_jacobi(0, alpha);
    REQUIRE(r.size() == 1);
    CHECK(r.nodes[0] == 0.0);
    CHECK(rel_err(r.weights[0], testsupport::beta_moment(0, alpha)) < 1e-14);
  }
  CHECK(rel_err(gauss_jacobi(0, 0.5).weights[0], std::numbers::pi / 2) < 1e-15);
  CHECK_THROWS_AS(gauss_jacobi(3, -1.0), DomainError);
}

TEST_CASE("total mass") {
  for (double alpha : {-0.7, 0.0, 0.25, 0.5, 0.9, 3.0}) {
    CHECK(rel_err(jacobi_total_mass(alpha), testsupport::beta_moment(0, alpha)) < 1e-14);
  }
}

TEST_CASE("degree 40 moment with 21 points") {
  for (double s : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    CHECK(rel_err(apply_rule(gauss_jacobi(20, s), 40), testsupport::beta_moment(40, s)) < 1e-13);
  }
}

TEST_CASE("monomial exactness sweep") {
  for (std::size_t n : {4u, 8u, 16u, 32u}) {
    for (double alpha : {0.1, 0.5, 0.9}) {
      const auto r = gauss_jacobi(n, alpha);
      for (std::size_t m = 0; m <= 2 * n + 1; ++m) {
        const double got = apply_rule(r, m);
        INFO("n = " << n << ", alpha = " << alpha << ", m = " << m);
        if (m % 2 == 1) {
          CHECK(std::abs(got) <= 1e-13);
        } else {
          CHECK(rel_err(got, testsupport::beta_moment(m, alpha)) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("rule is not exact one degree beyond 2n+1") {
  const auto r = gauss_jacobi(5, 0.3);
  CHECK(rel_err(apply_rule(r, 12), testsupport::beta_moment(12, 0.3)) > 1e-6);
}

TEST_CASE("nodes interlace between consecutive rules") {
  testsupport::for_all(21, 40, [](testsupport::Gen& g, int) {
    const std::size_t n = g.index(1, 200);
    const double alpha = g.uniform(-0.9, 3.0);
    const auto lo = gauss_jacobi(n - 1, alpha), hi = gauss_jacobi(n, alpha);
    INFO("n = " << n << ", alpha = " << alpha);
    for (std::size_t i = 0; i < lo.size(); ++i) {
      CHECK(hi.nodes[i] < lo.nodes[i]);
      CHECK(lo.nodes[i] < hi.nodes[i + 1]);
    }
  });
}

TEST_CASE("shape invariants up to 4096 points") {
  for (std::size_t n : {1u, 2u, 7u, 64u, 513u, 4095u}) {
    for (double alpha : {0.01, 0.5, 0.99}) {
      INFO("n = " << n << ", alpha = " << alpha);
      const auto r = gauss_jacobi(n, alpha);
      REQUIRE(r.size() == n + 1);
      check_shape(r);
      double mass = 0.0;
      for (double w : r.weights) mass += w;
      CHECK(rel_err(mass, jacobi_total_mass(alpha)) < 1e-12);
    }
  }
}

TEST_CASE("random polynomial integration is exact") {
  testsupport::for_all(22, 60, [](testsupport::Gen& g, int) {
    const std::size_t n = g.index(0, 40);
    const double alpha = g.uniform(-0.5, 2.0);
    const auto c = g.vec(2 * n + 2);
    const auto r = gauss_jacobi(n, alpha);
    double got = 0.0, want = 0.0, scale = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) {
      got += c[m] * apply_rule(r, m);
      want += c[m] * testsupport::beta_moment(m, alpha);
      scale += std::abs(c[m]) * testsupport::beta_moment(m - m % 2, alpha);
    }
    INFO("n = " << n << ", alpha = " << alpha);
    CHECK(std::abs(got - want) <= 1e-13 * scale);
  });
}

TEST_CASE("map_to_interval") {
  const auto ref = gauss_jacobi(6, 0.4);
  const auto same = map_to_interval(ref, Interval(-1.0, 1.0));
  for (std::size_t i = 0; i < ref.size(); ++i) {
    CHECK(same.nodes[i] == ref.nodes[i]);
    CHECK(same.weights[i] == ref.weights[i]);
  }

  const auto gl = map_to_interval(gauss_jacobi(1, 0.0), Interval(0.0, 1.0));
  CHECK(std::abs(gl.nodes[0] - (3.0 - std::sqrt(3.0)) / 6.0) < 1e-15);
  CHECK(std::abs(gl.nodes[1] - (3.0 + std::sqrt(3.0)) / 6.0) < 1e-15);
  CHECK(std::abs(gl.weights[0] - 0.5) < 1e-15);
  CHECK(std::abs(gl.weights[1] - 0.5) < 1e-15);

  testsupport::for_all(23, 50, [](testsupport::Gen& g, int) {
    const auto [a, b] = g.interval();
    const double alpha = g.uniform(0.0, 1.0);
    const auto m = map_to_interval(gauss_jacobi(g.index(0, 30), alpha), Interval(a, b));
    double mass = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      CHECK(m.nodes[i] > a);
      CHECK(m.nodes[i] < b);
      mass += m.weights[i];
    }
    const double want = std::pow(b - a, 2 * alpha + 1) * boost::math::beta(alpha + 1, alpha + 1);
    CHECK(rel_err(mass, want) < 1e-13);
  });
}

TEST_CASE("mapped rule integrates the edge-weighted polynomial on (a, b)") {
  const double a = 2.0, b = 5.0, alpha = 0.3;
  const auto m = map_to_interval(gauss_jacobi(4, alpha), Interval(a, b));
  // int_a^b (y-a)^alpha (b-y)^alpha y^2 dy via the reference moments.
  const double h = (b - a) / 2, c = (a + b) / 2, scale = std::pow(h, 2 * alpha + 1);
  const double want = scale * (c * c * testsupport::beta_moment(0, alpha) + h * h * testsupport::beta_moment(2, alpha));
  double got = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) got += m.weights[i] * m.nodes[i] * m.nodes[i];
  CHECK(rel_err(got, want) < 1e-14);
}

TEST_CASE("binary rule layout") {
  const auto r = gauss_jacobi(3, 0.25);
  std::ostringstream os;
  write_rule(os, r);
  const std::string bytes = os.str();
  REQUIRE(bytes.size() == 8 + 8 + 8 + 16 * 4 * 2 / 2);
  CHECK(bytes.substr(0, 8) == "GJRULE01");
  CHECK(static_cast<unsigned char>(bytes[8]) == 4);
  for (int i = 9; i < 16; ++i) CHECK(bytes[i] == 0);

  std::istringstream is(bytes);
  const auto back = read_rule(is);
  CHECK(back.alpha == r.alpha);
  CHECK(back.nodes == r.nodes);
  CHECK(back.weights == r.weights);

  std::istringstream bad("GJRULE02" + bytes.substr(8));
  CHECK_THROWS_AS(read_rule(bad), ConfigError);
  std::istringstream truncated(bytes.substr(0, 30));
  CHECK_THROWS_AS(read_rule(truncated), ConfigError);
}

TEST_CASE("rule cache reuses files") {
  const auto dir = std::filesystem::temp_directory_path() / "fraclap_rule_cache_test";
  std::filesystem::remove_all(dir);
  RuleCache cache(dir);
  const auto r1 = cache.get(10, 0.3);
  CHECK(std::filesystem::exists(cache.file_for(10, 0.3)));
  RuleCache fresh(dir);
  const auto r2 = fresh.get(10, 0.3);
  CHECK(r1.nodes == r2.nodes);
  CHECK(r1.weights == r2.weights);
  CHECK(cache.file_for(10, 0.3) != cache.file_for(10, 0.30000000000000004));
  std::filesystem::remove_all(dir);
}
