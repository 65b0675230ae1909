#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "fraclap/errors.hpp"
#include "fraclap/gegenbauer.hpp"
#include "fraclap/multi_interval.hpp"
#include "fraclap/operator_core.hpp"
#include "fraclap/oracle.hpp"
#include "fraclap/sobolev_metrics.hpp"
#include "support.hpp"

using namespace fraclap;
using testsupport::rel_err;

namespace {

ProblemSpec make_spec(double s, std::vector<Interval> iv, const std::string& rhs, std::size_t n) {
  ProblemSpec spec;
  spec.s = SExponent(s);
  spec.domain = Domain(std::move(iv));
  spec.rhs = RightHandSide::parse(rhs);
  spec.n = {n};
  return spec;
}

double rel_l2s(const MultiSolution& sol, const MultiSolution& ref) {
  double num = 0.0, den = 0.0;
  for (std::size_t l = 0; l < sol.blocks.size(); ++l) {
    num += std::pow(error_between(sol.blocks[l], ref.blocks[l], 0.0), 2);
    den += std::pow(hrs_norm(ref.blocks[l], 0.0), 2);
  }
  return std::sqrt(num / den);
}

const std::vector<Interval> kTwoGap{Interval(-1.0, -0.08), Interval(0.08, 1.0)};

}  // namespace

TEST_CASE("gmres on the identity") {
  const std::vector<double> b{1.0, -2.0, 3.0, 0.5};
  const auto r = gmres([](std::span<const double> x, std::span<double> y) { std::copy(x.begin(), x.end(), y.begin()); },
                       b, 1e-13, 10);
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  CHECK(r.x == b);
}

TEST_CASE("gmres matches a dense LU solve") {
  testsupport::for_all(51, 20, [](testsupport::Gen& g, int) {
    const int n = 20;
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = g.uniform(-1.0, 1.0) / std::sqrt(n);
    }
    a += 2.0 * Eigen::MatrixXd::Identity(n, n);
    const auto bv = g.vec(n);
    const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(bv.data(), n);
    const Eigen::VectorXd want = a.partialPivLu().solve(b);

    const auto r = gmres(
        [&](std::span<const double> x, std::span<double> y) {
          Eigen::Map<Eigen::VectorXd>(y.data(), n) = a * Eigen::Map<const Eigen::VectorXd>(x.data(), n);
        },
        bv, 1e-13, 0);
    REQUIRE(r.converged);
    CHECK(r.iterations <= static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) CHECK(std::abs(r.x[i] - want(i)) <= 1e-10 * want.cwiseAbs().maxCoeff());
    for (std::size_t k = 1; k < r.residual_history.size(); ++k) {
      CHECK(r.residual_history[k] <= r.residual_history[k - 1] * (1.0 + 1e-12));
    }
    CHECK(r.residual_history.back() <= 1e-13);
  });
}

TEST_CASE("gmres reports exhaustion") {
  // Cyclic shift: GMRES makes no progress until the last step.
  const std::size_t n = 12;
  std::vector<double> b(n, 0.0);
  b[0] = 1.0;
  const LinearMap shift = [n](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < n; ++i) y[(i + 1) % n] = x[i];
  };
  const auto r = gmres(shift, b, 1e-13, 5);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 5);
  CHECK(r.residual_history.back() == doctest::Approx(1.0));
  CHECK(gmres(shift, b, 1e-13, 0).converged);
}

TEST_CASE("off-diagonal remainder structure") {
  const double s = 0.4;
  const SExponent se(s);
  {
    const std::vector<MappedRule> one{map_to_interval(gauss_jacobi(8, s), Interval(0.0, 2.0))};
    const auto out = apply_offdiagonal(std::vector<std::vector<double>>{std::vector<double>(9, 1.0)}, one, se);
    REQUIRE(out.size() == 9);
    for (double v : out) CHECK(v == 0.0);
  }

  testsupport::for_all(52, 20, [](testsupport::Gen& g, int) {
    const double s = g.s();
    const double gap = g.uniform(0.01, 2.0);
    const std::vector<Interval> iv{Interval(-1.0, 0.0), Interval(gap, gap + g.uniform(0.1, 3.0)),
                                   Interval(gap + 4.0, gap + 5.0)};
    std::vector<MappedRule> rules;
    std::vector<std::vector<double>> phi;
    for (const auto& i : iv) {
      const std::size_t n = g.index(0, 20);
      rules.push_back(map_to_interval(gauss_jacobi(n, s), i));
      phi.push_back(g.vec(n + 1, 0.0, 2.0));
    }
    for (double v : apply_offdiagonal(phi, rules, SExponent(s))) CHECK(v <= 0.0);
  });

  // Mirror symmetry.
  const std::vector<Interval> iv{Interval(-2.0, -1.0), Interval(1.0, 2.0)};
  const auto rule = gauss_jacobi(15, s);
  const std::vector<MappedRule> rules{map_to_interval(rule, iv[0]), map_to_interval(rule, iv[1])};
  auto even = [](double x) { return std::cos(x) + x * x; };
  std::vector<std::vector<double>> phi(2);
  for (std::size_t l = 0; l < 2; ++l) {
    for (double x : rules[l].nodes) phi[l].push_back(even(x));
  }
  const auto out = apply_offdiagonal(phi, rules, se);
  for (std::size_t k = 0; k < 16; ++k) CHECK(rel_err(out[k], out[16 + 15 - k]) <= 1e-13);

  CHECK_THROWS_AS(apply_offdiagonal(phi, rules, SExponent(0.3)), DomainError);
}

TEST_CASE("off-diagonal remainder matches the direct singular integral") {
  for (double s : {0.2, 0.5, 0.8}) {
    const std::vector<Interval> iv{Interval(-1.0, -0.2), Interval(0.1, 1.3)};
    const std::size_t n = 24;
    const auto rule = gauss_jacobi(n, s);
    const std::vector<MappedRule> rules{map_to_interval(rule, iv[0]), map_to_interval(rule, iv[1])};
    auto phi = [](double x) { return std::exp(x) * (1.0 + 0.5 * std::sin(3.0 * x)); };
    auto dphi = [](double x) { return std::exp(x) * (1.0 + 0.5 * std::sin(3.0 * x) + 1.5 * std::cos(3.0 * x)); };
    std::vector<std::vector<double>> nodes{{}, std::vector<double>(n + 1, 0.0)};
    for (double x : rules[0].nodes) nodes[0].push_back(phi(x));
    const auto out = apply_offdiagonal(nodes, rules, SExponent(s));

    const Integrand up = weighted_derivative(phi, dphi, s);
    for (std::size_t k = 0; k <= n; k += 4) {
      const double x = rules[1].nodes[k];
      const double want = pv_exterior(up, x, SExponent(s), iv[0]);
      INFO("s = " << s << ", x = " << x);
      CHECK(std::abs(out[n + 1 + k] - want) <= 1e-6 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("single-interval solve equals the diagonal solve") {
  for (double s : {0.2, 0.5, 0.9}) {
    const auto spec = make_spec(s, {Interval(-0.5, 2.0)}, "runge", 20);
    const auto sol = solve(spec);
    CHECK(sol.gmres_iterations == 0);
    REQUIRE(sol.blocks.size() == 1);
    const auto mapped = map_to_interval(gauss_jacobi(20, s), Interval(-0.5, 2.0));
    std::vector<double> f;
    for (double x : mapped.nodes) f.push_back(1.0 / (x * x + 0.01));
    const auto want = solve_diagonal(forward_transform(f, mapped.reference, SExponent(s), mapped.interval));
    double scale = 0.0;
    for (double c : want.coeffs) scale = std::max(scale, std::abs(c));
    for (std::size_t j = 0; j < want.size(); ++j) CHECK(std::abs(sol.blocks[0].coeffs[j] - want.coeffs[j]) <= 1e-13 * scale);
  }
}

TEST_CASE("two-interval constant forcing against a fine reference") {
  const auto ref = solve(make_spec(0.3, kTwoGap, "constant:1", 64));
  const struct {
    std::size_t n;
    double expected;
  } rows[] = {{8, 9.3134e-05}, {16, 3.1795e-08}, {28, 1.4699e-13}};
  for (const auto& r : rows) {
    const auto sol = solve(make_spec(0.3, kTwoGap, "constant:1", r.n));
    const double err = rel_l2s(sol, ref);
    INFO("N = " << r.n << ", error " << err);
    CHECK(std::abs(std::log10(err / r.expected)) <= 1.0);
    CHECK(sol.gmres_iterations <= 8);
    CHECK(sol.final_residual <= 1e-13);
  }
}

TEST_CASE("gmres iteration count does not grow with N") {
  for (double s : {0.25, 0.5, 0.75}) {
    const auto coarse = solve(make_spec(s, kTwoGap, "runge", 8));
    const auto fine = solve(make_spec(s, kTwoGap, "runge", 64));
    INFO("s = " << s);
    CHECK(fine.gmres_iterations <= coarse.gmres_iterations + 2);
  }
}

TEST_CASE("mirror-symmetric problems give mirrored blocks") {
  for (double s : {0.3, 0.5, 0.7}) {
    const auto sol = solve(make_spec(s, {Interval(-3.0, -1.0), Interval(-0.5, 0.5), Interval(1.0, 3.0)}, "runge", 30));
    const auto& l = sol.blocks[0].coeffs;
    const auto& r = sol.blocks[2].coeffs;
    const auto& m = sol.blocks[1].coeffs;
    double scale = 0.0;
    for (double c : l) scale = std::max(scale, std::abs(c));
    for (std::size_t j = 0; j < l.size(); ++j) {
      const double sign = j % 2 == 0 ? 1.0 : -1.0;
      CHECK(std::abs(l[j] - sign * r[j]) <= 1e-11 * scale);
      if (j % 2 == 1) CHECK(std::abs(m[j]) <= 1e-11 * scale);
    }
    CHECK(sol.u(-2.2) == doctest::Approx(sol.u(2.2)).epsilon(1e-11));
  }
}

TEST_CASE("distant intervals decouple") {
  const double s = 0.4;
  const auto pair = solve(make_spec(s, {Interval(-1.0, 0.0), Interval(1e6, 1e6 + 1.0)}, "constant:1", 16));
  const auto alone = solve(make_spec(s, {Interval(-1.0, 0.0)}, "constant:1", 16));
  const double diff = error_between(pair.blocks[0], alone.blocks[0], 0.0) / hrs_norm(alone.blocks[0], 0.0);
  CHECK(diff <= 1e-6);
  CHECK(diff > 0.0);
}

TEST_CASE("solution accessors") {
  const auto sol = solve(make_spec(0.5, kTwoGap, "constant:1", 12));
  CHECK(sol.u(0.0) == 0.0);
  CHECK(sol.u(-2.0) == 0.0);
  CHECK(sol.phi(1.5) == 0.0);
  const double x = 0.4;
  CHECK(sol.u(x) == doctest::Approx(std::sqrt((x - 0.08) * (1.0 - x)) * sol.phi(x)).epsilon(1e-14));
  // The two-interval solution lies above the isolated one.
  const auto alone = solve(make_spec(0.5, {Interval(0.08, 1.0)}, "constant:1", 12));
  CHECK(sol.u(x) > alone.u(x));
}

TEST_CASE("domain validation") {
  CHECK_NOTHROW(Domain({Interval(-1.0, 0.0), Interval(0.5, 1.0)}));
  for (const auto& bad : {std::vector<Interval>{Interval(-1.0, 0.5), Interval(0.2, 1.0)},
                          std::vector<Interval>{Interval(-1.0, 0.0), Interval(0.0, 1.0)},
                          std::vector<Interval>{Interval(2.0, 3.0), Interval(0.0, 1.0)}, std::vector<Interval>{}}) {
    CHECK_THROWS_AS(Domain{bad}, ConfigError);
  }
  try {
    Domain({Interval(-1.0, 0.0), Interval(1.0, 2.0), Interval(1.5, 3.0)});
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("intervals 1") != std::string::npos);
    CHECK(msg.find("and 2") != std::string::npos);
  }
  const Domain d({Interval(-1.0, 0.0), Interval(1.0, 2.0)});
  CHECK(d.locate(-0.5) == 0u);
  CHECK(d.locate(1.5) == 1u);
  CHECK_FALSE(d.locate(0.5).has_value());
}

TEST_CASE("right-hand side parsing") {
  const Domain d({Interval(-1.0, 1.0)});
  const SExponent s(0.5);
  CHECK(RightHandSide::parse("constant")(0.3, d, s) == 1.0);
  CHECK(RightHandSide::parse("constant:2.5")(0.3, d, s) == 2.5);
  CHECK(RightHandSide::parse("runge")(0.2, d, s) == doctest::Approx(20.0));
  CHECK(RightHandSide::parse("absx")(-0.7, d, s) == doctest::Approx(0.7));
  CHECK(RightHandSide::parse("polynomial:1,0,3")(2.0, d, s) == doctest::Approx(13.0));
  const double mode = RightHandSide::parse("gegenbauer-mode:3")(0.4, d, s);
  CHECK(rel_err(mode, eval_gegenbauer(3, 1.0, 0.4) / gegenbauer_norm_h(3, s)) < 1e-14);
  for (const char* bad : {"", "nonsense", "constant:abc", "polynomial:", "gegenbauer-mode:-1", "table:/no/such/file"}) {
    INFO(bad);
    CHECK_THROWS_AS(RightHandSide::parse(bad), ConfigError);
  }
  CHECK(RightHandSide::parse("runge").accuracy_warning().empty());
}

TEST_CASE("tabulated right-hand side") {
  const auto path = std::filesystem::temp_directory_path() / "fraclap_rhs_table.csv";
  {
    std::ofstream out(path);
    out << "x,f\n# cubic samples\n";
    for (int i = 0; i <= 20; ++i) {
      const double x = -1.0 + i / 10.0;
      out << x << ',' << 1.0 + x - 2.0 * x * x * x << '\n';
    }
  }
  const auto rhs = RightHandSide::parse("table:" + path.string());
  CHECK_FALSE(rhs.accuracy_warning().empty());
  const Domain d({Interval(-1.0, 1.0)});
  for (double x : {-0.97, -0.33, 0.0, 0.51, 0.99}) {
    CHECK(rhs(x, d, SExponent(0.5)) == doctest::Approx(1.0 + x - 2.0 * x * x * x).epsilon(1e-13));
  }
  {
    std::ofstream out(path);
    out << "0 1\n1 2\n0.5 3\n2 4\n";
  }
  CHECK_THROWS_AS(RightHandSide::parse("table:" + path.string()), ConfigError);
}

TEST_CASE("solve surfaces GMRES failure with its residual history") {
  auto spec = make_spec(0.5, kTwoGap, "constant:1", 16);
  spec.gmres_maxit = 1;
  try {
    solve(spec);
    FAIL("expected a ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.history().size() == 2);
    CHECK(e.history().back() > spec.gmres_tol);
  }
}
