#include "fraclap/multi_interval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fraclap/errors.hpp"
#include "fraclap/operator_core.hpp"

namespace fraclap {
namespace {

double norm2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

#ifndef NDEBUG
void check_linearity(const LinearMap& apply_a, std::size_t n) {
  std::mt19937_64 gen(0x5eed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> u(n), v(n), w(n), au(n), av(n), aw(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = dist(gen);
    v[i] = dist(gen);
    w[i] = u[i] + v[i];
  }
  apply_a(u, au);
  apply_a(v, av);
  apply_a(w, aw);
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    diff = std::max(diff, std::abs(aw[i] - au[i] - av[i]));
    scale = std::max({scale, std::abs(au[i]), std::abs(av[i])});
  }
  if (diff > 1e-8 * std::max(scale, 1.0)) throw DomainError("gmres: operator is not linear");
}
#endif

}  // namespace

GmresResult gmres(const LinearMap& apply_a, std::span<const double> rhs, double tol,
                  std::size_t maxit) {
  const std::size_t n = rhs.size();
  GmresResult out;
  out.x.assign(n, 0.0);
  const double beta = norm2(rhs);
  out.residual_history.push_back(beta > 0.0 ? 1.0 : 0.0);
  if (beta == 0.0) {
    out.converged = true;
    return out;
  }
#ifndef NDEBUG
  check_linearity(apply_a, n);
#endif
  maxit = maxit == 0 ? n : std::min(maxit, n);

  std::vector<std::vector<double>> basis;
  basis.emplace_back(rhs.begin(), rhs.end());
  for (double& x : basis[0]) x /= beta;

  // Column j of the Hessenberg matrix is h[j][0..j+1].
  std::vector<std::vector<double>> h;
  std::vector<double> cs, sn;
  std::vector<double> g{beta};

  std::size_t m = 0;
  bool breakdown = false;
  while (m < maxit) {
    std::vector<double> w(n);
    apply_a(basis[m], w);
    std::vector<double> col(m + 2, 0.0);
    for (std::size_t i = 0; i <= m; ++i) {
      col[i] = dot(w, basis[i]);
      for (std::size_t k = 0; k < n; ++k) w[k] -= col[i] * basis[i][k];
    }
    col[m + 1] = norm2(w);

    for (std::size_t i = 0; i < m; ++i) {
      const double t = cs[i] * col[i] + sn[i] * col[i + 1];
      col[i + 1] = -sn[i] * col[i] + cs[i] * col[i + 1];
      col[i] = t;
    }
    const double r = std::hypot(col[m], col[m + 1]);
    const double c = r == 0.0 ? 1.0 : col[m] / r;
    const double sv = r == 0.0 ? 0.0 : col[m + 1] / r;
    cs.push_back(c);
    sn.push_back(sv);
    const double hm1 = col[m + 1];
    col[m] = r;
    col[m + 1] = 0.0;
    g.push_back(-sv * g[m]);
    g[m] = c * g[m];
    h.push_back(std::move(col));
    ++m;

    const double rel = std::abs(g[m]) / beta;
    out.residual_history.push_back(rel);
    if (rel <= tol) break;
    if (hm1 <= 1e-14 * beta) {
      breakdown = true;
      break;
    }
    for (double& x : w) x /= hm1;
    basis.push_back(std::move(w));
  }

  std::vector<double> y(m, 0.0);
  for (std::size_t i = m; i-- > 0;) {
    double acc = g[i];
    for (std::size_t j = i + 1; j < m; ++j) acc -= h[j][i] * y[j];
    y[i] = h[i][i] != 0.0 ? acc / h[i][i] : 0.0;
  }
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < n; ++k) out.x[k] += y[j] * basis[j][k];
  }
  out.iterations = m;
  out.converged = out.residual_history.back() <= tol || breakdown;
  return out;
}

std::vector<double> apply_offdiagonal(const std::vector<std::vector<double>>& phi_nodes,
                                      const std::vector<MappedRule>& rules, SExponent s) {
  if (phi_nodes.size() != rules.size()) {
    throw DomainError("apply_offdiagonal: one value block per rule expected");
  }
  std::size_t total = 0;
  for (std::size_t l = 0; l < rules.size(); ++l) {
    if (phi_nodes[l].size() != rules[l].size()) {
      throw DomainError("apply_offdiagonal: block size does not match its rule");
    }
    if (rules[l].reference.alpha != s.value()) {
      throw DomainError("apply_offdiagonal: rule exponent differs from s");
    }
    total += rules[l].size();
  }
  const double c1 = NormConstants::of(s).c1;
  const double p = -1.0 - 2.0 * s.value();

  std::vector<std::vector<double>> weighted(rules.size());
  for (std::size_t l = 0; l < rules.size(); ++l) {
    weighted[l].resize(rules[l].size());
    for (std::size_t i = 0; i < rules[l].size(); ++i) {
      weighted[l][i] = phi_nodes[l][i] * rules[l].weights[i];
    }
  }

  std::vector<double> out(total, 0.0);
  std::size_t offset = 0;
  for (std::size_t j = 0; j < rules.size(); ++j) {
    for (std::size_t k = 0; k < rules[j].size(); ++k) {
      const double x = rules[j].nodes[k];
      double acc = 0.0;
      for (std::size_t l = 0; l < rules.size(); ++l) {
        if (l == j) continue;
        for (std::size_t i = 0; i < rules[l].size(); ++i) {
          acc += std::pow(std::abs(x - rules[l].nodes[i]), p) * weighted[l][i];
        }
      }
      out[offset + k] = -c1 * acc;
    }
    offset += rules[j].size();
  }
  return out;
}

std::vector<double> apply_offdiagonal(const std::vector<GegenbauerCoeffs>& phi,
                                      const std::vector<MappedRule>& rules, SExponent s) {
  if (phi.size() != rules.size()) {
    throw DomainError("apply_offdiagonal: one coefficient block per rule expected");
  }
  std::vector<std::vector<double>> values(phi.size());
  for (std::size_t l = 0; l < phi.size(); ++l) {
    values[l] = evaluate_expansion_reference(phi[l], rules[l].reference.nodes);
  }
  return apply_offdiagonal(values, rules, s);
}

double MultiSolution::phi(double x) const {
  for (const auto& block : blocks) {
    if (block.interval.a < x && x < block.interval.b) return evaluate_expansion(block, x);
  }
  return 0.0;
}

double MultiSolution::u(double x) const {
  for (const auto& block : blocks) {
    const Interval& iv = block.interval;
    if (iv.a < x && x < iv.b) {
      return std::pow((x - iv.a) * (iv.b - x), s.value()) * evaluate_expansion(block, x);
    }
  }
  return 0.0;
}

MultiSolution solve(const ProblemSpec& spec) {
  spec.validate();
  const SExponent s = spec.s;
  const Domain& domain = spec.domain;
  const std::size_t m = domain.size();

  std::vector<MappedRule> rules;
  std::vector<TransformTable> tables;
  std::vector<std::size_t> offsets{0};
  rules.reserve(m);
  tables.reserve(m);
  for (std::size_t l = 0; l < m; ++l) {
    rules.push_back(map_to_interval(gauss_jacobi(spec.resolution(l), s.value()), domain[l]));
    tables.emplace_back(rules.back().reference, s);
    offsets.push_back(offsets.back() + rules.back().size());
  }
  const std::size_t total = offsets.back();

  std::vector<std::vector<double>> lambda(m);
  for (std::size_t l = 0; l < m; ++l) {
    lambda[l].resize(rules[l].size());
    for (std::size_t j = 0; j < lambda[l].size(); ++j) lambda[l][j] = eigenvalue_lambda(j, s);
  }

  // Node values -> K^{-1} applied blockwise -> node values.
  auto precondition = [&](std::span<const double> in, std::span<double> out) {
    std::vector<double> coeffs;
    for (std::size_t l = 0; l < m; ++l) {
      const std::size_t len = rules[l].size();
      coeffs.assign(len, 0.0);
      tables[l].forward(in.subspan(offsets[l], len), coeffs);
      for (std::size_t j = 0; j < len; ++j) coeffs[j] /= lambda[l][j];
      tables[l].inverse(coeffs, out.subspan(offsets[l], len));
    }
  };

  std::vector<double> f(total);
  for (std::size_t l = 0; l < m; ++l) {
    for (std::size_t i = 0; i < rules[l].size(); ++i) {
      const double x = rules[l].nodes[i];
      f[offsets[l] + i] = spec.rhs(x, domain, s);
      if (!std::isfinite(f[offsets[l] + i])) {
        throw DomainError("right-hand side is not finite at x = " + std::to_string(x));
      }
    }
  }
  std::vector<double> b(total);
  precondition(f, b);

  MultiSolution sol;
  sol.s = s;
  sol.domain = domain;
  std::vector<double> y = b;
  if (m > 1) {
    auto apply_a = [&](std::span<const double> in, std::span<double> out) {
      std::vector<std::vector<double>> blocks(m);
      for (std::size_t l = 0; l < m; ++l) {
        blocks[l].assign(in.begin() + offsets[l], in.begin() + offsets[l + 1]);
      }
      const std::vector<double> r = apply_offdiagonal(blocks, rules, s);
      precondition(r, out);
      for (std::size_t i = 0; i < total; ++i) out[i] += in[i];
    };
    const std::size_t maxit = spec.gmres_maxit == 0 ? total : spec.gmres_maxit;
    GmresResult res = gmres(apply_a, b, spec.gmres_tol, maxit);
    if (!res.converged) {
      throw ConvergenceError("GMRES did not reach the requested tolerance in " +
                                 std::to_string(res.iterations) + " iterations",
                             res.residual_history);
    }
    y = std::move(res.x);
    sol.gmres_iterations = res.iterations;
    sol.final_residual = res.residual_history.back();
    sol.residual_history = std::move(res.residual_history);
  }

  for (std::size_t l = 0; l < m; ++l) {
    std::vector<double> c(rules[l].size());
    tables[l].forward(std::span<const double>(y).subspan(offsets[l], c.size()), c);
    sol.blocks.emplace_back(s.value(), domain[l], std::move(c));
  }
  return sol;
}

}  // namespace fraclap
