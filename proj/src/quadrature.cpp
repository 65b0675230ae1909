#include "fraclap/quadrature.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "fraclap/errors.hpp"
#include "fraclap/specfun.hpp"

namespace fraclap {
namespace {

constexpr char kMagic[8] = {'G', 'J', 'R', 'U', 'L', 'E', '0', '1'};

// Implicit QL on a symmetric tridiagonal matrix. diag and off (off[i] couples
// i and i+1, off[n-1] = 0) are overwritten; first_row starts as e_1 and ends
// as the first components of the orthonormal eigenvectors.
void tridiagonal_ql_first_row(std::vector<double>& diag, std::vector<double>& off,
                              std::vector<double>& first_row) {
  const std::size_t n = diag.size();
  constexpr int kMaxSweeps = 60;
  const double eps = std::numeric_limits<double>::epsilon();

  for (std::size_t l = 0; l < n; ++l) {
    int sweeps = 0;
    while (true) {
      std::size_t m = l;
      for (; m + 1 < n; ++m) {
        const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
        if (std::abs(off[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++sweeps > kMaxSweeps) {
        throw ConvergenceError("gauss_jacobi: QL iteration did not converge for eigenvalue index " +
                               std::to_string(l));
      }

      double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
      double r = std::hypot(g, 1.0);
      g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        double f = s * off[i];
        const double b = c * off[i];
        r = std::hypot(f, g);
        off[i + 1] = r;
        if (r == 0.0) {
          diag[i + 1] -= p;
          off[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = diag[i + 1] - p;
        r = (diag[i] - g) * s + 2.0 * c * b;
        p = s * r;
        diag[i + 1] = g + p;
        g = c * r - b;

        f = first_row[i + 1];
        first_row[i + 1] = s * first_row[i] + c * f;
        first_row[i] = c * first_row[i] - s * f;
      }
      if (underflow) continue;
      diag[l] -= p;
      off[l] = g;
      off[m] = 0.0;
    }
  }
}

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xffu);
  os.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char buf[8];
  if (!is.read(reinterpret_cast<char*>(buf), 8)) {
    throw ConfigError("quadrature cache: truncated file");
  }
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

void put_f64(std::ostream& os, double x) { put_u64(os, std::bit_cast<std::uint64_t>(x)); }
double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

}  // namespace

double jacobi_total_mass(double alpha) {
  if (!(alpha > -1.0)) throw DomainError("jacobi_total_mass: alpha must exceed -1");
  return std::sqrt(std::numbers::pi) * gamma_ratio(alpha + 1.0, alpha + 1.5);
}

QuadratureRule gauss_jacobi(std::size_t n, double alpha) {
  if (!(alpha > -1.0)) throw DomainError("gauss_jacobi: alpha must exceed -1");
  const std::size_t npts = n + 1;

  // Monic recurrence for weight (1-x^2)^alpha: zero diagonal and
  // b_k = k (k + 2 alpha) / ((2k + 2 alpha + 1)(2k + 2 alpha - 1)).
  std::vector<double> diag(npts, 0.0), off(npts, 0.0), first(npts, 0.0);
  for (std::size_t k = 1; k < npts; ++k) {
    const double kd = static_cast<double>(k);
    const double bk = (k == 1)
                          ? 1.0 / (2.0 * alpha + 3.0)
                          : kd * (kd + 2.0 * alpha) /
                                ((2.0 * kd + 2.0 * alpha + 1.0) * (2.0 * kd + 2.0 * alpha - 1.0));
    off[k - 1] = std::sqrt(bk);
  }
  first[0] = 1.0;
  tridiagonal_ql_first_row(diag, off, first);

  const double mass = jacobi_total_mass(alpha);
  std::vector<std::size_t> order(npts);
  for (std::size_t i = 0; i < npts; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return diag[i] < diag[j]; });

  QuadratureRule rule;
  rule.alpha = alpha;
  rule.nodes.resize(npts);
  rule.weights.resize(npts);
  for (std::size_t i = 0; i < npts; ++i) {
    rule.nodes[i] = diag[order[i]];
    rule.weights[i] = mass * first[order[i]] * first[order[i]];
  }

  for (std::size_t i = 0, j = npts - 1; i < j; ++i, --j) {
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (npts % 2 == 1) rule.nodes[npts / 2] = 0.0;
  return rule;
}

MappedRule map_to_interval(const QuadratureRule& rule, Interval interval) {
  MappedRule mapped{interval, rule, {}, {}};
  const double half = 0.5 * interval.length();
  const double scale = std::pow(half, 2.0 * rule.alpha + 1.0);
  mapped.nodes.reserve(rule.size());
  mapped.weights.reserve(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    mapped.nodes.push_back(interval.midpoint() + half * rule.nodes[i]);
    mapped.weights.push_back(scale * rule.weights[i]);
  }
  return mapped;
}

void write_rule(std::ostream& os, const QuadratureRule& rule) {
  os.write(kMagic, sizeof kMagic);
  put_u64(os, rule.size());
  put_f64(os, rule.alpha);
  for (double x : rule.nodes) put_f64(os, x);
  for (double w : rule.weights) put_f64(os, w);
}

QuadratureRule read_rule(std::istream& is) {
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw ConfigError("quadrature cache: bad magic");
  }
  const std::uint64_t count = get_u64(is);
  if (count == 0 || count > (std::uint64_t{1} << 32)) {
    throw ConfigError("quadrature cache: implausible point count");
  }
  QuadratureRule rule;
  rule.alpha = get_f64(is);
  rule.nodes.resize(count);
  rule.weights.resize(count);
  for (auto& x : rule.nodes) x = get_f64(is);
  for (auto& w : rule.weights) w = get_f64(is);
  return rule;
}

RuleCache::RuleCache(std::filesystem::path directory) : directory_(std::move(directory)) {}

std::filesystem::path RuleCache::file_for(std::size_t n, double alpha) const {
  std::ostringstream name;
  name << "gj_n" << (n + 1) << "_a" << std::hex << std::setw(16) << std::setfill('0')
       << std::bit_cast<std::uint64_t>(alpha) << ".bin";
  return directory_ / name.str();
}

QuadratureRule RuleCache::get(std::size_t n, double alpha) {
  std::lock_guard lock(mutex_);
  const auto key = std::make_pair(n, alpha);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  QuadratureRule rule;
  bool loaded = false;
  if (!directory_.empty()) {
    const auto path = file_for(n, alpha);
    if (std::ifstream in(path, std::ios::binary); in) {
      try {
        rule = read_rule(in);
        loaded = rule.size() == n + 1 && rule.alpha == alpha;
      } catch (const ConfigError&) {
        loaded = false;
      }
    }
  }
  if (!loaded) {
    rule = gauss_jacobi(n, alpha);
    if (!directory_.empty()) {
      std::filesystem::create_directories(directory_);
      std::ofstream out(file_for(n, alpha), std::ios::binary | std::ios::trunc);
      if (out) write_rule(out, rule);
    }
  }
  memo_.emplace(key, rule);
  return rule;
}

}  // namespace fraclap
