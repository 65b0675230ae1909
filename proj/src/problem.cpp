#include "fraclap/problem.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "fraclap/errors.hpp"
#include "fraclap/gegenbauer.hpp"

namespace fraclap {
namespace {

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string describe(const Interval& iv) { return "(" + shortest(iv.a) + ", " + shortest(iv.b) + ")"; }

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("not a number: '" + item + "'");
    }
  }
  return out;
}

rhs::Tabulated load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open rhs table '" + path + "'");
  rhs::Tabulated t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double x = 0.0, f = 0.0;
    if (!(ls >> x >> f)) continue;  // header row
    t.x.push_back(x);
    t.f.push_back(f);
  }
  if (t.x.size() < 4) throw ConfigError("rhs table '" + path + "' needs at least 4 samples");
  for (std::size_t i = 1; i < t.x.size(); ++i) {
    if (!(t.x[i] > t.x[i - 1])) throw ConfigError("rhs table abscissae must increase");
  }
  return t;
}

double interpolate_cubic(const rhs::Tabulated& t, double x) {
  const std::size_t n = t.x.size();
  auto it = std::upper_bound(t.x.begin(), t.x.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - t.x.begin());
  std::size_t start = hi < 2 ? 0 : std::min(hi - 2, n - 4);
  double acc = 0.0;
  for (std::size_t i = start; i < start + 4; ++i) {
    double li = 1.0;
    for (std::size_t j = start; j < start + 4; ++j) {
      if (j != i) li *= (x - t.x[j]) / (t.x[i] - t.x[j]);
    }
    acc += li * t.f[i];
  }
  return acc;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Domain::Domain(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  if (intervals_.empty()) throw ConfigError("domain needs at least one interval");
  for (std::size_t i = 0; i + 1 < intervals_.size(); ++i) {
    if (!(intervals_[i].b < intervals_[i + 1].a)) {
      throw ConfigError("intervals " + std::to_string(i) + " " + describe(intervals_[i]) +
                        " and " + std::to_string(i + 1) + " " + describe(intervals_[i + 1]) +
                        " overlap, touch, or are out of order");
    }
  }
}

std::optional<std::size_t> Domain::locate(double x) const noexcept {
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (intervals_[i].a <= x && x <= intervals_[i].b) return i;
  }
  return std::nullopt;
}

RightHandSide::RightHandSide(Variant v) : impl_(std::move(v)) {}

RightHandSide RightHandSide::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string params = colon == std::string::npos ? "" : text.substr(colon + 1);

  if (name == "constant") {
    if (params.empty()) return RightHandSide(rhs::Constant{1.0});
    const auto v = parse_number_list(params);
    if (v.size() != 1) throw ConfigError("constant takes one value");
    return RightHandSide(rhs::Constant{v[0]});
  }
  if (name == "runge") return RightHandSide(rhs::Runge{});
  if (name == "absx") return RightHandSide(rhs::AbsX{});
  if (name == "polynomial") {
    auto v = parse_number_list(params);
    if (v.empty()) throw ConfigError("polynomial needs coefficients");
    return RightHandSide(rhs::Monomials{std::move(v)});
  }
  if (name == "gegenbauer-mode") {
    const auto v = parse_number_list(params);
    if (v.size() != 1 || v[0] < 0 || v[0] != std::floor(v[0])) {
      throw ConfigError("gegenbauer-mode takes a nonnegative integer");
    }
    return RightHandSide(rhs::GegenbauerMode{static_cast<std::size_t>(v[0])});
  }
  if (name == "table") {
    if (params.empty()) throw ConfigError("table needs a path");
    RightHandSide r(load_table(params));
    r.source_ = params;
    return r;
  }
  throw ConfigError("unknown rhs '" + name + "'");
}

double RightHandSide::operator()(double x, const Domain& domain, SExponent s) const {
  return std::visit(
      Overloaded{
          [](const rhs::Constant& c) { return c.value; },
          [x](const rhs::Runge&) { return 1.0 / (x * x + 0.01); },
          [x](const rhs::AbsX&) { return std::abs(x); },
          [x](const rhs::Monomials& p) {
            double acc = 0.0;
            for (std::size_t k = p.coeffs.size(); k-- > 0;) acc = acc * x + p.coeffs[k];
            return acc;
          },
          [&](const rhs::GegenbauerMode& m) {
            const auto idx = domain.locate(x);
            if (!idx) throw DomainError("rhs evaluated outside the domain");
            const double t = domain[*idx].to_reference(x);
            return eval_gegenbauer(m.k, s.value() + 0.5, t) / gegenbauer_norm_h(m.k, s);
          },
          [x](const rhs::Tabulated& t) { return interpolate_cubic(t, x); },
      },
      impl_);
}

std::string RightHandSide::label() const {
  return std::visit(
      Overloaded{
          [](const rhs::Constant& c) {
            std::ostringstream os;
            os.precision(17);
            os << "constant:" << c.value;
            return os.str();
          },
          [](const rhs::Runge&) { return std::string("runge"); },
          [](const rhs::AbsX&) { return std::string("absx"); },
          [](const rhs::Monomials& p) {
            std::ostringstream os;
            os.precision(17);
            os << "polynomial:";
            for (std::size_t k = 0; k < p.coeffs.size(); ++k) os << (k ? "," : "") << p.coeffs[k];
            return os.str();
          },
          [](const rhs::GegenbauerMode& m) { return "gegenbauer-mode:" + std::to_string(m.k); },
          [this](const rhs::Tabulated&) { return "table:" + source_; },
      },
      impl_);
}

std::string RightHandSide::accuracy_warning() const {
  if (std::holds_alternative<rhs::Tabulated>(impl_)) {
    return "rhs is tabulated; values at quadrature nodes come from a cubic interpolant and "
           "spectral accuracy is lost";
  }
  return {};
}

std::size_t ProblemSpec::resolution(std::size_t interval) const {
  return n.size() == 1 ? n.front() : n.at(interval);
}

void ProblemSpec::validate() const {
  if (n.empty()) throw ConfigError("resolution list is empty");
  if (n.size() != 1 && n.size() != domain.size()) {
    throw ConfigError("got " + std::to_string(n.size()) + " resolutions for " +
                      std::to_string(domain.size()) + " intervals");
  }
  for (std::size_t v : n) {
    if (v < 1) throw ConfigError("resolution n must be at least 1");
  }
  if (!(gmres_tol >= std::numeric_limits<double>::epsilon() && gmres_tol < 1.0)) {
    throw ConfigError("gmres tolerance must lie in [2.2e-16, 1)");
  }
}

}  // namespace fraclap
