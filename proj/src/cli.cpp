#include "fraclap/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fraclap/errors.hpp"
#include "fraclap/gegenbauer.hpp"
#include "fraclap/operator_core.hpp"
#include "fraclap/oracle.hpp"

namespace fraclap::cli {
namespace {

using nlohmann::json;
namespace pt = boost::property_tree;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15e", v);
  return buf;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("not an integer: '" + item + "'");
    }
    if (v < 1 || item.find_first_not_of(" \t", used) != std::string::npos) {
      throw ConfigError("resolution must be a positive integer: '" + item + "'");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

template <class T>
T get_value(const pt::ptree& node, const std::string& key) {
  try {
    return node.get<T>(key);
  } catch (const pt::ptree_error& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void open_for_write(std::ofstream& os, const std::filesystem::path& p) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  os.open(p);
  if (!os) throw ConfigError("cannot write '" + p.string() + "'");
}

json fit_to_json(const OrderFit& f) {
  return {{"order", f.order}, {"tail_order", f.tail_order}, {"super_algebraic", f.super_algebraic}};
}

}  // namespace

SpecOverrides read_config(std::istream& is) {
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  SpecOverrides out;
  std::vector<std::size_t> per_interval;
  std::size_t sections = 0;
  for (const auto& [key, node] : tree) {
    if (!node.empty()) {
      if (key.rfind("interval", 0) != 0) throw ConfigError("unknown config section [" + key + "]");
      ++sections;
      const double a = get_value<double>(node, "a");
      const double b = get_value<double>(node, "b");
      if (!(a < b)) throw ConfigError("interval [" + key + "] needs a < b");
      out.intervals.emplace_back(a, b);
      if (auto n = node.get_optional<std::string>("n")) {
        const auto v = parse_sizes(*n);
        if (v.size() != 1) throw ConfigError("interval [" + key + "] takes a single n");
        per_interval.push_back(v[0]);
      }
      for (const auto& [k, _] : node) {
        if (k != "a" && k != "b" && k != "n") throw ConfigError("unknown key '" + k + "' in [" + key + "]");
      }
      continue;
    }
    const std::string value = node.data();
    if (key == "s") {
      out.s = get_value<double>(tree, key);
    } else if (key == "rhs") {
      out.rhs = value;
    } else if (key == "n") {
      out.n = parse_sizes(value);
    } else if (key == "gmres_tol") {
      out.gmres_tol = get_value<double>(tree, key);
    } else if (key == "ref_n") {
      out.ref_n = get_value<std::size_t>(tree, key);
    } else if (key == "out") {
      out.out = value;
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  if (!per_interval.empty()) {
    if (per_interval.size() != sections) throw ConfigError("either every interval section sets n or none does");
    if (!out.n.empty()) throw ConfigError("n given both globally and per interval");
    out.n = per_interval;
  }
  return out;
}

SpecOverrides read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  return read_config(in);
}

ProblemSpec resolve_spec(const SpecOverrides& file, const SpecOverrides& flags) {
  ProblemSpec spec;
  double s = 0.5;
  std::vector<Interval> intervals{Interval(-1.0, 1.0)};
  std::string rhs = "constant:1";
  for (const SpecOverrides* o : {&file, &flags}) {
    if (o->s) s = *o->s;
    if (!o->intervals.empty()) intervals = o->intervals;
    if (o->rhs) rhs = *o->rhs;
    if (!o->n.empty()) spec.n = o->n;
    if (o->gmres_tol) spec.gmres_tol = *o->gmres_tol;
    if (o->out) spec.output_prefix = *o->out;
  }
  try {
    spec.s = SExponent(s);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  // Intervals may be listed in any order; per-interval resolutions follow them.
  std::vector<std::size_t> order(intervals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return intervals[i].a < intervals[j].a; });
  std::vector<Interval> sorted;
  for (std::size_t i : order) sorted.push_back(intervals[i]);
  if (spec.n.size() == intervals.size() && spec.n.size() > 1) {
    std::vector<std::size_t> n;
    for (std::size_t i : order) n.push_back(spec.n[i]);
    spec.n = std::move(n);
  }
  spec.domain = Domain(std::move(sorted));
  spec.rhs = RightHandSide::parse(rhs);
  spec.validate();
  return spec;
}

json spec_to_json(const ProblemSpec& spec) {
  json iv = json::array();
  for (const auto& i : spec.domain.intervals()) iv.push_back({i.a, i.b});
  return {{"s", spec.s.value()},
          {"intervals", iv},
          {"rhs", spec.rhs.label()},
          {"n", spec.n},
          {"gmres_tol", spec.gmres_tol},
          {"gmres_maxit", spec.gmres_maxit},
          {"out", spec.output_prefix}};
}

ProblemSpec spec_from_json(const json& j) {
  try {
    ProblemSpec spec;
    spec.s = SExponent(j.at("s").get<double>());
    std::vector<Interval> iv;
    for (const auto& p : j.at("intervals")) iv.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    spec.domain = Domain(std::move(iv));
    spec.rhs = RightHandSide::parse(j.at("rhs").get<std::string>());
    spec.n = j.at("n").get<std::vector<std::size_t>>();
    spec.gmres_tol = j.at("gmres_tol").get<double>();
    spec.gmres_maxit = j.value("gmres_maxit", std::size_t{0});
    spec.output_prefix = j.value("out", spec.output_prefix);
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("spec json: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("spec json: ") + e.what());
  }
}

json solution_to_json(const ProblemSpec& spec, const MultiSolution& sol) {
  json intervals = json::array();
  for (const auto& b : sol.blocks) {
    intervals.push_back({{"a", b.interval.a},
                         {"b", b.interval.b},
                         {"n", b.size() - 1},
                         {"phi_coeffs", b.coeffs}});
  }
  return {{"s", sol.s.value()},
          {"intervals", intervals},
          {"gmres", {{"iterations", sol.gmres_iterations}, {"residual", sol.final_residual}}},
          {"version", "1"},
          {"spec", spec_to_json(spec)}};
}

double relative_error(const MultiSolution& sol, const MultiSolution& ref, double r) {
  if (sol.blocks.size() != ref.blocks.size()) throw DomainError("relative_error: block count differs");
  double num = 0.0, den = 0.0;
  for (std::size_t l = 0; l < sol.blocks.size(); ++l) {
    const double e = error_between(sol.blocks[l], ref.blocks[l], r);
    const double n = hrs_norm(ref.blocks[l], r);
    num += e * e;
    den += n * n;
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

SolveOutput cmd_solve(const ProblemSpec& spec) {
  SolveOutput out;
  const auto t0 = std::chrono::steady_clock::now();
  out.solution = solve(spec);
  out.seconds = seconds_since(t0);

  out.json_path = spec.output_prefix + "_solution.json";
  out.csv_path = spec.output_prefix + "_samples.csv";
  std::ofstream js;
  open_for_write(js, out.json_path);
  js << solution_to_json(spec, out.solution).dump(2) << '\n';

  std::ofstream csv;
  open_for_write(csv, out.csv_path);
  csv << "x,u,phi\n";
  const double sv = spec.s.value();
  constexpr int kSamples = 1000;
  for (const auto& block : out.solution.blocks) {
    const Interval& iv = block.interval;
    for (int i = 0; i < kSamples; ++i) {
      const double x = i == kSamples - 1 ? iv.b : iv.a + iv.length() * i / (kSamples - 1);
      const double phi = evaluate_expansion(block, x);
      const double u = std::pow(std::max(0.0, (x - iv.a) * (iv.b - x)), sv) * phi;
      csv << fmt(x) << ',' << fmt(u) << ',' << fmt(phi) << '\n';
    }
  }
  return out;
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& report) {
  os << "N,err_L2s,err_H2ss,seconds\n";
  for (const auto& r : report.rows) {
    os << r.n << ',' << fmt(r.err_l2s) << ',' << fmt(r.err_h2ss) << ',' << fmt(r.seconds) << '\n';
  }
}

ConvergenceReport cmd_convergence(const ProblemSpec& spec, std::vector<std::size_t> ns,
                                  std::optional<std::size_t> ref_n) {
  if (ns.size() < 3) throw ConfigError("convergence needs at least 3 values of N");
  if (!std::is_sorted(ns.begin(), ns.end()) ||
      std::adjacent_find(ns.begin(), ns.end()) != ns.end()) {
    throw ConfigError("convergence N list must be strictly ascending");
  }
  ConvergenceReport report;
  report.s = spec.s.value();
  for (const auto& iv : spec.domain.intervals()) report.domain.emplace_back(iv.a, iv.b);
  report.rhs_label = spec.rhs.label();
  report.reference_n = ref_n.value_or(reference_resolution(ns.back()));
  if (report.reference_n <= ns.back()) throw ConfigError("reference N must exceed every N in the sweep");

  ProblemSpec work = spec;
  work.n = {report.reference_n};
  const MultiSolution ref = solve(work);
  const double r2s = 2.0 * spec.s.value();
  std::vector<double> nd, e0, e2;
  for (std::size_t n : ns) {
    work.n = {n};
    const auto t0 = std::chrono::steady_clock::now();
    const MultiSolution sol = solve(work);
    ConvergenceRow row{n, relative_error(sol, ref, 0.0), relative_error(sol, ref, r2s), seconds_since(t0)};
    report.rows.push_back(row);
    nd.push_back(static_cast<double>(n));
    e0.push_back(row.err_l2s);
    e2.push_back(row.err_h2ss);
  }
  auto safe_fit = [&](const std::vector<double>& e) {
    try {
      return fit_order(nd, e);
    } catch (const DomainError&) {
      return OrderFit{std::nan(""), std::nan(""), false};
    }
  };
  report.fit_l2s = safe_fit(e0);
  report.fit_h2ss = safe_fit(e2);

  std::ofstream csv;
  open_for_write(csv, spec.output_prefix + "_convergence.csv");
  write_convergence_csv(csv, report);
  std::ofstream js;
  open_for_write(js, spec.output_prefix + "_convergence.json");
  js << json{{"s", report.s},
             {"domain", report.domain},
             {"rhs", report.rhs_label},
             {"reference_n", report.reference_n},
             {"fits", {{"err_L2s", fit_to_json(report.fit_l2s)}, {"err_H2ss", fit_to_json(report.fit_h2ss)}}}}
            .dump(2)
     << '\n';
  return report;
}

std::vector<EigencheckRow> cmd_eigencheck(const std::vector<double>& s_values, std::size_t n_max,
                                          const std::string& prefix) {
  std::vector<EigencheckRow> rows;
  const Interval ref(-1.0, 1.0);
  const double points[] = {-0.7, -0.3, 0.1, 0.45, 0.8};
  for (double sv : s_values) {
    SExponent s(sv);
    const double alpha = sv + 0.5;
    for (std::size_t n = 0; n <= n_max; ++n) {
      const double h = gegenbauer_norm_h(n, s);
      const double lambda = eigenvalue_lambda(n, s);
      auto phi = [&](double z) { return eval_gegenbauer(n, alpha, z) / h; };
      auto dphi = [&](double z) {
        return n == 0 ? 0.0 : 2.0 * alpha * eval_gegenbauer(n - 1, alpha + 1.0, z) / h;
      };
      const Integrand up = weighted_derivative(phi, dphi, sv);
      for (double x : points) {
        const double v = sv == 0.5 ? pv_apply_log(up, x, ref) : pv_apply(up, x, s, ref);
        rows.push_back({"eigen", sv, n, x, std::abs(v - lambda * phi(x)), 1e-6 * std::max(1.0, lambda)});
      }
    }

    const auto p = monomial_operator_matrix(n_max, s);
    const auto g = gegenbauer_monomial_matrix(n_max, s);
    const std::size_t m = n_max + 1;
    for (std::size_t n = 0; n < m; ++n) {
      double below = 0.0;
      for (std::size_t k = n + 1; k < m; ++k) below = std::max(below, std::abs(p[k][n]));
      const double lambda = eigenvalue_lambda(n, s);
      rows.push_back({"triangular", sv, n, std::nan(""), below / lambda, 1e-10});
      rows.push_back({"diagonal", sv, n, std::nan(""), std::abs(p[n][n] - lambda) / lambda, 1e-10});
    }
    // D = G^{-1} P G by back substitution on the upper-triangular G.
    std::vector<std::vector<double>> pg(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) pg[i][j] += p[i][k] * g[k][j];
      }
    }
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<double> col(m);
      for (std::size_t i = m; i-- > 0;) {
        double acc = pg[i][j];
        for (std::size_t k = i + 1; k < m; ++k) acc -= g[i][k] * col[k];
        col[i] = acc / g[i][i];
      }
      double off = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (i != j) off = std::max(off, std::abs(col[i]));
      }
      rows.push_back({"conjugation", sv, j, std::nan(""), off / std::abs(col[j]), 1e-9});
    }
  }

  std::ofstream csv;
  open_for_write(csv, prefix + "_eigencheck.csv");
  csv << "check,s,n,x,deviation,threshold,pass\n";
  for (const auto& r : rows) {
    csv << r.check << ',' << fmt(r.s) << ',' << r.n << ',' << (std::isnan(r.x) ? std::string() : fmt(r.x))
        << ',' << fmt(r.deviation) << ',' << fmt(r.threshold) << ',' << (r.pass() ? "pass" : "FAIL") << '\n';
  }
  return rows;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral solver for the fractional Laplacian on unions of intervals"};
  app.require_subcommand(1);

  struct Flags {
    std::string config;
    double s = 0.5;
    std::vector<std::pair<double, double>> intervals;
    std::string rhs;
    std::string n;
    double gmres_tol = 1e-13;
    std::size_t ref_n = 0;
    std::string out;
  } f;
  std::vector<double> eig_s{0.1, 0.25, 0.5, 0.75, 0.9};
  std::size_t eig_nmax = 6;

  auto add_problem_flags = [&](CLI::App* sub) {
    sub->add_option("--config", f.config, "config file");
    sub->add_option("--s", f.s, "fractional order in (0, 1)");
    sub->add_option("--interval", f.intervals, "interval endpoints A B (repeatable)")->allow_extra_args(false);
    sub->add_option("--rhs", f.rhs, "constant[:c] | runge | absx | polynomial:c0,c1,.. | gegenbauer-mode:k | table:PATH");
    sub->add_option("--n", f.n, "resolution, or comma-separated list");
    sub->add_option("--gmres-tol", f.gmres_tol, "relative GMRES tolerance");
    sub->add_option("--out", f.out, "output path prefix");
  };
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve and write coefficients and samples");
  add_problem_flags(solve_cmd);
  CLI::App* conv_cmd = app.add_subcommand("convergence", "error sweep against a reference solution");
  add_problem_flags(conv_cmd);
  conv_cmd->add_option("--ref-n", f.ref_n, "reference resolution");
  CLI::App* eig_cmd = app.add_subcommand("eigencheck", "oracle and closed-form consistency checks");
  eig_cmd->add_option("--s", eig_s, "fractional orders")->delimiter(',');
  eig_cmd->add_option("--n-max", eig_nmax, "largest degree");
  eig_cmd->add_option("--out", f.out, "output path prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (eig_cmd->parsed()) {
      const auto rows = cmd_eigencheck(eig_s, eig_nmax, f.out.empty() ? "fraclap" : f.out);
      std::size_t failed = 0;
      double worst = 0.0;
      for (const auto& r : rows) {
        failed += r.pass() ? 0 : 1;
        worst = std::max(worst, r.deviation / r.threshold);
      }
      out << rows.size() << " checks, " << failed << " failed, worst deviation/threshold " << worst << '\n';
      return failed == 0 ? kOk : kSolverFailure;
    }

    CLI::App* sub = solve_cmd->parsed() ? solve_cmd : conv_cmd;
    SpecOverrides file;
    if (sub->count("--config")) file = read_config_file(f.config);
    SpecOverrides flags;
    if (sub->count("--s")) flags.s = f.s;
    for (const auto& [a, b] : f.intervals) {
      if (!(a < b)) throw ConfigError("--interval needs A < B");
      flags.intervals.emplace_back(a, b);
    }
    if (sub->count("--rhs")) flags.rhs = f.rhs;
    if (sub->count("--n")) flags.n = parse_sizes(f.n);
    if (sub->count("--gmres-tol")) flags.gmres_tol = f.gmres_tol;
    if (sub->count("--out")) flags.out = f.out;

    if (sub == solve_cmd) {
      const ProblemSpec spec = resolve_spec(file, flags);
      if (auto w = spec.rhs.accuracy_warning(); !w.empty()) err << "warning: " << w << '\n';
      const SolveOutput res = cmd_solve(spec);
      out << "gmres iterations " << res.solution.gmres_iterations << ", residual "
          << res.solution.final_residual << ", time " << res.seconds << " s\n"
          << "wrote " << res.json_path.string() << " and " << res.csv_path.string() << '\n';
      return kOk;
    }

    std::vector<std::size_t> ns = flags.n.empty() ? file.n : flags.n;
    if (ns.empty()) ns = {8, 16, 32, 64};
    flags.n.clear();
    SpecOverrides file_no_n = file;
    file_no_n.n.clear();
    std::optional<std::size_t> ref_n = file.ref_n;
    if (conv_cmd->count("--ref-n")) ref_n = f.ref_n;
    const ProblemSpec spec = resolve_spec(file_no_n, flags);
    const ConvergenceReport rep = cmd_convergence(spec, ns, ref_n);
    write_convergence_csv(out, rep);
    out << "reference N " << rep.reference_n << "; order L2s " << rep.fit_l2s.order << ", H2ss "
        << rep.fit_h2ss.order << (rep.fit_l2s.super_algebraic ? " (super-algebraic)" : "") << '\n';
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ConvergenceError& e) {
    err << "solver failure: " << e.what() << "\nresidual history:";
    for (double r : e.history()) err << ' ' << r;
    err << '\n';
    return kSolverFailure;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  }
}

}  // namespace fraclap::cli
