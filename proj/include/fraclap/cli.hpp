#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fraclap/multi_interval.hpp"
#include "fraclap/problem.hpp"
#include "fraclap/sobolev_metrics.hpp"

namespace fraclap::cli {

enum ExitCode : int { kOk = 0, kSolverFailure = 1, kConfigError = 2 };

/// Overrides collected from a config file or from flags. Unset fields keep
/// whatever the lower-precedence source provided.
struct SpecOverrides {
  std::optional<double> s;
  std::vector<Interval> intervals;
  std::optional<std::string> rhs;
  std::vector<std::size_t> n;
  std::optional<double> gmres_tol;
  std::optional<std::size_t> ref_n;
  std::optional<std::string> out;
};

/// INI-style config:
///
///   s = 0.5
///   rhs = runge
///   n = 32
///   [interval.left]
///   a = -1
///   b = -0.1
///   n = 24          ; optional per-interval resolution
///
/// Interval sections keep file order. Throws ConfigError.
SpecOverrides read_config(std::istream& is);
SpecOverrides read_config_file(const std::filesystem::path& path);

/// Applies file values then flag values over the defaults. Intervals are
/// sorted by left endpoint, carrying per-interval resolutions with them.
ProblemSpec resolve_spec(const SpecOverrides& file, const SpecOverrides& flags);

nlohmann::json spec_to_json(const ProblemSpec& spec);
ProblemSpec spec_from_json(const nlohmann::json& j);
nlohmann::json solution_to_json(const ProblemSpec& spec, const MultiSolution& sol);

/// Relative errors of sol against ref over all blocks, in the (1+j^2)^r norm.
double relative_error(const MultiSolution& sol, const MultiSolution& ref, double r);

struct SolveOutput {
  MultiSolution solution;
  double seconds = 0.0;
  std::filesystem::path json_path;
  std::filesystem::path csv_path;
};

/// Solves and writes <prefix>_solution.json and <prefix>_samples.csv.
SolveOutput cmd_solve(const ProblemSpec& spec);

/// Solves at each N in `ns` and at the reference resolution, writes
/// <prefix>_convergence.csv and <prefix>_convergence.json.
ConvergenceReport cmd_convergence(const ProblemSpec& spec, std::vector<std::size_t> ns,
                                  std::optional<std::size_t> ref_n);

struct EigencheckRow {
  std::string check;
  double s;
  std::size_t n;
  double x;
  double deviation;
  double threshold;
  bool pass() const { return deviation <= threshold; }
};

/// Oracle eigen-relation sweep plus the monomial-matrix checks; writes
/// <prefix>_eigencheck.csv.
std::vector<EigencheckRow> cmd_eigencheck(const std::vector<double>& s_values,
                                          std::size_t n_max, const std::string& prefix);

void write_convergence_csv(std::ostream& os, const ConvergenceReport& report);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace fraclap::cli
