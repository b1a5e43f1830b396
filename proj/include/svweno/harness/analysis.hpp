#pragma once

#include <optional>
#include <string>
#include <vector>

#include "svweno/solver.hpp"

namespace svweno {

struct ErrorNorms {
  double l1 = 0.0;    // mean |e|
  double l2 = 0.0;    // sqrt(mean e^2)
  double linf = 0.0;  // max |e|
};

/// Norms of numerical - exact on one component (density for Euler).
/// Throws std::invalid_argument when the fields differ in size.
ErrorNorms error_norms(const Averages& numerical, const Averages& exact, int component = 0);
ErrorNorms error_norms(const std::vector<double>& numerical, const std::vector<double>& exact);

/// log(e_coarse / e_fine) / log(n_fine / n_coarse); equals log2 of the
/// error ratio when n doubles.
double convergence_rate(double e_coarse, double e_fine, int n_coarse, int n_fine);

struct ConvergenceRow {
  int nsv = 0;
  ErrorNorms norms;
  std::optional<ErrorNorms> rates;  // absent on the first row
  bool doubling = false;            // true when nsv is twice the previous row
  double troubled_percent = 0.0;    // final step, max over stages
  bool ok = true;
  std::string error;
};

struct ConvergenceReport {
  std::string problem;
  int order = 0;
  std::vector<ConvergenceRow> rows;

  std::string to_csv() const;
  std::string to_text() const;
};

/// Runs `base` at every SV count in `nsv_list` and compares with the exact
/// solution. A failing run is kept as a row with ok = false.
ConvergenceReport run_convergence_study(const ProblemConfig& base, const std::vector<int>& nsv_list);

/// Density of a 1D fine-grid reference run, as a piecewise-constant
/// profile on `edges`.
struct ReferenceProfile {
  std::vector<double> edges;
  std::vector<double> density;

  /// Mean density over [lo, hi] (exact for the piecewise-constant profile).
  double mean(double lo, double hi) const;
  double max() const;
};

ReferenceProfile reference_profile(const Grid1D& grid, const Averages& averages);

/// Reference run of a 1D preset: k = 5 with 800 SVs (4000 CVs) and M = 0.01.
/// When cache_path is non-empty the density profile is stored there and
/// reloaded on later calls with the same path.
ReferenceProfile fine_reference(const ProblemConfig& base, const std::string& cache_path = "");

/// Mean-absolute density error of a 1D field against a reference profile.
double reference_l1(const Grid1D& grid, const Averages& averages, const ReferenceProfile& ref);

}  // namespace svweno
