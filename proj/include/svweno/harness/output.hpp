#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "svweno/solver.hpp"

namespace svweno {

/// Column names of the written components: u for advection, rho,u,p
/// (1D) or rho,u,v,p (2D) for Euler.
std::vector<std::string> component_names(const Model& model);

/// Values matching component_names for one conserved average.
std::vector<double> output_components(const Model& model, const State& u);

/// 1D CSV `x,cv_width,<components>[,exact_<components>]`, one row per CV.
/// `exact` may be empty.
void write_field_1d(const std::filesystem::path& path, const Grid1D& grid, const Model& model,
                    const Averages& averages, const Averages& exact);

/// `step,t,cv_index,flag` rows for every flagged CV. Uses the per-step
/// history when recorded, otherwise the final step only.
void write_troubled_csv(const std::filesystem::path& path, const RunLog& log);

/// `# nx ny` header followed by `x y rho u v p` rows (x fastest). Scalar
/// fields write the single value in the rho column and zeros elsewhere.
void write_field_2d(const std::filesystem::path& path, const Grid2D& grid, const Model& model,
                    const Averages& averages);

/// Density as a cvs_y x cvs_x whitespace matrix, bottom row first.
void write_density_matrix(const std::filesystem::path& path, const Grid2D& grid, const Averages& averages);

/// One JSON object per line per step.
void write_run_log(const std::filesystem::path& path, const RunLog& log);

/// Writes the standard file set of a finished run into `dir` and returns
/// the created paths. `note` is stored in summary.json.
std::vector<std::filesystem::path> write_outputs(const std::filesystem::path& dir, const ProblemConfig& cfg,
                                                 const RunResult& result, const std::string& note = "");

}  // namespace svweno
