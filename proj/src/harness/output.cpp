#include "svweno/harness/output.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "json.hpp"

namespace svweno {
namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setprecision(12);
  return out;
}

void check_written(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::vector<std::string> component_names(const Model& model) {
  if (model.equation == Equation::advection) return {"u"};
  if (model.dim == 1) return {"rho", "u", "p"};
  return {"rho", "u", "v", "p"};
}

std::vector<double> output_components(const Model& model, const State& u) {
  if (model.equation == Equation::advection) return {u[0]};
  const State w = conserved_to_primitive(model, u);
  if (model.dim == 1) return {w[0], w[1], w[2]};
  return {w[0], w[1], w[2], w[3]};
}

void write_field_1d(const std::filesystem::path& path, const Grid1D& grid, const Model& model,
                    const Averages& averages, const Averages& exact) {
  if (averages.size() != static_cast<std::size_t>(grid.num_cvs()) ||
      (!exact.empty() && exact.size() != averages.size())) {
    throw std::invalid_argument("field size does not match the grid");
  }
  auto out = open_for_write(path);
  const auto names = component_names(model);
  out << "x,cv_width";
  for (const auto& n : names) out << ',' << n;
  if (!exact.empty()) {
    for (const auto& n : names) out << ",exact_" << n;
  }
  out << '\n';
  for (std::size_t g = 0; g < averages.size(); ++g) {
    out << grid.centers[g] << ',' << grid.widths[g];
    for (double v : output_components(model, averages[g])) out << ',' << v;
    if (!exact.empty()) {
      for (double v : output_components(model, exact[g])) out << ',' << v;
    }
    out << '\n';
  }
  check_written(out, path);
}

void write_troubled_csv(const std::filesystem::path& path, const RunLog& log) {
  auto out = open_for_write(path);
  out << "step,t,cv_index,flag\n";
  if (!log.troubled_history.empty()) {
    for (std::size_t s = 0; s < log.troubled_history.size() && s < log.steps.size(); ++s) {
      for (int g : log.troubled_history[s]) out << log.steps[s].step << ',' << log.steps[s].t << ',' << g << ",1\n";
    }
  } else if (!log.steps.empty()) {
    for (int g : log.final_troubled) out << log.steps.back().step << ',' << log.steps.back().t << ',' << g << ",1\n";
  }
  check_written(out, path);
}

void write_field_2d(const std::filesystem::path& path, const Grid2D& grid, const Model& model,
                    const Averages& averages) {
  if (averages.size() != static_cast<std::size_t>(grid.num_cvs())) {
    throw std::invalid_argument("field size does not match the grid");
  }
  auto out = open_for_write(path);
  out << "# " << grid.cvs_x() << ' ' << grid.cvs_y() << '\n';
  out << "# x y rho u v p\n";
  for (int gy = 0; gy < grid.cvs_y(); ++gy) {
    for (int gx = 0; gx < grid.cvs_x(); ++gx) {
      const State& u = averages[static_cast<std::size_t>(grid.flat(gx, gy))];
      out << grid.x.centers[static_cast<std::size_t>(gx)] << ' ' << grid.y.centers[static_cast<std::size_t>(gy)];
      if (model.equation == Equation::advection) {
        out << ' ' << u[0] << " 0 0 0\n";
      } else {
        const State w = conserved_to_primitive(model, u);
        out << ' ' << w[0] << ' ' << w[1] << ' ' << w[2] << ' ' << w[3] << '\n';
      }
    }
  }
  check_written(out, path);
}

void write_density_matrix(const std::filesystem::path& path, const Grid2D& grid, const Averages& averages) {
  if (averages.size() != static_cast<std::size_t>(grid.num_cvs())) {
    throw std::invalid_argument("field size does not match the grid");
  }
  auto out = open_for_write(path);
  for (int gy = 0; gy < grid.cvs_y(); ++gy) {
    for (int gx = 0; gx < grid.cvs_x(); ++gx) {
      if (gx > 0) out << ' ';
      out << averages[static_cast<std::size_t>(grid.flat(gx, gy))][0];
    }
    out << '\n';
  }
  check_written(out, path);
}

void write_run_log(const std::filesystem::path& path, const RunLog& log) {
  auto out = open_for_write(path);
  for (const auto& s : log.steps) {
    const nlohmann::json j = {{"step", s.step},
                              {"t", s.t},
                              {"dt", s.dt},
                              {"clipped", s.clipped},
                              {"troubled", s.troubled},
                              {"troubled_percent", s.troubled_percent}};
    out << j.dump() << '\n';
  }
  check_written(out, path);
}

std::vector<std::filesystem::path> write_outputs(const std::filesystem::path& dir, const ProblemConfig& cfg,
                                                 const RunResult& result, const std::string& note) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  const auto disc = make_discretization(cfg);
  if (cfg.dim == 1) {
    const Grid1D grid = build_grid_1d(cfg.domain.x0, cfg.domain.x1, cfg.nsv_x, cfg.order);
    Averages exact;
    if (cfg.exact) exact = disc->cell_averages(cfg.exact, result.field.time);
    written.push_back(dir / "field.csv");
    write_field_1d(written.back(), grid, cfg.model, result.field.averages, exact);
  } else {
    const Grid2D grid = build_grid_2d(cfg.domain, cfg.nsv_x, cfg.nsv_y, cfg.order);
    written.push_back(dir / "field.dat");
    write_field_2d(written.back(), grid, cfg.model, result.field.averages);
    written.push_back(dir / "density.dat");
    write_density_matrix(written.back(), grid, result.field.averages);
  }
  written.push_back(dir / "troubled.csv");
  write_troubled_csv(written.back(), result.log);

  written.push_back(dir / "runlog.jsonl");
  write_run_log(written.back(), result.log);

  written.push_back(dir / "summary.json");
  auto out = open_for_write(written.back());
  out << nlohmann::json{{"problem", cfg.name},
                        {"order", cfg.order},
                        {"nsv_x", cfg.nsv_x},
                        {"nsv_y", cfg.nsv_y},
                        {"t_final", result.field.time},
                        {"steps", result.log.steps.size()},
                        {"tvb_m", cfg.limiter.tvb_m},
                        {"epsilon", cfg.limiter.epsilon},
                        {"limiter", to_string(cfg.limiter.mode)},
                        {"characteristic", cfg.limiter.characteristic},
                        {"final_troubled_percent", result.log.final_troubled_percent()},
                        {"note", note}}
             .dump(2)
      << '\n';
  check_written(out, written.back());
  return written;
}

}  // namespace svweno
