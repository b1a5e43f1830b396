#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "svweno/harness/analysis.hpp"
#include "svweno/harness/output.hpp"
#include "svweno/harness/presets.hpp"

namespace {

constexpr int kExitAbort = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitIo = 3;

struct Overrides {
  std::optional<std::string> problem;
  std::string config;
  std::optional<int> order;
  std::optional<int> nsv;
  std::optional<int> nsv_y;
  std::optional<double> tvb_m;
  std::optional<std::string> tvb_length;
  std::optional<double> epsilon;
  std::optional<double> cfl;
  std::optional<double> t_final;
  std::optional<std::string> limiter;
  std::optional<std::string> characteristic;
  std::optional<std::string> flux;
  std::optional<int> workers;
  bool stage0_detect = false;
  std::optional<std::string> trace_fallback;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--problem", o.problem, "preset name (see `svweno presets`), default sine1d");
  cmd->add_option("--config", o.config, "JSON run specification; flags override its fields");
  cmd->add_option("--order", o.order, "polynomial order k (2..5)");
  cmd->add_option("--tvb-m", o.tvb_m, "TVB constant M");
  cmd->add_option("--tvb-h", o.tvb_length, "length in the TVB threshold: cv (CV width, default) | sv (SV width)")
      ->check(CLI::IsMember({"sv", "cv"}));
  cmd->add_option("--epsilon", o.epsilon, "smoothness-indicator regularisation");
  cmd->add_option("--cfl", o.cfl, "CFL number");
  cmd->add_option("--tfinal", o.t_final, "final time");
  cmd->add_option("--limiter", o.limiter, "cvmsweno | full | off")
      ->check(CLI::IsMember({"cvmsweno", "full", "off"}));
  cmd->add_option("--char", o.characteristic, "characteristic limiting on | off")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--flux", o.flux, "Lax-Friedrichs speed: local | global")
      ->check(CLI::IsMember({"local", "global"}));
  cmd->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--trace-fallback", o.trace_fallback,
                  "scale nonphysical limited traces toward the CV average: on | off (2D Euler)")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_flag("--detect-once", o.stage0_detect, "detect troubled cells at the first stage only");
}

svweno::RunSpec make_spec(const Overrides& o) {
  svweno::RunSpec spec;
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw std::invalid_argument("cannot read config " + o.config);
    std::stringstream ss;
    ss << in.rdbuf();
    spec = svweno::RunSpec::from_json(ss.str());
  }
  if (o.problem) spec.problem = *o.problem;
  if (o.order) spec.order = o.order;
  if (o.nsv) spec.nsv_x = o.nsv;
  if (o.nsv_y) spec.nsv_y = o.nsv_y;
  if (o.tvb_m) spec.tvb_m = o.tvb_m;
  if (o.tvb_length) spec.tvb_length = o.tvb_length;
  if (o.epsilon) spec.epsilon = o.epsilon;
  if (o.cfl) spec.cfl = o.cfl;
  if (o.t_final) spec.t_final = o.t_final;
  if (o.limiter) spec.limiter = o.limiter;
  if (o.characteristic) spec.characteristic = *o.characteristic == "on";
  if (o.flux) spec.flux = o.flux;
  if (o.workers) spec.workers = o.workers;
  if (o.stage0_detect) spec.detect_every_stage = false;
  if (o.trace_fallback) spec.trace_fallback = *o.trace_fallback == "on";
  return spec;
}

int do_run(const Overrides& o, const std::string& out_dir, bool with_reference) {
  const svweno::RunSpec spec = make_spec(o);
  svweno::ProblemConfig cfg = spec.build();
  cfg.record_troubled_history = true;
  std::cerr << "running " << cfg.name << ": k=" << cfg.order << " nsv=" << cfg.nsv_x;
  if (cfg.dim == 2) std::cerr << "x" << cfg.nsv_y;
  std::cerr << " t_final=" << cfg.t_final << " M=" << cfg.limiter.tvb_m << '\n';

  svweno::RunResult result;
  int code = 0;
  try {
    result = svweno::advance(cfg);
  } catch (const svweno::SolverAbort& e) {
    std::cerr << "solver abort: " << e.what() << '\n';
    result = e.last_good();
    code = kExitAbort;
  }

  std::string note;
  if (!cfg.exact && cfg.dim == 1) note = "no closed-form solution; compare against a fine-grid reference run";
  if (code != 0) note = "aborted; fields are the last accepted state";
  const auto written = svweno::write_outputs(out_dir, cfg, result, note);

  if (with_reference && cfg.dim == 1 && code == 0) {
    const std::filesystem::path cache = std::filesystem::path(out_dir) / "reference.txt";
    const auto ref = svweno::fine_reference(cfg, cache.string());
    const auto grid = svweno::build_grid_1d(cfg.domain.x0, cfg.domain.x1, cfg.nsv_x, cfg.order);
    std::cout << "fine-reference l1 density error: " << svweno::reference_l1(grid, result.field.averages, ref)
              << '\n';
  }
  std::cout << "steps: " << result.log.steps.size() << ", t = " << result.field.time
            << ", final troubled percent: " << result.log.final_troubled_percent() << '\n';
  for (const auto& p : written) std::cout << "wrote " << p.string() << '\n';
  return code;
}

int do_convergence(const Overrides& o, const std::vector<int>& nsv_list, const std::string& out_dir) {
  const svweno::ProblemConfig base = make_spec(o).build();
  const auto report = svweno::run_convergence_study(base, nsv_list);
  std::cout << report.to_text();
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    const auto path = std::filesystem::path(out_dir) / "convergence.csv";
    std::ofstream out(path);
    if (!(out << report.to_csv())) throw std::runtime_error("cannot write " + path.string());
    std::cout << "wrote " << path.string() << '\n';
  }
  for (const auto& r : report.rows) {
    if (!r.ok) return kExitAbort;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral volume solver with a CV-wise simplified WENO limiter"};
  app.require_subcommand(1);

  Overrides run_opts;
  std::string run_out = "out";
  bool with_reference = false;
  auto* run = app.add_subcommand("run", "run one problem and write its data files");
  add_common(run, run_opts);
  run->add_option("--nsv", run_opts.nsv, "spectral volumes along x");
  run->add_option("--nsv-y", run_opts.nsv_y, "spectral volumes along y");
  run->add_option("--out", run_out, "output directory");
  run->add_flag("--reference", with_reference, "also compute a fine-grid reference (1D only)");

  Overrides conv_opts;
  std::vector<int> nsv_list{10, 20, 40, 80};
  std::string conv_out;
  auto* conv = app.add_subcommand("convergence", "error norms and rates over a list of resolutions");
  add_common(conv, conv_opts);
  conv->add_option("--nsv", nsv_list, "list of SV counts")->expected(1, -1);
  conv->add_option("--out", conv_out, "directory for convergence.csv");

  auto* list = app.add_subcommand("presets", "list built-in problems");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (const auto& p : svweno::preset_catalog()) std::cout << p.name << "  " << p.description << '\n';
      return 0;
    }
    if (*run) return do_run(run_opts, run_out, with_reference);
    return do_convergence(conv_opts, nsv_list, conv_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const svweno::SolverAbort& e) {
    std::cerr << "solver abort: " << e.what() << '\n';
    return kExitAbort;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
}
