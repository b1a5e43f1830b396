#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "svweno/boundary.hpp"
#include "svweno/integrator.hpp"
#include "svweno/limiter.hpp"
#include "svweno/mesh.hpp"
#include "svweno/parallel.hpp"
#include "svweno/physics.hpp"
#include "svweno/reconstruction.hpp"

namespace svweno {

/// Everything needed to run one simulation.
struct ProblemConfig {
  std::string name = "custom";
  Model model;
  int dim = 1;
  Rectangle domain;  // 1D uses [x0, x1]
  int nsv_x = 100;
  int nsv_y = 1;
  int order = 3;
  double t_final = 1.0;
  double cfl = 0.5;
  double max_dt = 1e-2;  // used only when every wave speed vanishes
  LimiterParams limiter;
  LfVariant flux = LfVariant::local;
  BoundarySpec boundary;
  StateFunction initial;  // conserved point values; t argument is 0
  StateFunction exact;    // optional conserved exact solution
  int workers = 1;
  bool record_troubled_history = false;

  /// Throws std::invalid_argument on any inconsistent field.
  void validate() const;
};

/// Conserved CV averages at time `time`; 2D fields use Grid2D::flat order.
struct SolutionField {
  Averages averages;
  double time = 0.0;
};

struct StepRecord {
  int step = 0;
  double t = 0.0;   // time at the end of the step
  double dt = 0.0;
  bool clipped = false;
  int troubled = 0;              // max over the step's stages
  double troubled_percent = 0.0;
};

struct RunLog {
  std::vector<StepRecord> steps;
  /// CVs flagged in any stage of the final step.
  std::vector<int> final_troubled;
  /// Per-step flagged CVs, filled when ProblemConfig::record_troubled_history is set.
  std::vector<std::vector<int>> troubled_history;

  double final_troubled_percent() const {
    return steps.empty() ? 0.0 : steps.back().troubled_percent;
  }
};

struct RunResult {
  SolutionField field;
  RunLog log;
};

/// Raised when a run cannot continue; carries the last accepted state.
class SolverAbort : public std::runtime_error {
 public:
  SolverAbort(const std::string& what, RunResult last_good)
      : std::runtime_error(what), last_good_(std::move(last_good)) {}
  const RunResult& last_good() const { return last_good_; }

 private:
  RunResult last_good_;
};

/// Spatial operator of one problem: ghost filling, SV reconstruction,
/// troubled-cell detection, limiting and the face-flux residual.
class Discretization {
 public:
  virtual ~Discretization() = default;

  virtual int dim() const = 0;
  virtual int num_cvs() const = 0;
  virtual double volume(int g) const = 0;
  virtual const ProblemConfig& config() const = 0;

  /// CV averages of f(., t) by (k+2)-point Gauss quadrature per axis.
  virtual Averages cell_averages(const StateFunction& f, double t) const = 0;

  /// dudt = L(u). When `detect` is false the previous mask is reused.
  virtual void residual(const Averages& u, double t, bool detect, Averages& dudt) = 0;
  virtual const TroubledMask& mask() const = 0;

  /// CFL-limited step for the current field.
  virtual double stable_dt(const Averages& u) const = 0;

  Averages initial_averages() const { return cell_averages(config().initial, 0.0); }
};

std::unique_ptr<Discretization> make_discretization(const ProblemConfig& cfg);

/// dt = CFL * min_g h_g / lambda_g; max_dt when every lambda is zero.
double compute_dt(const Grid1D& grid, const Averages& u, const Model& model, double cfl,
                  double max_dt);

/// dt = CFL * min_g 1 / (lambda_x / h_x + lambda_y / h_y).
double compute_dt(const Grid2D& grid, const Averages& u, const Model& model, double cfl,
                  double max_dt);

/// 1D spatial operator. Face f lies between CVs f-1 and f.
class Solver1D final : public Discretization {
 public:
  explicit Solver1D(const ProblemConfig& cfg);

  int dim() const override { return 1; }
  int num_cvs() const override { return grid_.num_cvs(); }
  double volume(int g) const override { return grid_.widths[static_cast<std::size_t>(g)]; }
  const ProblemConfig& config() const override { return cfg_; }
  const Grid1D& grid() const { return grid_; }
  int ghost_depth() const { return ghosts_; }

  Averages cell_averages(const StateFunction& f, double t) const override;
  void residual(const Averages& u, double t, bool detect, Averages& dudt) override;
  const TroubledMask& mask() const override { return mask_; }
  double stable_dt(const Averages& u) const override;

  /// Interior averages followed by ghost_depth() ghosts on each side.
  void fill_ghosts(const Averages& u, double t, Averages& extended) const;
  double extended_center(int g) const;

  /// State of the last residual call: per-CV traces at the left and right
  /// edges, face kinds and face fluxes.
  const Averages& left_traces() const { return trace_l_; }
  const Averages& right_traces() const { return trace_r_; }
  const std::vector<FaceKind>& face_kinds() const { return kinds_; }
  const Averages& face_fluxes() const { return flux_; }

 private:
  void detect_troubled(const Averages& u);
  void limit_troubled(const Averages& u);
  State riemann_flux(const State& ul, const State& ur) const;

  ProblemConfig cfg_;
  Grid1D grid_;
  SvBasis basis_;
  RowMatrix edge_op_;  // (k+1) x k
  CvLimiter1D limiter_;
  int ghosts_;
  mutable WorkerPool pool_;

  Averages ext_;
  Averages edges_;  // per SV, k+1 edge values
  Averages trace_l_;
  Averages trace_r_;
  Averages flux_;
  std::vector<FaceKind> kinds_;
  TroubledMask mask_;
  double alpha_global_ = 0.0;
};

/// 2D spatial operator on a tensor SV grid with n_q = k Gauss points per
/// CV face.
class Solver2D final : public Discretization {
 public:
  explicit Solver2D(const ProblemConfig& cfg);

  int dim() const override { return 2; }
  int num_cvs() const override { return grid_.num_cvs(); }
  double volume(int g) const override;
  const ProblemConfig& config() const override { return cfg_; }
  const Grid2D& grid() const { return grid_; }
  int ghost_depth() const { return ghosts_; }

  Averages cell_averages(const StateFunction& f, double t) const override;
  void residual(const Averages& u, double t, bool detect, Averages& dudt) override;
  const TroubledMask& mask() const override { return mask_; }
  double stable_dt(const Averages& u) const override;

  /// Row-major extended field of (cvs_x + 2G) x (cvs_y + 2G) averages.
  void fill_ghosts(const Averages& u, double t, Averages& extended) const;
  double extended_center_x(int gx) const;
  double extended_center_y(int gy) const;

  const FaceClasses2D& face_kinds() const { return kinds_; }

 private:
  std::size_t ext_index(int gx, int gy) const {
    return static_cast<std::size_t>((gy + ghosts_) * (grid_.cvs_x() + 2 * ghosts_) + gx + ghosts_);
  }
  void sv_traces(const Averages& u, int i, int j, bool detect);
  void limit_cv(int g);
  bool pull_traces_to_average(int g, const State& avg);
  State riemann_flux(const State& ul, const State& ur, Axis axis) const;

  ProblemConfig cfg_;
  Grid2D grid_;
  SvBasis basis_;
  int nq_;
  std::vector<double> qweights_;  // sum to 1
  std::vector<double> qnodes_;    // in [-1/2, 1/2]
  RowMatrix edge_op_;             // (k+1) x k
  RowMatrix gauss_op_;            // (k nq) x k
  RowMatrix mid_op_;              // k x k
  RowMatrix face_xm_, face_xp_, face_ym_, face_yp_;  // nq x k^2 on a CV polynomial
  CvLimiter2D limiter_;
  int ghosts_;
  mutable WorkerPool pool_;

  Averages ext_;
  Averages xl_, xr_, yl_, yr_;  // face traces at Gauss points
  Averages fx_, fy_;            // face-averaged fluxes
  FaceClasses2D kinds_;
  TroubledMask mask_;
  std::vector<std::uint8_t> pulled_;  // CVs whose traces were pulled this stage
  std::vector<int> troubled_;
  double alpha_x_ = 0.0;
  double alpha_y_ = 0.0;
};

/// Runs cfg from t = 0 to t_final. Throws SolverAbort on non-finite or
/// nonphysical states.
RunResult advance(const ProblemConfig& cfg);

}  // namespace svweno
