#include "svweno/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace svweno {

void ProblemConfig::validate() const {
  if (dim != 1 && dim != 2) throw std::invalid_argument("dimension must be 1 or 2");
  if (model.dim != dim) throw std::invalid_argument("model dimension does not match problem dimension");
  if (model.equation == Equation::euler && !(model.gamma > 1.0)) {
    throw std::invalid_argument("ratio of specific heats must exceed 1");
  }
  if (order < kMinOrder || order > kMaxOrder) throw std::invalid_argument("order must be in 2..5");
  if (nsv_x < 1 || (dim == 2 && nsv_y < 1)) throw std::invalid_argument("SV count must be positive");
  if (!(domain.x1 > domain.x0) || (dim == 2 && !(domain.y1 > domain.y0))) {
    throw std::invalid_argument("empty domain");
  }
  if (!(t_final > 0.0)) throw std::invalid_argument("final time must be positive");
  if (!(cfl > 0.0)) throw std::invalid_argument("CFL number must be positive");
  if (!(max_dt > 0.0)) throw std::invalid_argument("maximum time step must be positive");
  if (workers < 1) throw std::invalid_argument("worker count must be positive");
  if (!initial) throw std::invalid_argument("initial condition missing");
  limiter.validate();
  boundary.validate(dim);
}

double compute_dt(const Grid1D& grid, const Averages& u, const Model& model, double cfl, double max_dt) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < u.size(); ++g) {
    const double lam = max_wavespeed(model, u[g], Axis::x);
    if (lam > 0.0) best = std::min(best, grid.widths[g] / lam);
  }
  return std::isfinite(best) ? cfl * best : max_dt;
}

double compute_dt(const Grid2D& grid, const Averages& u, const Model& model, double cfl, double max_dt) {
  double worst = 0.0;
  const int cx = grid.cvs_x();
  for (std::size_t g = 0; g < u.size(); ++g) {
    const auto gx = static_cast<std::size_t>(static_cast<int>(g) % cx);
    const auto gy = static_cast<std::size_t>(static_cast<int>(g) / cx);
    const double rate = max_wavespeed(model, u[g], Axis::x) / grid.x.widths[gx] +
                        max_wavespeed(model, u[g], Axis::y) / grid.y.widths[gy];
    worst = std::max(worst, rate);
  }
  return worst > 0.0 ? cfl / worst : max_dt;
}

std::unique_ptr<Discretization> make_discretization(const ProblemConfig& cfg) {
  cfg.validate();
  if (cfg.dim == 1) return std::make_unique<Solver1D>(cfg);
  return std::make_unique<Solver2D>(cfg);
}

namespace {

std::vector<int> flagged(const TroubledMask& mask) {
  std::vector<int> out;
  for (int g = 0; g < mask.size(); ++g) {
    if (mask[g]) out.push_back(g);
  }
  return out;
}

}  // namespace

RunResult advance(const ProblemConfig& cfg) {
  auto disc = make_discretization(cfg);
  const RKTableau& tab = tableau(cfg.order);
  const int nvars = cfg.model.nvars();
  const int ncv = disc->num_cvs();

  RunResult result;
  result.field.averages = disc->initial_averages();
  result.field.time = 0.0;

  int stage_max = 0;
  std::vector<std::uint8_t> stage_union(static_cast<std::size_t>(ncv), 0);
  const ResidualFn residual = [&](const Averages& u, double t, int stage, Averages& dudt) {
    const bool detect = cfg.limiter.detect_every_stage || stage == 0;
    disc->residual(u, t, detect, dudt);
    const auto& mask = disc->mask();
    stage_max = std::max(stage_max, mask.count());
    for (std::size_t g = 0; g < stage_union.size(); ++g) stage_union[g] |= mask.flags[g];
  };

  const double t_final = cfg.t_final;
  int step = 0;
  while (result.field.time < t_final) {
    double t = result.field.time;
    double dt = 0.0;
    try {
      dt = disc->stable_dt(result.field.averages);
    } catch (const std::exception& e) {
      throw SolverAbort(std::string("time step failed: ") + e.what(), result);
    }
    const bool clipped = clip_to_final(t, t_final, dt);
    if (!(dt > 0.0)) break;

    stage_max = 0;
    std::fill(stage_union.begin(), stage_union.end(), 0);
    Averages next = result.field.averages;
    try {
      rk_step(tab, residual, next, t, dt, nvars);
      if (cfg.model.equation == Equation::euler) {
        for (std::size_t g = 0; g < next.size(); ++g) {
          if (!is_physical(cfg.model, next[g])) {
            std::ostringstream os;
            os << "nonphysical average in CV " << g;
            throw NonphysicalState(os.str(), next[g]);
          }
        }
      }
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "step " << step + 1 << " (t=" << t << ", dt=" << dt << "): " << e.what();
      throw SolverAbort(os.str(), result);
    }

    ++step;
    result.field.averages = std::move(next);
    result.field.time = clipped || t + dt >= t_final ? t_final : t + dt;

    StepRecord rec;
    rec.step = step;
    rec.t = result.field.time;
    rec.dt = dt;
    rec.clipped = clipped;
    rec.troubled = stage_max;
    rec.troubled_percent = 100.0 * stage_max / static_cast<double>(ncv);
    result.log.steps.push_back(rec);

    TroubledMask un{stage_union};
    if (cfg.record_troubled_history) result.log.troubled_history.push_back(flagged(un));
    if (result.field.time >= t_final) result.log.final_troubled = flagged(un);
  }
  return result;
}

}  // namespace svweno
