#pragma once

#include <functional>
#include <vector>

#include "svweno/physics.hpp"

namespace svweno {

/// Explicit RK scheme in Shu-Osher form:
///   u(i) = sum_{l<i} alpha[i-1][l] u(l) + beta[i-1][l] dt L(u(l)),  u(0) = u^n,
/// and u^{n+1} = u(stages).
struct RKTableau {
  int order = 0;
  int stages = 0;
  std::vector<std::vector<double>> alpha;
  std::vector<std::vector<double>> beta;
  std::vector<double> c;  // time fraction of each input stage u(l), c[0] = 0

  /// Throws std::invalid_argument for orders outside 2..5.
  static const RKTableau& get(int order);
};

const RKTableau& tableau(int order);

/// Field of per-CV states.
using Averages = std::vector<State>;

/// dudt = L(u) at time t. `stage` is the index of the input stage (0-based).
using ResidualFn = std::function<void(const Averages& u, double t, int stage, Averages& dudt)>;

/// Advances u by one step of size dt. Throws std::runtime_error naming the
/// stage if a stage produces a non-finite value.
void rk_step(const RKTableau& tab, const ResidualFn& residual, Averages& u, double t, double dt,
             int nvars);

/// Clips dt so that t + dt does not pass t_final; returns true when clipped.
/// A step ending within 1e-8 dt short of t_final is stretched to t_final.
bool clip_to_final(double t, double t_final, double& dt);

}  // namespace svweno
