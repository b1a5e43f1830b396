#include "svweno/integrator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace svweno {

namespace {

RKTableau make(int order, std::vector<std::vector<double>> alpha, std::vector<std::vector<double>> beta) {
  RKTableau t;
  t.order = order;
  t.stages = static_cast<int>(alpha.size());
  t.alpha = std::move(alpha);
  t.beta = std::move(beta);
  t.c.assign(static_cast<std::size_t>(t.stages + 1), 0.0);
  for (int i = 1; i <= t.stages; ++i) {
    double ci = 0.0;
    for (int l = 0; l < i; ++l) {
      ci += t.alpha[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(l)] * t.c[static_cast<std::size_t>(l)] +
            t.beta[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(l)];
    }
    t.c[static_cast<std::size_t>(i)] = ci;
  }
  t.c.pop_back();
  return t;
}

}  // namespace

const RKTableau& RKTableau::get(int order) {
  static const RKTableau rk2 = make(2, {{1.0}, {0.5, 0.5}}, {{1.0}, {0.0, 0.5}});
  static const RKTableau rk3 =
      make(3, {{1.0}, {0.75, 0.25}, {1.0 / 3.0, 0.0, 2.0 / 3.0}}, {{1.0}, {0.0, 0.25}, {0.0, 0.0, 2.0 / 3.0}});
  static const RKTableau rk4 = make(4, {{1.0}, {1.0, 0.0}, {1.0, 0.0, 0.0}, {-1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0}},
                                    {{0.5}, {0.0, 0.5}, {0.0, 0.0, 1.0}, {0.0, 0.0, 0.0, 1.0 / 6.0}});
  static const RKTableau rk5 = make(5, {{1.0}, {1.0, 0.0}, {1.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0, 0.0}},
                                    {{0.2}, {0.0, 0.25}, {0.0, 0.0, 1.0 / 3.0}, {0.0, 0.0, 0.0, 0.5}, {0.0, 0.0, 0.0, 0.0, 1.0}});
  switch (order) {
    case 2: return rk2;
    case 3: return rk3;
    case 4: return rk4;
    case 5: return rk5;
    default: throw std::invalid_argument("Runge-Kutta order must be in 2..5, got " + std::to_string(order));
  }
}

const RKTableau& tableau(int order) { return RKTableau::get(order); }

void rk_step(const RKTableau& tab, const ResidualFn& residual, Averages& u, double t, double dt, int nvars) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const std::size_t n = u.size();
  std::vector<Averages> stage(static_cast<std::size_t>(tab.stages));
  std::vector<Averages> rate(static_cast<std::size_t>(tab.stages));
  stage[0] = u;
  Averages next(n);
  for (int i = 1; i <= tab.stages; ++i) {
    const auto src = static_cast<std::size_t>(i - 1);
    rate[src].resize(n);
    residual(stage[src], t + tab.c[src] * dt, i - 1, rate[src]);

    const auto& arow = tab.alpha[src];
    const auto& brow = tab.beta[src];
    for (std::size_t g = 0; g < n; ++g) {
      State v{};
      for (int l = 0; l < i; ++l) {
        const double a = arow[static_cast<std::size_t>(l)];
        const double b = brow[static_cast<std::size_t>(l)] * dt;
        if (a == 0.0 && b == 0.0) continue;
        const State& ul = stage[static_cast<std::size_t>(l)][g];
        const State& rl = rate[static_cast<std::size_t>(l)][g];
        for (int c = 0; c < nvars; ++c) {
          const auto cc = static_cast<std::size_t>(c);
          v[cc] += a * ul[cc] + b * rl[cc];
        }
      }
      for (int c = 0; c < nvars; ++c) {
        if (!std::isfinite(v[static_cast<std::size_t>(c)])) {
          throw std::runtime_error("non-finite value in RK stage " + std::to_string(i) + " at CV " +
                                   std::to_string(g));
        }
      }
      next[g] = v;
    }
    if (i == tab.stages) {
      u.swap(next);
    } else {
      stage[static_cast<std::size_t>(i)] = next;
    }
  }
}

bool clip_to_final(double t, double t_final, double& dt) {
  // A step that lands within 1e-8 dt of t_final is stretched to it, so
  // round-off never leaves a sliver step behind.
  if (t + dt * (1.0 + 1e-8) >= t_final) {
    const bool clipped = t + dt > t_final;
    dt = t_final - t;
    return clipped;
  }
  return false;
}

}  // namespace svweno
