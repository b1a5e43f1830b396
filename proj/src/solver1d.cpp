#include <algorithm>
#include <cmath>
#include <sstream>

#include "svweno/solver.hpp"

namespace svweno {

namespace {

NonphysicalState at_location(const NonphysicalState& e, const char* what, double x) {
  std::ostringstream os;
  os << e.what() << " (" << what << " x=" << x << ")";
  return NonphysicalState(os.str(), e.state());
}

}  // namespace

Solver1D::Solver1D(const ProblemConfig& cfg)
    : cfg_(cfg),
      grid_(build_grid_1d(cfg.domain.x0, cfg.domain.x1, cfg.nsv_x, cfg.order)),
      basis_(cfg.order, grid_.pattern),
      edge_op_(basis_.evaluation_operator(basis_.edges())),
      limiter_(grid_),
      ghosts_(cfg.order),
      pool_(cfg.workers) {
  const int n = grid_.num_cvs();
  ext_.resize(static_cast<std::size_t>(n + 2 * ghosts_));
  edges_.resize(static_cast<std::size_t>(grid_.num_svs * (grid_.order + 1)));
  trace_l_.resize(static_cast<std::size_t>(n));
  trace_r_.resize(static_cast<std::size_t>(n));
  flux_.resize(static_cast<std::size_t>(n + 1));
  kinds_.assign(static_cast<std::size_t>(n + 1), FaceKind::riemann);
  mask_.flags.assign(static_cast<std::size_t>(n), 0);
}

double Solver1D::extended_center(int g) const {
  const int k = grid_.order;
  const int sv = g >= 0 ? g / k : -((-g + k - 1) / k);
  const int m = g - sv * k;
  const double frac = 0.5 * (grid_.pattern[static_cast<std::size_t>(m)] + grid_.pattern[static_cast<std::size_t>(m + 1)]);
  return grid_.a + (sv + frac) * grid_.sv_width;
}

Averages Solver1D::cell_averages(const StateFunction& f, double t) const {
  const QuadratureRule rule = gauss_rule(grid_.order + 2);
  Averages out(static_cast<std::size_t>(grid_.num_cvs()));
  for (std::size_t g = 0; g < out.size(); ++g) {
    const double c = grid_.centers[g];
    const double h = grid_.widths[g];
    State acc{};
    for (int q = 0; q < rule.size(); ++q) {
      const State v = f(c + 0.5 * h * rule.nodes[static_cast<std::size_t>(q)], 0.0, t);
      for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += 0.5 * rule.weights[static_cast<std::size_t>(q)] * v[k];
    }
    out[g] = acc;
  }
  return out;
}

void Solver1D::fill_ghosts(const Averages& u, double t, Averages& ext) const {
  const int n = grid_.num_cvs();
  const int gd = ghosts_;
  ext.resize(static_cast<std::size_t>(n + 2 * gd));
  std::copy(u.begin(), u.end(), ext.begin() + gd);
  const auto& left = cfg_.boundary.left.at(0.0);
  const auto& right = cfg_.boundary.right.at(0.0);
  for (int d = 1; d <= gd; ++d) {
    State& lo = ext[static_cast<std::size_t>(gd - d)];
    State& hi = ext[static_cast<std::size_t>(gd + n - 1 + d)];
    switch (left.kind) {
      case BoundaryKind::periodic: lo = u[static_cast<std::size_t>(n - d)]; break;
      case BoundaryKind::reflective: lo = mirror_state(cfg_.model, u[static_cast<std::size_t>(d - 1)], Axis::x); break;
      case BoundaryKind::outflow: lo = u.front(); break;
      case BoundaryKind::prescribed: lo = left.state(extended_center(-d), 0.0, t); break;
    }
    switch (right.kind) {
      case BoundaryKind::periodic: hi = u[static_cast<std::size_t>(d - 1)]; break;
      case BoundaryKind::reflective: hi = mirror_state(cfg_.model, u[static_cast<std::size_t>(n - d)], Axis::x); break;
      case BoundaryKind::outflow: hi = u.back(); break;
      case BoundaryKind::prescribed: hi = right.state(extended_center(n - 1 + d), 0.0, t); break;
    }
  }
}

State Solver1D::riemann_flux(const State& ul, const State& ur) const {
  if (cfg_.flux == LfVariant::global) return lax_friedrichs(cfg_.model, ul, ur, Axis::x, alpha_global_);
  return lax_friedrichs(cfg_.model, ul, ur, Axis::x);
}

void Solver1D::detect_troubled(const Averages& u) {
  const int n = grid_.num_cvs();
  const int k = grid_.order;
  const int nv = cfg_.model.nvars();
  const LimiterParams& p = cfg_.limiter;
  if (p.mode != LimiterMode::cvmsweno) {
    std::fill(mask_.flags.begin(), mask_.flags.end(), p.mode == LimiterMode::full ? 1 : 0);
    return;
  }
  pool_.parallel_for(static_cast<std::size_t>(n), [&](std::size_t b, std::size_t e, int) {
    for (auto g = static_cast<int>(b); g < static_cast<int>(e); ++g) {
      const int i = g / k;
      const int m = g % k;
      const State& tm = edges_[static_cast<std::size_t>(i * (k + 1) + m)];
      const State& tp = edges_[static_cast<std::size_t>(i * (k + 1) + m + 1)];
      const State& prev = ext_[static_cast<std::size_t>(g + ghosts_ - 1)];
      const State& next = ext_[static_cast<std::size_t>(g + ghosts_ + 1)];
      const State& avg = u[static_cast<std::size_t>(g)];
      const double h = p.tvb_length == TvbLength::sv ? grid_.sv_width : grid_.widths[static_cast<std::size_t>(g)];
      bool flag = false;
      for (int c = 0; c < nv && !flag; ++c) {
        const auto cc = static_cast<std::size_t>(c);
        flag = tvb_flags(avg[cc], tm[cc], tp[cc], prev[cc], next[cc], p.tvb_m, h);
      }
      mask_.flags[static_cast<std::size_t>(g)] = flag ? 1 : 0;
    }
  });
}

void Solver1D::limit_troubled(const Averages& u) {
  const int n = grid_.num_cvs();
  const int k = grid_.order;
  const int s = limiter_.half_width();
  const int w = 2 * s + 1;
  const int nv = cfg_.model.nvars();
  const bool characteristic = cfg_.limiter.characteristic && cfg_.model.equation == Equation::euler;
  pool_.parallel_for(static_cast<std::size_t>(n), [&](std::size_t b, std::size_t e, int) {
    std::array<State, 2 * (kMaxOrder / 2) + 1> cells{};
    std::array<double, 2 * (kMaxOrder / 2) + 1> vals{};
    for (auto g = static_cast<int>(b); g < static_cast<int>(e); ++g) {
      if (!mask_[g]) continue;
      const State& avg = u[static_cast<std::size_t>(g)];
      CharacteristicBasis basis;
      try {
        if (characteristic) basis = characteristic_basis(cfg_.model, avg, Axis::x);
      } catch (const NonphysicalState& ex) {
        throw at_location(ex, "limiter CV", grid_.centers[static_cast<std::size_t>(g)]);
      }
      for (int j = 0; j < w; ++j) {
        const State& src = ext_[static_cast<std::size_t>(g + ghosts_ - s + j)];
        cells[static_cast<std::size_t>(j)] = characteristic ? basis.to_characteristic(src) : src;
      }
      State lo{};
      State hi{};
      for (int c = 0; c < nv; ++c) {
        for (int j = 0; j < w; ++j) vals[static_cast<std::size_t>(j)] = cells[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
        const SwenoResult r = limiter_.limit(g % k, std::span<const double>(vals.data(), static_cast<std::size_t>(w)),
                                             cfg_.limiter);
        double vl = 0.0;
        double vr = 0.0;
        for (int a = k - 1; a >= 0; --a) {
          vl = vl * -0.5 + r.coeffs[static_cast<std::size_t>(a)];
          vr = vr * 0.5 + r.coeffs[static_cast<std::size_t>(a)];
        }
        lo[static_cast<std::size_t>(c)] = vl;
        hi[static_cast<std::size_t>(c)] = vr;
      }
      if (characteristic) {
        lo = basis.from_characteristic(lo);
        hi = basis.from_characteristic(hi);
      }
      trace_l_[static_cast<std::size_t>(g)] = lo;
      trace_r_[static_cast<std::size_t>(g)] = hi;
    }
  });
}

void Solver1D::residual(const Averages& u, double t, bool detect, Averages& dudt) {
  const int n = grid_.num_cvs();
  const int k = grid_.order;
  const int nv = cfg_.model.nvars();
  if (static_cast<int>(u.size()) != n) throw std::invalid_argument("field size does not match grid");
  fill_ghosts(u, t, ext_);

  // SV edge values; interior edges are shared by the two CVs that meet there.
  pool_.parallel_for(static_cast<std::size_t>(grid_.num_svs), [&](std::size_t b, std::size_t e, int) {
    for (auto i = static_cast<int>(b); i < static_cast<int>(e); ++i) {
      for (int ed = 0; ed <= k; ++ed) {
        State v{};
        for (int m = 0; m < k; ++m) {
          const double coef = edge_op_(ed, m);
          const State& avg = u[static_cast<std::size_t>(i * k + m)];
          for (int c = 0; c < nv; ++c) v[static_cast<std::size_t>(c)] += coef * avg[static_cast<std::size_t>(c)];
        }
        edges_[static_cast<std::size_t>(i * (k + 1) + ed)] = v;
      }
      for (int m = 0; m < k; ++m) {
        trace_l_[static_cast<std::size_t>(i * k + m)] = edges_[static_cast<std::size_t>(i * (k + 1) + m)];
        trace_r_[static_cast<std::size_t>(i * k + m)] = edges_[static_cast<std::size_t>(i * (k + 1) + m + 1)];
      }
    }
  });

  if (detect) detect_troubled(u);
  if (cfg_.limiter.mode != LimiterMode::off) limit_troubled(u);
  kinds_ = classify_faces_1d(grid_, mask_);

  if (cfg_.flux == LfVariant::global) {
    double a = 0.0;
    for (int g = 0; g < n; ++g) {
      a = std::max({a, max_wavespeed(cfg_.model, trace_l_[static_cast<std::size_t>(g)], Axis::x),
                    max_wavespeed(cfg_.model, trace_r_[static_cast<std::size_t>(g)], Axis::x)});
    }
    alpha_global_ = a;
  }

  pool_.parallel_for(static_cast<std::size_t>(n + 1), [&](std::size_t b, std::size_t e, int) {
    for (auto f = static_cast<int>(b); f < static_cast<int>(e); ++f) {
      const double x = grid_.edges[static_cast<std::size_t>(f)];
      try {
        if (f > 0 && f < n) {
          const State& ul = trace_r_[static_cast<std::size_t>(f - 1)];
          const State& ur = trace_l_[static_cast<std::size_t>(f)];
          flux_[static_cast<std::size_t>(f)] = kinds_[static_cast<std::size_t>(f)] == FaceKind::riemann
                                                   ? riemann_flux(ul, ur)
                                                   : analytic_flux(cfg_.model, ul, Axis::x);
        } else if (cfg_.boundary.left.is_periodic()) {
          if (f == 0) {
            const State fl = riemann_flux(trace_r_.back(), trace_l_.front());
            flux_.front() = fl;
            flux_.back() = fl;
          }
        } else if (f == 0) {
          const State& in = trace_l_.front();
          const State out = outside_state(cfg_.model, cfg_.boundary.left.at(0.0), in, Axis::x, x, 0.0, t);
          flux_.front() = riemann_flux(out, in);
        } else {
          const State& in = trace_r_.back();
          const State out = outside_state(cfg_.model, cfg_.boundary.right.at(0.0), in, Axis::x, x, 0.0, t);
          flux_.back() = riemann_flux(in, out);
        }
      } catch (const NonphysicalState& ex) {
        throw at_location(ex, "face", x);
      }
    }
  });

  dudt.resize(static_cast<std::size_t>(n));
  for (int g = 0; g < n; ++g) {
    const auto gg = static_cast<std::size_t>(g);
    const double inv = 1.0 / grid_.widths[gg];
    State r{};
    for (int c = 0; c < nv; ++c) {
      const auto cc = static_cast<std::size_t>(c);
      r[cc] = -(flux_[gg + 1][cc] - flux_[gg][cc]) * inv;
    }
    dudt[gg] = r;
  }
}

double Solver1D::stable_dt(const Averages& u) const {
  return compute_dt(grid_, u, cfg_.model, cfg_.cfl, cfg_.max_dt);
}

}  // namespace svweno
