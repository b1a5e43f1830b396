#include <algorithm>
#include <cmath>
#include <sstream>

#include "svweno/solver.hpp"

namespace svweno {

namespace {

constexpr int kMaxEdges = kMaxOrder + 1;

NonphysicalState at_point(const NonphysicalState& e, const char* what, double x, double y) {
  std::ostringstream os;
  os << e.what() << " (" << what << " x=" << x << ", y=" << y << ")";
  return NonphysicalState(os.str(), e.state());
}

double ipow(double v, int p) {
  double r = 1.0;
  for (int j = 0; j < p; ++j) r *= v;
  return r;
}

}  // namespace

Solver2D::Solver2D(const ProblemConfig& cfg)
    : cfg_(cfg),
      grid_(build_grid_2d(cfg.domain, cfg.nsv_x, cfg.nsv_y, cfg.order)),
      basis_(cfg.order, grid_.x.pattern),
      nq_(cfg.order),
      limiter_(cfg.order),
      ghosts_(cfg.order),
      pool_(cfg.workers) {
  const int k = cfg.order;
  const QuadratureRule rule = gauss_rule(nq_);
  for (int q = 0; q < nq_; ++q) {
    qnodes_.push_back(0.5 * rule.nodes[static_cast<std::size_t>(q)]);
    qweights_.push_back(0.5 * rule.weights[static_cast<std::size_t>(q)]);
  }
  const auto& xe = basis_.edges();
  std::vector<double> gq;
  std::vector<double> mid;
  for (int m = 0; m < k; ++m) {
    const double lo = xe[static_cast<std::size_t>(m)];
    const double hi = xe[static_cast<std::size_t>(m + 1)];
    mid.push_back(0.5 * (lo + hi));
    for (int q = 0; q < nq_; ++q) gq.push_back(0.5 * (lo + hi) + qnodes_[static_cast<std::size_t>(q)] * (hi - lo));
  }
  edge_op_ = basis_.evaluation_operator(xe);
  gauss_op_ = basis_.evaluation_operator(gq);
  mid_op_ = basis_.evaluation_operator(mid);

  const int nc = k * k;
  face_xm_.resize(nq_, nc);
  face_xp_.resize(nq_, nc);
  face_ym_.resize(nq_, nc);
  face_yp_.resize(nq_, nc);
  for (int q = 0; q < nq_; ++q) {
    const double z = qnodes_[static_cast<std::size_t>(q)];
    for (int l = 0; l < k; ++l) {
      for (int r = 0; r < k; ++r) {
        face_xm_(q, l * k + r) = ipow(-0.5, l) * ipow(z, r);
        face_xp_(q, l * k + r) = ipow(0.5, l) * ipow(z, r);
        face_ym_(q, l * k + r) = ipow(z, l) * ipow(-0.5, r);
        face_yp_(q, l * k + r) = ipow(z, l) * ipow(0.5, r);
      }
    }
  }

  const int cx = grid_.cvs_x();
  const int cy = grid_.cvs_y();
  ext_.resize(static_cast<std::size_t>((cx + 2 * ghosts_) * (cy + 2 * ghosts_)));
  xl_.resize(static_cast<std::size_t>((cx + 1) * cy * nq_));
  xr_.resize(xl_.size());
  yl_.resize(static_cast<std::size_t>(cx * (cy + 1) * nq_));
  yr_.resize(yl_.size());
  fx_.resize(static_cast<std::size_t>((cx + 1) * cy));
  fy_.resize(static_cast<std::size_t>(cx * (cy + 1)));
  mask_.flags.assign(static_cast<std::size_t>(grid_.num_cvs()), 0);
}

double Solver2D::volume(int g) const {
  const int cx = grid_.cvs_x();
  return grid_.volume(g % cx, g / cx);
}

namespace {

double axis_center(const Grid1D& axis, int g) {
  const int k = axis.order;
  const int sv = g >= 0 ? g / k : -((-g + k - 1) / k);
  const int m = g - sv * k;
  const double frac = 0.5 * (axis.pattern[static_cast<std::size_t>(m)] + axis.pattern[static_cast<std::size_t>(m + 1)]);
  return axis.a + (sv + frac) * axis.sv_width;
}

}  // namespace

double Solver2D::extended_center_x(int gx) const { return axis_center(grid_.x, gx); }
double Solver2D::extended_center_y(int gy) const { return axis_center(grid_.y, gy); }

Averages Solver2D::cell_averages(const StateFunction& f, double t) const {
  const QuadratureRule rule = gauss_rule(grid_.order() + 2);
  const int cx = grid_.cvs_x();
  Averages out(static_cast<std::size_t>(grid_.num_cvs()));
  pool_.parallel_for(out.size(), [&](std::size_t b, std::size_t e, int) {
    for (std::size_t g = b; g < e; ++g) {
      const auto gx = static_cast<std::size_t>(static_cast<int>(g) % cx);
      const auto gy = static_cast<std::size_t>(static_cast<int>(g) / cx);
      const double xc = grid_.x.centers[gx];
      const double yc = grid_.y.centers[gy];
      const double hx = grid_.x.widths[gx];
      const double hy = grid_.y.widths[gy];
      State acc{};
      for (int a = 0; a < rule.size(); ++a) {
        for (int b2 = 0; b2 < rule.size(); ++b2) {
          const double w = 0.25 * rule.weights[static_cast<std::size_t>(a)] * rule.weights[static_cast<std::size_t>(b2)];
          const State v = f(xc + 0.5 * hx * rule.nodes[static_cast<std::size_t>(a)],
                            yc + 0.5 * hy * rule.nodes[static_cast<std::size_t>(b2)], t);
          for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += w * v[c];
        }
      }
      out[g] = acc;
    }
  });
  return out;
}

void Solver2D::fill_ghosts(const Averages& u, double t, Averages& ext) const {
  const int cx = grid_.cvs_x();
  const int cy = grid_.cvs_y();
  const int gd = ghosts_;
  const int we = cx + 2 * gd;
  ext.resize(static_cast<std::size_t>(we * (cy + 2 * gd)));
  const auto at = [&](int gx, int gy) -> State& {
    return ext[static_cast<std::size_t>((gy + gd) * we + gx + gd)];
  };
  const auto in = [&](int gx, int gy) -> const State& {
    return u[static_cast<std::size_t>(grid_.flat(gx, gy))];
  };
  const Model& model = cfg_.model;
  for (int gy = 0; gy < cy; ++gy) {
    std::copy_n(u.begin() + static_cast<std::ptrdiff_t>(gy) * cx, cx,
                ext.begin() + static_cast<std::ptrdiff_t>((gy + gd) * we + gd));
    const double yc = grid_.y.centers[static_cast<std::size_t>(gy)];
    const auto& left = cfg_.boundary.left.at(yc);
    const auto& right = cfg_.boundary.right.at(yc);
    for (int d = 1; d <= gd; ++d) {
      State& lo = at(-d, gy);
      State& hi = at(cx - 1 + d, gy);
      switch (left.kind) {
        case BoundaryKind::periodic: lo = in(cx - d, gy); break;
        case BoundaryKind::reflective: lo = mirror_state(model, in(d - 1, gy), Axis::x); break;
        case BoundaryKind::outflow: lo = in(0, gy); break;
        case BoundaryKind::prescribed: lo = left.state(extended_center_x(-d), yc, t); break;
      }
      switch (right.kind) {
        case BoundaryKind::periodic: hi = in(d - 1, gy); break;
        case BoundaryKind::reflective: hi = mirror_state(model, in(cx - d, gy), Axis::x); break;
        case BoundaryKind::outflow: hi = in(cx - 1, gy); break;
        case BoundaryKind::prescribed: hi = right.state(extended_center_x(cx - 1 + d), yc, t); break;
      }
    }
  }
  // Columns including the x ghosts, so corners are filled too.
  for (int gx = -gd; gx < cx + gd; ++gx) {
    const double xc = extended_center_x(gx);
    const auto& bottom = cfg_.boundary.bottom.at(xc);
    const auto& top = cfg_.boundary.top.at(xc);
    for (int d = 1; d <= gd; ++d) {
      State& lo = at(gx, -d);
      State& hi = at(gx, cy - 1 + d);
      switch (bottom.kind) {
        case BoundaryKind::periodic: lo = at(gx, cy - d); break;
        case BoundaryKind::reflective: lo = mirror_state(model, at(gx, d - 1), Axis::y); break;
        case BoundaryKind::outflow: lo = at(gx, 0); break;
        case BoundaryKind::prescribed: lo = bottom.state(xc, extended_center_y(-d), t); break;
      }
      switch (top.kind) {
        case BoundaryKind::periodic: hi = at(gx, d - 1); break;
        case BoundaryKind::reflective: hi = mirror_state(model, at(gx, cy - d), Axis::y); break;
        case BoundaryKind::outflow: hi = at(gx, cy - 1); break;
        case BoundaryKind::prescribed: hi = top.state(xc, extended_center_y(cy - 1 + d), t); break;
      }
    }
  }
}

State Solver2D::riemann_flux(const State& ul, const State& ur, Axis axis) const {
  if (cfg_.flux == LfVariant::global) {
    return lax_friedrichs(cfg_.model, ul, ur, axis, axis == Axis::x ? alpha_x_ : alpha_y_);
  }
  return lax_friedrichs(cfg_.model, ul, ur, axis);
}

void Solver2D::sv_traces(const Averages& u, int i, int j, bool detect) {
  const int k = grid_.order();
  const int nq = nq_;
  const int np = k * nq;
  const int cx = grid_.cvs_x();
  const int nv = cfg_.model.nvars();
  const LimiterParams& lp = cfg_.limiter;
  const bool run_detector = detect && lp.mode == LimiterMode::cvmsweno;

  std::array<double, kMaxOrder * kMaxOrder> uu{};
  std::array<double, kMaxEdges * kMaxOrder> a{};   // Ex U, (k+1) x k
  std::array<double, kMaxOrder * kMaxEdges> bm{};  // U Ex^T, k x (k+1)
  std::array<bool, kMaxOrder * kMaxOrder> flag{};

  for (int c = 0; c < nv; ++c) {
    const auto cc = static_cast<std::size_t>(c);
    for (int m = 0; m < k; ++m) {
      for (int n = 0; n < k; ++n) {
        uu[static_cast<std::size_t>(m * k + n)] = u[static_cast<std::size_t>(grid_.flat(i * k + m, j * k + n))][cc];
      }
    }
    for (int e = 0; e <= k; ++e) {
      for (int n = 0; n < k; ++n) {
        double sa = 0.0;
        double sb = 0.0;
        for (int m = 0; m < k; ++m) {
          sa += edge_op_(e, m) * uu[static_cast<std::size_t>(m * k + n)];
          sb += uu[static_cast<std::size_t>(n * k + m)] * edge_op_(e, m);
        }
        a[static_cast<std::size_t>(e * k + n)] = sa;
        bm[static_cast<std::size_t>(n * (k + 1) + e)] = sb;
      }
    }
    // x faces: value at SV x-edge e, Gauss point p of the y-direction CVs.
    for (int e = 0; e <= k; ++e) {
      const int fx = i * k + e;
      for (int p = 0; p < np; ++p) {
        double v = 0.0;
        for (int n = 0; n < k; ++n) v += a[static_cast<std::size_t>(e * k + n)] * gauss_op_(p, n);
        const int gy = j * k + p / nq;
        const auto idx = static_cast<std::size_t>((gy * (cx + 1) + fx) * nq + p % nq);
        if (e < k) xr_[idx][cc] = v;
        if (e > 0) xl_[idx][cc] = v;
      }
    }
    for (int p = 0; p < np; ++p) {
      const int gx = i * k + p / nq;
      for (int e = 0; e <= k; ++e) {
        double v = 0.0;
        for (int m = 0; m < k; ++m) v += gauss_op_(p, m) * bm[static_cast<std::size_t>(m * (k + 1) + e)];
        const int fy = j * k + e;
        const auto idx = static_cast<std::size_t>((fy * cx + gx) * nq + p % nq);
        if (e < k) yr_[idx][cc] = v;
        if (e > 0) yl_[idx][cc] = v;
      }
    }
    if (!run_detector) continue;
    for (int m = 0; m < k; ++m) {
      for (int n = 0; n < k; ++n) {
        const auto fl = static_cast<std::size_t>(m * k + n);
        if (flag[fl]) continue;
        const int gx = i * k + m;
        const int gy = j * k + n;
        // Midpoint traces on the four faces of CV (m, n).
        double xm = 0.0;
        double xp = 0.0;
        double ym = 0.0;
        double yp = 0.0;
        for (int q = 0; q < k; ++q) {
          xm += a[static_cast<std::size_t>(m * k + q)] * mid_op_(n, q);
          xp += a[static_cast<std::size_t>((m + 1) * k + q)] * mid_op_(n, q);
          ym += mid_op_(m, q) * bm[static_cast<std::size_t>(q * (k + 1) + n)];
          yp += mid_op_(m, q) * bm[static_cast<std::size_t>(q * (k + 1) + n + 1)];
        }
        const double avg = uu[fl];
        const bool sv_h = lp.tvb_length == TvbLength::sv;
        const double hx = sv_h ? grid_.x.sv_width : grid_.x.widths[static_cast<std::size_t>(gx)];
        const double hy = sv_h ? grid_.y.sv_width : grid_.y.widths[static_cast<std::size_t>(gy)];
        flag[fl] = tvb_flags(avg, xm, xp, ext_[ext_index(gx - 1, gy)][cc], ext_[ext_index(gx + 1, gy)][cc], lp.tvb_m, hx) ||
                   tvb_flags(avg, ym, yp, ext_[ext_index(gx, gy - 1)][cc], ext_[ext_index(gx, gy + 1)][cc], lp.tvb_m, hy);
      }
    }
  }
  if (!detect) return;
  const std::uint8_t fixed = lp.mode == LimiterMode::full ? 1 : 0;
  for (int m = 0; m < k; ++m) {
    for (int n = 0; n < k; ++n) {
      const auto g = static_cast<std::size_t>(grid_.flat(i * k + m, j * k + n));
      mask_.flags[g] = run_detector ? (flag[static_cast<std::size_t>(m * k + n)] ? 1 : 0) : fixed;
    }
  }
}

void Solver2D::limit_cv(int g) {
  const int k = grid_.order();
  const int nc = k * k;
  const int cx = grid_.cvs_x();
  const int gx = g % cx;
  const int gy = g / cx;
  const int s = limiter_.half_width();
  const int w = limiter_.width();
  const int nv = cfg_.model.nvars();
  const int nq = nq_;
  const bool characteristic = cfg_.limiter.characteristic && cfg_.model.equation == Equation::euler;

  std::array<State, (kMaxOrder / 2 * 2 + 1) * (kMaxOrder / 2 * 2 + 1)> cells{};
  std::array<double, cells.size()> vals{};
  // x faces use the x-characteristic result, y faces the y one.
  std::array<std::array<std::array<double, kMaxCoeffs>, kMaxVars>, 2> coeffs{};
  const auto ncell = static_cast<std::size_t>(w * w);
  for (int ix = 0; ix < w; ++ix) {
    for (int iy = 0; iy < w; ++iy) cells[static_cast<std::size_t>(ix * w + iy)] = ext_[ext_index(gx + ix - s, gy + iy - s)];
  }
  const auto limit_components = [&](const std::array<State, cells.size()>& src,
                                    std::array<std::array<double, kMaxCoeffs>, kMaxVars>& out) {
    for (int c = 0; c < nv; ++c) {
      for (std::size_t j = 0; j < ncell; ++j) vals[j] = src[j][static_cast<std::size_t>(c)];
      const SwenoResult r = limiter_.limit(gx % k, gy % k, std::span<const double>(vals.data(), ncell), cfg_.limiter);
      std::copy_n(r.coeffs.begin(), nc, out[static_cast<std::size_t>(c)].begin());
    }
  };

  if (!characteristic) {
    limit_components(cells, coeffs[0]);
    coeffs[1] = coeffs[0];
  } else {
    const State& avg = cells[static_cast<std::size_t>(s * w + s)];
    for (Axis axis : {Axis::x, Axis::y}) {
      CharacteristicBasis basis;
      try {
        basis = characteristic_basis(cfg_.model, avg, axis);
      } catch (const NonphysicalState& ex) {
        throw at_point(ex, "limiter CV", grid_.x.centers[static_cast<std::size_t>(gx)],
                       grid_.y.centers[static_cast<std::size_t>(gy)]);
      }
      std::array<State, cells.size()> wc{};
      for (std::size_t j = 0; j < ncell; ++j) wc[j] = basis.to_characteristic(cells[j]);
      std::array<std::array<double, kMaxCoeffs>, kMaxVars> cc{};
      limit_components(wc, cc);
      for (int c = 0; c < nv; ++c) {
        for (int a = 0; a < nc; ++a) {
          double v = 0.0;
          for (int d = 0; d < nv; ++d) {
            v += basis.right[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)] *
                 cc[static_cast<std::size_t>(d)][static_cast<std::size_t>(a)];
          }
          coeffs[axis == Axis::x ? 0 : 1][static_cast<std::size_t>(c)][static_cast<std::size_t>(a)] = v;
        }
      }
    }
  }

  std::array<State, kMaxGaussPoints> xm{};
  std::array<State, kMaxGaussPoints> xp{};
  std::array<State, kMaxGaussPoints> ym{};
  std::array<State, kMaxGaussPoints> yp{};
  for (int q = 0; q < nq; ++q) {
    const auto qq = static_cast<std::size_t>(q);
    for (int c = 0; c < nv; ++c) {
      const auto cc = static_cast<std::size_t>(c);
      for (int a = 0; a < nc; ++a) {
        const auto aa = static_cast<std::size_t>(a);
        const double vx = coeffs[0][cc][aa];
        const double vy = coeffs[1][cc][aa];
        xm[qq][cc] += face_xm_(q, a) * vx;
        xp[qq][cc] += face_xp_(q, a) * vx;
        ym[qq][cc] += face_ym_(q, a) * vy;
        yp[qq][cc] += face_yp_(q, a) * vy;
      }
    }
  }
  for (int q = 0; q < nq; ++q) {
    const auto qq = static_cast<std::size_t>(q);
    xr_[static_cast<std::size_t>((gy * (cx + 1) + gx) * nq + q)] = xm[qq];
    xl_[static_cast<std::size_t>((gy * (cx + 1) + gx + 1) * nq + q)] = xp[qq];
    yr_[static_cast<std::size_t>((gy * cx + gx) * nq + q)] = ym[qq];
    yl_[static_cast<std::size_t>(((gy + 1) * cx + gx) * nq + q)] = yp[qq];
  }
}

bool Solver2D::pull_traces_to_average(int g, const State& avg) {
  const int cx = grid_.cvs_x();
  const int gx = g % cx;
  const int gy = g / cx;
  const int nq = nq_;
  const int nv = cfg_.model.nvars();
  const auto xm = static_cast<std::size_t>((gy * (cx + 1) + gx) * nq);
  const auto xp = static_cast<std::size_t>((gy * (cx + 1) + gx + 1) * nq);
  const auto ym = static_cast<std::size_t>((gy * cx + gx) * nq);
  const auto yp = static_cast<std::size_t>(((gy + 1) * cx + gx) * nq);
  const std::array<std::pair<Averages*, std::size_t>, 4> sides{{{&xr_, xm}, {&xl_, xp}, {&yr_, ym}, {&yl_, yp}}};

  const auto all_physical = [&](double theta) {
    for (const auto& [arr, base] : sides) {
      for (int q = 0; q < nq; ++q) {
        const State& tr = (*arr)[base + static_cast<std::size_t>(q)];
        State v{};
        for (int c = 0; c < nv; ++c) {
          const auto cc = static_cast<std::size_t>(c);
          v[cc] = avg[cc] + theta * (tr[cc] - avg[cc]);
        }
        if (!is_physical(cfg_.model, v)) return false;
      }
    }
    return true;
  };
  if (all_physical(1.0)) return false;
  double theta = 0.5;
  while (theta > 1e-3 && !all_physical(theta)) theta *= 0.5;
  if (!all_physical(theta)) theta = 0.0;
  for (const auto& [arr, base] : sides) {
    for (int q = 0; q < nq; ++q) {
      State& tr = (*arr)[base + static_cast<std::size_t>(q)];
      for (int c = 0; c < nv; ++c) {
        const auto cc = static_cast<std::size_t>(c);
        tr[cc] = avg[cc] + theta * (tr[cc] - avg[cc]);
      }
    }
  }
  return true;
}

void Solver2D::residual(const Averages& u, double t, bool detect, Averages& dudt) {
  const int cx = grid_.cvs_x();
  const int cy = grid_.cvs_y();
  const int nq = nq_;
  const int nv = cfg_.model.nvars();
  if (static_cast<int>(u.size()) != grid_.num_cvs()) throw std::invalid_argument("field size does not match grid");

  fill_ghosts(u, t, ext_);
  pool_.parallel_for(static_cast<std::size_t>(grid_.y.num_svs), [&](std::size_t b, std::size_t e, int) {
    for (auto j = static_cast<int>(b); j < static_cast<int>(e); ++j) {
      for (int i = 0; i < grid_.x.num_svs; ++i) sv_traces(u, i, j, detect);
    }
  });

  if (cfg_.limiter.mode != LimiterMode::off) {
    troubled_.clear();
    for (int g = 0; g < grid_.num_cvs(); ++g) {
      if (mask_[g]) troubled_.push_back(g);
    }
    pool_.parallel_for(troubled_.size(), [&](std::size_t b, std::size_t e, int) {
      for (std::size_t j = b; j < e; ++j) limit_cv(troubled_[j]);
    });
  }
  kinds_ = classify_faces_2d(grid_, mask_);
  if (cfg_.limiter.trace_fallback && cfg_.model.equation == Equation::euler) {
    pulled_.assign(static_cast<std::size_t>(grid_.num_cvs()), 0);
    pool_.parallel_for(pulled_.size(), [&](std::size_t b, std::size_t e, int) {
      for (std::size_t g = b; g < e; ++g) pulled_[g] = pull_traces_to_average(static_cast<int>(g), u[g]) ? 1 : 0;
    });
    // A pulled CV no longer matches its SV neighbours, so its faces need the Riemann flux.
    for (int gy = 0; gy < cy; ++gy) {
      for (int gx = 0; gx < cx; ++gx) {
        if (!pulled_[static_cast<std::size_t>(grid_.flat(gx, gy))]) continue;
        kinds_.x[static_cast<std::size_t>(gy * (cx + 1) + gx)] = FaceKind::riemann;
        kinds_.x[static_cast<std::size_t>(gy * (cx + 1) + gx + 1)] = FaceKind::riemann;
        kinds_.y[static_cast<std::size_t>(gy * cx + gx)] = FaceKind::riemann;
        kinds_.y[static_cast<std::size_t>((gy + 1) * cx + gx)] = FaceKind::riemann;
      }
    }
  }

  if (cfg_.flux == LfVariant::global) {
    double ax = 0.0;
    double ay = 0.0;
    for (int gy = 0; gy < cy; ++gy) {
      for (int fx = 0; fx <= cx; ++fx) {
        for (int q = 0; q < nq; ++q) {
          const auto idx = static_cast<std::size_t>((gy * (cx + 1) + fx) * nq + q);
          if (fx > 0) ax = std::max(ax, max_wavespeed(cfg_.model, xl_[idx], Axis::x));
          if (fx < cx) ax = std::max(ax, max_wavespeed(cfg_.model, xr_[idx], Axis::x));
        }
      }
    }
    for (int fy = 0; fy <= cy; ++fy) {
      for (int gx = 0; gx < cx; ++gx) {
        for (int q = 0; q < nq; ++q) {
          const auto idx = static_cast<std::size_t>((fy * cx + gx) * nq + q);
          if (fy > 0) ay = std::max(ay, max_wavespeed(cfg_.model, yl_[idx], Axis::y));
          if (fy < cy) ay = std::max(ay, max_wavespeed(cfg_.model, yr_[idx], Axis::y));
        }
      }
    }
    alpha_x_ = ax;
    alpha_y_ = ay;
  }

  const Model& model = cfg_.model;
  const bool periodic_x = cfg_.boundary.left.is_periodic();
  const bool periodic_y = cfg_.boundary.bottom.is_periodic();
  const double x0 = grid_.x.a;
  const double x1 = grid_.x.b;
  const double y0 = grid_.y.a;
  const double y1 = grid_.y.b;

  pool_.parallel_for(static_cast<std::size_t>(cy), [&](std::size_t b, std::size_t e, int) {
    for (auto gy = static_cast<int>(b); gy < static_cast<int>(e); ++gy) {
      const double yc = grid_.y.centers[static_cast<std::size_t>(gy)];
      const double hy = grid_.y.widths[static_cast<std::size_t>(gy)];
      const auto row = static_cast<std::size_t>(gy * (cx + 1));
      for (int fx = 0; fx <= cx; ++fx) {
        if (periodic_x && fx == cx) continue;
        const auto base = (row + static_cast<std::size_t>(fx)) * static_cast<std::size_t>(nq);
        const bool riemann = kinds_.x[row + static_cast<std::size_t>(fx)] == FaceKind::riemann;
        State acc{};
        for (int q = 0; q < nq; ++q) {
          const double yq = yc + qnodes_[static_cast<std::size_t>(q)] * hy;
          const double wq = qweights_[static_cast<std::size_t>(q)];
          State f;
          try {
            if (fx > 0 && fx < cx) {
              const State& ul = xl_[base + static_cast<std::size_t>(q)];
              f = riemann ? riemann_flux(ul, xr_[base + static_cast<std::size_t>(q)], Axis::x)
                          : analytic_flux(model, ul, Axis::x);
            } else if (periodic_x) {
              f = riemann_flux(xl_[(row + static_cast<std::size_t>(cx)) * static_cast<std::size_t>(nq) + static_cast<std::size_t>(q)],
                               xr_[base + static_cast<std::size_t>(q)], Axis::x);
            } else if (fx == 0) {
              const State& in = xr_[base + static_cast<std::size_t>(q)];
              f = riemann_flux(outside_state(model, cfg_.boundary.left.at(yq), in, Axis::x, x0, yq, t), in, Axis::x);
            } else {
              const State& in = xl_[base + static_cast<std::size_t>(q)];
              f = riemann_flux(in, outside_state(model, cfg_.boundary.right.at(yq), in, Axis::x, x1, yq, t), Axis::x);
            }
          } catch (const NonphysicalState& ex) {
            throw at_point(ex, "x face", grid_.x.edges[static_cast<std::size_t>(fx)], yq);
          }
          for (int c = 0; c < nv; ++c) acc[static_cast<std::size_t>(c)] += wq * f[static_cast<std::size_t>(c)];
        }
        fx_[row + static_cast<std::size_t>(fx)] = acc;
        if (periodic_x && fx == 0) fx_[row + static_cast<std::size_t>(cx)] = acc;
      }
    }
  });

  pool_.parallel_for(static_cast<std::size_t>(cy + 1), [&](std::size_t b, std::size_t e, int) {
    for (auto fy = static_cast<int>(b); fy < static_cast<int>(e); ++fy) {
      if (periodic_y && fy == cy) continue;
      const auto row = static_cast<std::size_t>(fy * cx);
      for (int gx = 0; gx < cx; ++gx) {
        const double xc = grid_.x.centers[static_cast<std::size_t>(gx)];
        const double hx = grid_.x.widths[static_cast<std::size_t>(gx)];
        const auto base = (row + static_cast<std::size_t>(gx)) * static_cast<std::size_t>(nq);
        const bool riemann = kinds_.y[row + static_cast<std::size_t>(gx)] == FaceKind::riemann;
        State acc{};
        for (int q = 0; q < nq; ++q) {
          const double xq = xc + qnodes_[static_cast<std::size_t>(q)] * hx;
          const double wq = qweights_[static_cast<std::size_t>(q)];
          State f;
          try {
            if (fy > 0 && fy < cy) {
              const State& ul = yl_[base + static_cast<std::size_t>(q)];
              f = riemann ? riemann_flux(ul, yr_[base + static_cast<std::size_t>(q)], Axis::y)
                          : analytic_flux(model, ul, Axis::y);
            } else if (periodic_y) {
              const auto top = (static_cast<std::size_t>(cy * cx + gx)) * static_cast<std::size_t>(nq) + static_cast<std::size_t>(q);
              f = riemann_flux(yl_[top], yr_[base + static_cast<std::size_t>(q)], Axis::y);
            } else if (fy == 0) {
              const State& in = yr_[base + static_cast<std::size_t>(q)];
              f = riemann_flux(outside_state(model, cfg_.boundary.bottom.at(xq), in, Axis::y, xq, y0, t), in, Axis::y);
            } else {
              const State& in = yl_[base + static_cast<std::size_t>(q)];
              f = riemann_flux(in, outside_state(model, cfg_.boundary.top.at(xq), in, Axis::y, xq, y1, t), Axis::y);
            }
          } catch (const NonphysicalState& ex) {
            throw at_point(ex, "y face", xq, grid_.y.edges[static_cast<std::size_t>(fy)]);
          }
          for (int c = 0; c < nv; ++c) acc[static_cast<std::size_t>(c)] += wq * f[static_cast<std::size_t>(c)];
        }
        fy_[row + static_cast<std::size_t>(gx)] = acc;
        if (periodic_y && fy == 0) fy_[static_cast<std::size_t>(cy * cx + gx)] = acc;
      }
    }
  });

  dudt.resize(u.size());
  pool_.parallel_for(static_cast<std::size_t>(cy), [&](std::size_t b, std::size_t e, int) {
    for (auto gy = static_cast<int>(b); gy < static_cast<int>(e); ++gy) {
      const double iy = 1.0 / grid_.y.widths[static_cast<std::size_t>(gy)];
      for (int gx = 0; gx < cx; ++gx) {
        const double ix = 1.0 / grid_.x.widths[static_cast<std::size_t>(gx)];
        const State& fw = fx_[static_cast<std::size_t>(gy * (cx + 1) + gx)];
        const State& fe = fx_[static_cast<std::size_t>(gy * (cx + 1) + gx + 1)];
        const State& fs = fy_[static_cast<std::size_t>(gy * cx + gx)];
        const State& fn = fy_[static_cast<std::size_t>((gy + 1) * cx + gx)];
        State r{};
        for (int c = 0; c < nv; ++c) {
          const auto cc = static_cast<std::size_t>(c);
          r[cc] = -(fe[cc] - fw[cc]) * ix - (fn[cc] - fs[cc]) * iy;
        }
        dudt[static_cast<std::size_t>(grid_.flat(gx, gy))] = r;
      }
    }
  });
}

double Solver2D::stable_dt(const Averages& u) const {
  return compute_dt(grid_, u, cfg_.model, cfg_.cfl, cfg_.max_dt);
}

}  // namespace svweno
