#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "svweno/harness/analysis.hpp"
#include "svweno/harness/presets.hpp"
#include "svweno/solver.hpp"

using namespace svweno;

namespace {

ProblemConfig uniform_euler_1d(State prim, int nsv, int order) {
  ProblemConfig c;
  c.model = Model::euler_1d();
  c.domain = {0.0, 1.0, 0.0, 1.0};
  c.nsv_x = nsv;
  c.order = order;
  c.t_final = 0.1;
  c.boundary = BoundarySpec::uniform(BoundaryKind::periodic);
  const State u = primitive_to_conserved(c.model, prim);
  c.initial = [u](double, double, double) { return u; };
  return c;
}

double total(const Discretization& d, const Averages& u, int c) {
  double s = 0.0;
  for (int g = 0; g < d.num_cvs(); ++g) s += d.volume(g) * u[static_cast<std::size_t>(g)][static_cast<std::size_t>(c)];
  return s;
}

bool bit_identical(const Averages& a, const Averages& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t g = 0; g < a.size(); ++g) {
    if (a[g] != b[g]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("ghosts: periodic wrap in 1D") {
  ProblemConfig c = preset("sine1d");
  c.nsv_x = 4;
  Solver1D s(c);
  const Averages u = s.initial_averages();
  Averages ext;
  s.fill_ghosts(u, 0.0, ext);
  const int gd = s.ghost_depth();
  const int n = s.num_cvs();
  REQUIRE(ext.size() == static_cast<std::size_t>(n + 2 * gd));
  for (int d = 1; d <= gd; ++d) {
    CHECK(ext[static_cast<std::size_t>(gd - d)] == u[static_cast<std::size_t>(n - d)]);
    CHECK(ext[static_cast<std::size_t>(gd + n - 1 + d)] == u[static_cast<std::size_t>(d - 1)]);
  }
}

TEST_CASE("ghosts: reflective wall flips the normal momentum") {
  ProblemConfig c = uniform_euler_1d({1.0, 0.0, 1.0}, 4, 3);
  c.boundary = BoundarySpec::uniform(BoundaryKind::reflective);
  Solver1D s(c);
  Averages u = s.initial_averages();
  u[0] = {1.0, 0.3, 2.6, 0.0};
  Averages ext;
  s.fill_ghosts(u, 0.0, ext);
  const State& ghost = ext[static_cast<std::size_t>(s.ghost_depth() - 1)];
  CHECK(ghost[0] == 1.0);
  CHECK(ghost[1] == -0.3);
  CHECK(ghost[2] == 2.6);
  CHECK(mirror_state(Model::euler_2d(), {1.0, 0.3, 0.4, 2.6}, Axis::y) == State{1.0, 0.3, -0.4, 2.6});
}

TEST_CASE("ghosts: periodic wrap in 2D") {
  ProblemConfig c = preset("sine2d");
  c.nsv_x = 3;
  c.nsv_y = 2;
  Solver2D s(c);
  const Averages u = s.initial_averages();
  Averages ext;
  s.fill_ghosts(u, 0.0, ext);
  const int gd = s.ghost_depth();
  const int cx = s.grid().cvs_x();
  const int cy = s.grid().cvs_y();
  const int row = cx + 2 * gd;
  const auto at = [&](int gx, int gy) { return ext[static_cast<std::size_t>((gy + gd) * row + gx + gd)]; };
  for (int gy = 0; gy < cy; ++gy) {
    CHECK(at(-1, gy) == u[static_cast<std::size_t>(s.grid().flat(cx - 1, gy))]);
    CHECK(at(cx, gy) == u[static_cast<std::size_t>(s.grid().flat(0, gy))]);
  }
  for (int gx = 0; gx < cx; ++gx) CHECK(at(gx, -1) == u[static_cast<std::size_t>(s.grid().flat(gx, cy - 1))]);
}

TEST_CASE("double Mach top boundary switches at the moving shock foot") {
  const double xs = 1.0 / 6.0 + 1.0 / std::sqrt(3.0);
  CHECK(double_mach_top_switch(0.0) == doctest::Approx(xs).epsilon(1e-15));
  CHECK(double_mach_top_switch(0.1) == doctest::Approx(1.0 / 6.0 + 3.0 / std::sqrt(3.0)).epsilon(1e-15));
  const ProblemConfig c = preset("doublemach");
  const auto& top = c.boundary.top.at(0.0);
  CHECK(top.kind == BoundaryKind::prescribed);
  CHECK(top.state(xs - 1e-9, 1.0, 0.0) == double_mach_post_shock());
  CHECK(top.state(xs + 1e-9, 1.0, 0.0) == double_mach_pre_shock());
  CHECK(c.boundary.bottom.at(0.1).kind == BoundaryKind::prescribed);
  CHECK(c.boundary.bottom.at(0.2).kind == BoundaryKind::reflective);
}

TEST_CASE("residual vanishes for uniform states") {
  for (int k = kMinOrder; k <= kMaxOrder; ++k) {
    auto d = make_discretization(uniform_euler_1d({0.7, 0.4, 2.0}, 6, k));
    const Averages u = d->initial_averages();
    Averages dudt(u.size());
    d->residual(u, 0.0, true, dudt);
    for (const State& r : dudt) {
      for (int c = 0; c < 3; ++c) CHECK(std::abs(r[static_cast<std::size_t>(c)]) < 1e-12);
    }
    CHECK(d->mask().count() == 0);
  }
  ProblemConfig c2 = preset("sine2d");
  c2.nsv_x = 3;
  c2.nsv_y = 3;
  c2.initial = [](double, double, double) { return State{2.0, 0.0, 0.0, 0.0}; };
  auto d2 = make_discretization(c2);
  const Averages u2 = d2->initial_averages();
  Averages r2(u2.size());
  d2->residual(u2, 0.0, true, r2);
  for (const State& r : r2) CHECK(std::abs(r[0]) < 1e-12);
}

TEST_CASE("residual of u = x under unit advection is -1") {
  for (int k = kMinOrder; k <= kMaxOrder; ++k) {
    ProblemConfig c;
    c.model = Model::advection_1d(1.0);
    c.domain = {0.0, 1.0, 0.0, 1.0};
    c.nsv_x = 5;
    c.order = k;
    c.limiter.mode = LimiterMode::off;
    const StateFunction lin = [](double x, double, double) { return State{x, 0.0, 0.0, 0.0}; };
    c.initial = lin;
    c.boundary.left = BoundarySide::prescribed(lin);
    c.boundary.right = BoundarySide::prescribed(lin);
    auto d = make_discretization(c);
    const Averages u = d->initial_averages();
    Averages dudt(u.size());
    d->residual(u, 0.0, true, dudt);
    for (const State& r : dudt) CHECK(r[0] == doctest::Approx(-1.0).epsilon(1e-11));
  }
}

TEST_CASE("stable time step") {
  const auto g = build_grid_1d(0.0, 1.0, 10, 3);
  const double hmin = *std::min_element(g.widths.begin(), g.widths.end());
  const Averages adv(static_cast<std::size_t>(g.num_cvs()), State{1.0, 0.0, 0.0, 0.0});
  CHECK(compute_dt(g, adv, Model::advection_1d(1.0), 0.5, 1e-2) == doctest::Approx(0.5 * hmin).epsilon(1e-14));

  const Model e = Model::euler_1d();
  const Averages rest(static_cast<std::size_t>(g.num_cvs()), primitive_to_conserved(e, {1.0, 0.0, 1.0, 0.0}));
  CHECK(compute_dt(g, rest, e, 0.5, 1e-2) == doctest::Approx(0.5 * hmin / std::sqrt(1.4)).epsilon(1e-14));

  CHECK(compute_dt(g, adv, Model::advection_1d(0.0), 0.5, 0.25) == 0.25);
}

TEST_CASE("Sod initial data flags only CVs near the jump") {
  // With an even SV count the jump lies on an SV face and every SV
  // reconstructs a constant; an odd count puts it inside an SV.
  ProblemConfig c = preset("sod1d");
  c.limiter.tvb_m = 0.01;
  c.nsv_x = 99;
  auto d = make_discretization(c);
  const Averages u = d->initial_averages();
  Averages dudt(u.size());
  d->residual(u, 0.0, true, dudt);
  const auto& grid = static_cast<const Solver1D&>(*d).grid();
  CHECK(d->mask().count() > 0);
  for (int g = 0; g < d->num_cvs(); ++g) {
    if (d->mask()[g]) CHECK(std::abs(grid.centers[static_cast<std::size_t>(g)]) < 2.0 * grid.sv_width);
  }
}

TEST_CASE("periodic runs conserve every component") {
  for (const char* name : {"sine1d", "eulersine1d"}) {
    ProblemConfig c = preset(name);
    c.nsv_x = 20;
    c.t_final = 0.5;
    auto d = make_discretization(c);
    const Averages u0 = d->initial_averages();
    const RunResult r = advance(c);
    for (int comp = 0; comp < c.model.nvars(); ++comp) {
      CHECK(std::abs(total(*d, r.field.averages, comp) - total(*d, u0, comp)) < 1e-11);
    }
  }
  ProblemConfig c = preset("sine2d");
  c.nsv_x = 6;
  c.nsv_y = 6;
  c.t_final = 0.2;
  auto d = make_discretization(c);
  const RunResult r = advance(c);
  CHECK(std::abs(total(*d, r.field.averages, 0) - total(*d, d->initial_averages(), 0)) < 1e-11);
}

TEST_CASE("results do not depend on the worker count") {
  ProblemConfig a = preset("sod1d");
  a.nsv_x = 40;
  a.t_final = 0.3;
  ProblemConfig b = a;
  b.workers = 3;
  CHECK(bit_identical(advance(a).field.averages, advance(b).field.averages));

  ProblemConfig a2 = preset("riemann2d1");
  a2.nsv_x = 8;
  a2.nsv_y = 8;
  a2.t_final = 0.03;
  ProblemConfig b2 = a2;
  b2.workers = 2;
  const RunResult ra = advance(a2);
  const RunResult rb = advance(b2);
  CHECK(bit_identical(ra.field.averages, rb.field.averages));
  CHECK(ra.log.final_troubled == rb.log.final_troubled);
}

TEST_CASE("limiting everywhere keeps third-order sine accuracy") {
  ProblemConfig c = preset("sine1d");
  c.nsv_x = 100;
  c.limiter.mode = LimiterMode::full;
  auto d = make_discretization(c);
  const RunResult r = advance(c);
  const Averages exact = d->cell_averages(c.exact, c.t_final);
  const double l1 = error_norms(r.field.averages, exact).l1;
  CHECK(l1 > 2.79e-6 / 3.0);
  CHECK(l1 < 2.79e-6 * 3.0);
}

TEST_CASE("characteristic switch is inert for scalar problems") {
  ProblemConfig a = preset("sine1d");
  a.nsv_x = 10;
  a.limiter.mode = LimiterMode::full;
  a.t_final = 0.2;
  ProblemConfig b = a;
  b.limiter.characteristic = false;
  CHECK(bit_identical(advance(a).field.averages, advance(b).field.averages));
}

TEST_CASE("an empty mask matches the unlimited scheme bit for bit") {
  ProblemConfig a = preset("sine1d");
  a.nsv_x = 12;
  a.t_final = 0.3;
  a.limiter.tvb_m = 1e12;
  ProblemConfig b = a;
  b.limiter.mode = LimiterMode::off;
  const RunResult ra = advance(a);
  CHECK(ra.log.final_troubled.empty());
  CHECK(bit_identical(ra.field.averages, advance(b).field.averages));
}

TEST_CASE("fluid at rest stays at rest") {
  ProblemConfig c = uniform_euler_1d({1.0, 0.0, 1.0}, 8, 4);
  c.boundary = BoundarySpec::uniform(BoundaryKind::reflective);
  const RunResult r = advance(c);
  const State u0 = primitive_to_conserved(c.model, {1.0, 0.0, 1.0, 0.0});
  for (const State& u : r.field.averages) {
    for (int comp = 0; comp < 3; ++comp) CHECK(u[static_cast<std::size_t>(comp)] == doctest::Approx(u0[static_cast<std::size_t>(comp)]).epsilon(1e-14));
  }
  CHECK(r.field.time == c.t_final);
}

TEST_CASE("invalid configurations and nonphysical data") {
  ProblemConfig c = preset("sine1d");
  c.order = 6;
  CHECK_THROWS_AS(make_discretization(c), std::invalid_argument);
  c = preset("sine1d");
  c.nsv_x = 0;
  CHECK_THROWS_AS(make_discretization(c), std::invalid_argument);
  c = preset("sine1d");
  c.cfl = -0.5;
  CHECK_THROWS_AS(make_discretization(c), std::invalid_argument);

  ProblemConfig bad = uniform_euler_1d({1.0, 0.0, 1.0}, 4, 3);
  bad.initial = [](double, double, double) { return State{-1.0, 0.0, 1.0, 0.0}; };
  CHECK_THROWS_AS(advance(bad), SolverAbort);
}
