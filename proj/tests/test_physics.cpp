#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "doctest.h"
#include "oracles.hpp"
#include "svweno/harness/presets.hpp"
#include "svweno/physics.hpp"

using namespace svweno;

namespace {

State prim1(double rho, double u, double p) { return {rho, u, p, 0.0}; }

}  // namespace

TEST_CASE("analytic flux: advection and Euler at rest") {
  const Model adv = Model::advection_1d(1.0);
  CHECK(analytic_flux(adv, {0.3, 0, 0, 0}, Axis::x)[0] == doctest::Approx(0.3));

  const Model e = Model::euler_1d();
  const State u = primitive_to_conserved(e, prim1(1.0, 0.0, 1.0));
  CHECK(u[0] == doctest::Approx(1.0));
  CHECK(u[1] == doctest::Approx(0.0));
  CHECK(u[2] == doctest::Approx(2.5));
  const State f = analytic_flux(e, u, Axis::x);
  CHECK(f[0] == doctest::Approx(0.0));
  CHECK(f[1] == doctest::Approx(1.0));
  CHECK(f[2] == doctest::Approx(0.0));
}

TEST_CASE("analytic flux: Lax left state against the closed form") {
  const Model e = Model::euler_1d();
  const State u = primitive_to_conserved(e, prim1(0.445, 0.698, 3.528));
  const auto ref = oracle::euler_flux_1d(u[0], u[1], u[2]);
  const State f = analytic_flux(e, u, Axis::x);
  for (std::size_t c = 0; c < 3; ++c) CHECK(f[c] == doctest::Approx(ref[c]).epsilon(1e-14));
  // rho u, rho u^2 + p, u (E + p) by hand
  CHECK(f[0] == doctest::Approx(0.445 * 0.698));
  CHECK(f[1] == doctest::Approx(0.445 * 0.698 * 0.698 + 3.528));
  CHECK(f[2] == doctest::Approx(0.698 * (3.528 / 0.4 + 0.5 * 0.445 * 0.698 * 0.698 + 3.528)));
}

TEST_CASE("2D flux rotates with the axis") {
  const Model e = Model::euler_2d();
  const State u = primitive_to_conserved(e, {1.2, 0.3, -0.7, 2.0});
  const State fx = analytic_flux(e, u, Axis::x);
  const State fy = analytic_flux(e, u, Axis::y);
  const double p = 2.0;
  CHECK(fx[0] == doctest::Approx(1.2 * 0.3));
  CHECK(fx[1] == doctest::Approx(1.2 * 0.3 * 0.3 + p));
  CHECK(fx[2] == doctest::Approx(1.2 * 0.3 * -0.7));
  CHECK(fy[0] == doctest::Approx(1.2 * -0.7));
  CHECK(fy[2] == doctest::Approx(1.2 * 0.49 + p));
  CHECK(fy[3] == doctest::Approx(-0.7 * (u[3] + p)));
}

TEST_CASE("max wave speed") {
  CHECK(max_wavespeed(Model::advection_1d(-2.0), {1, 0, 0, 0}, Axis::x) == doctest::Approx(2.0));
  const Model e = Model::euler_1d();
  CHECK(max_wavespeed(e, primitive_to_conserved(e, prim1(1, 0, 1)), Axis::x) ==
        doctest::Approx(std::sqrt(1.4)).epsilon(1e-14));
  CHECK(max_wavespeed(e, primitive_to_conserved(e, prim1(0.125, 0, 0.1)), Axis::x) ==
        doctest::Approx(std::sqrt(1.12)).epsilon(1e-14));
}

TEST_CASE("Lax-Friedrichs flux") {
  const Model adv = Model::advection_1d(1.0);
  CHECK(lax_friedrichs(adv, {1, 0, 0, 0}, {0, 0, 0, 0}, Axis::x)[0] == doctest::Approx(1.0));

  const Model e = Model::euler_1d();
  const State ul = primitive_to_conserved(e, prim1(1.0, 0.0, 1.0));
  const State ur = primitive_to_conserved(e, prim1(0.125, 0.0, 0.1));
  const auto fl = oracle::euler_flux_1d(ul[0], ul[1], ul[2]);
  const auto fr = oracle::euler_flux_1d(ur[0], ur[1], ur[2]);
  const double alpha = std::max(std::sqrt(1.4), std::sqrt(1.4 * 0.1 / 0.125));
  const State f = lax_friedrichs(e, ul, ur, Axis::x);
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(f[c] == doctest::Approx(0.5 * (fl[c] + fr[c]) - 0.5 * alpha * (ur[c] - ul[c])).epsilon(1e-14));
  }
  const State g = lax_friedrichs(e, ul, ur, Axis::x, 3.0);
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(g[c] == doctest::Approx(0.5 * (fl[c] + fr[c]) - 1.5 * (ur[c] - ul[c])).epsilon(1e-14));
  }
}

TEST_CASE("Lax-Friedrichs consistency F(u, u) = f(u)") {
  const Model e2 = Model::euler_2d();
  for (const State& prim : {State{1.0, 0.2, -0.4, 1.0}, State{0.1, 3.0, 1.0, 0.01}, State{8.0, 7.14, -4.125, 116.5}}) {
    const State u = primitive_to_conserved(e2, prim);
    for (Axis ax : {Axis::x, Axis::y}) {
      const State f = analytic_flux(e2, u, ax);
      const State g = lax_friedrichs(e2, u, u, ax);
      for (std::size_t c = 0; c < 4; ++c) CHECK(std::abs(f[c] - g[c]) <= 1e-13 * std::max(1.0, std::abs(f[c])));
    }
  }
}

TEST_CASE("primitive/conserved conversion") {
  const Model e = Model::euler_1d();
  const State a = primitive_to_conserved(e, prim1(0.125, 0.0, 0.1));
  CHECK(a[0] == doctest::Approx(0.125));
  CHECK(a[2] == doctest::Approx(0.25));

  const Model e2 = Model::euler_2d();
  const State post = double_mach_post_shock();
  CHECK(post[0] == 8.0);
  CHECK(post[1] == 57.1597);
  CHECK(post[2] == -33.0012);
  CHECK(post[3] == 563.544);
  const State w = conserved_to_primitive(e2, post);
  const double deg30 = oracle::kPi / 6.0;
  CHECK(w[1] == doctest::Approx(8.25 * std::cos(-deg30)).epsilon(1e-4));
  CHECK(w[2] == doctest::Approx(8.25 * std::sin(-deg30)).epsilon(1e-4));
  CHECK(w[3] == doctest::Approx(116.5).epsilon(1e-4));
  const State back = primitive_to_conserved(e2, w);
  for (std::size_t c = 0; c < 4; ++c) CHECK(back[c] == doctest::Approx(post[c]).epsilon(1e-14));
}

TEST_CASE("nonphysical states are rejected") {
  const Model e = Model::euler_1d();
  CHECK_FALSE(is_physical(e, {-1.0, 0.0, 1.0, 0.0}));
  CHECK_FALSE(is_physical(e, {1.0, 3.0, 1.0, 0.0}));
  CHECK_FALSE(is_physical(e, {NAN, 0.0, 1.0, 0.0}));
  CHECK_THROWS_AS(analytic_flux(e, {1.0, 3.0, 1.0, 0.0}, Axis::x), NonphysicalState);
  CHECK_THROWS_AS(max_wavespeed(e, {0.0, 0.0, 1.0, 0.0}, Axis::x), NonphysicalState);
  CHECK_THROWS_AS(Model::euler_1d(1.0), std::invalid_argument);
}

TEST_CASE("characteristic basis: advection is the identity") {
  const auto b = characteristic_basis(Model::advection_1d(1.0), {0.7, 0, 0, 0}, Axis::x);
  CHECK(b.n == 1);
  CHECK(b.left[0][0] == doctest::Approx(1.0));
  CHECK(b.right[0][0] == doctest::Approx(1.0));
}

TEST_CASE("characteristic basis: inverse pair and Jacobian eigenvalues") {
  for (const Model& m : {Model::euler_1d(), Model::euler_2d()}) {
    const int n = m.nvars();
    const State prim = m.dim == 1 ? prim1(1.0, 0.0, 1.0) : State{0.8, 0.3, -0.2, 1.3};
    const State u = primitive_to_conserved(m, prim);
    for (Axis ax : {Axis::x, Axis::y}) {
      if (m.dim == 1 && ax == Axis::y) continue;
      const auto b = characteristic_basis(m, u, ax);
      Eigen::MatrixXd l(n, n), r(n, n), jac(n, n);
      const auto j = flux_jacobian(m, u, ax);
      for (int a = 0; a < n; ++a) {
        for (int c = 0; c < n; ++c) {
          l(a, c) = b.left[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)];
          r(a, c) = b.right[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)];
          jac(a, c) = j[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)];
        }
      }
      CHECK((l * r - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);

      // Independent numerical eigen-decomposition of the Jacobian.
      Eigen::EigenSolver<Eigen::MatrixXd> es(jac);
      std::vector<double> ev;
      for (int a = 0; a < n; ++a) ev.push_back(es.eigenvalues()(a).real());
      std::sort(ev.begin(), ev.end());
      for (int a = 0; a < n; ++a) CHECK(b.eigenvalues[static_cast<std::size_t>(a)] == doctest::Approx(ev[static_cast<std::size_t>(a)]).epsilon(1e-10));

      Eigen::MatrixXd lam = Eigen::MatrixXd::Zero(n, n);
      for (int a = 0; a < n; ++a) lam(a, a) = b.eigenvalues[static_cast<std::size_t>(a)];
      CHECK((r * lam * l - jac).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  const auto b = characteristic_basis(Model::euler_1d(), primitive_to_conserved(Model::euler_1d(), prim1(1, 0, 1)), Axis::x);
  CHECK(b.eigenvalues[0] == doctest::Approx(-std::sqrt(1.4)));
  CHECK(b.eigenvalues[1] == doctest::Approx(0.0));
  CHECK(b.eigenvalues[2] == doctest::Approx(std::sqrt(1.4)));
}

TEST_CASE("characteristic round trip") {
  const Model m = Model::euler_2d();
  const State ref = primitive_to_conserved(m, {1.0, 0.5, 0.1, 0.9});
  const auto b = characteristic_basis(m, ref, Axis::y);
  const State u{1.3, 0.2, -0.4, 3.1};
  const State back = b.from_characteristic(b.to_characteristic(u));
  for (std::size_t c = 0; c < 4; ++c) CHECK(back[c] == doctest::Approx(u[c]).epsilon(1e-13));
}
