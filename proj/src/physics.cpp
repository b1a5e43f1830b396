#include "svweno/physics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace svweno {

namespace {

using Matrix4 = std::array<std::array<double, kMaxVars>, kMaxVars>;

std::string describe(const State& u, int n) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (int c = 0; c < n; ++c) os << (c ? ", " : "") << u[static_cast<std::size_t>(c)];
  os << ')';
  return os.str();
}

// Swap the two momentum slots so that y-direction algebra reuses the x path.
State swap_momenta(State u) {
  std::swap(u[1], u[2]);
  return u;
}

bool rotated(const Model& model, Axis axis) {
  return model.equation == Equation::euler && model.dim == 2 && axis == Axis::y;
}

}  // namespace

Model Model::advection_1d(double c) { return {Equation::advection, 1, 1.4, {c, 0.0}}; }
Model Model::advection_2d(double cx, double cy) { return {Equation::advection, 2, 1.4, {cx, cy}}; }
Model Model::euler_1d(double gamma) {
  if (!(gamma > 1.0)) throw std::invalid_argument("ratio of specific heats must exceed 1");
  return {Equation::euler, 1, gamma, {0.0, 0.0}};
}
Model Model::euler_2d(double gamma) {
  if (!(gamma > 1.0)) throw std::invalid_argument("ratio of specific heats must exceed 1");
  return {Equation::euler, 2, gamma, {0.0, 0.0}};
}

double pressure(const Model& model, const State& u) {
  if (model.equation == Equation::advection) return 0.0;
  const double rho = u[0];
  double kinetic = u[1] * u[1];
  if (model.dim == 2) kinetic += u[2] * u[2];
  return (model.gamma - 1.0) * (u[static_cast<std::size_t>(model.energy_index())] - 0.5 * kinetic / rho);
}

bool is_physical(const Model& model, const State& u) {
  for (int c = 0; c < model.nvars(); ++c) {
    if (!std::isfinite(u[static_cast<std::size_t>(c)])) return false;
  }
  if (model.equation == Equation::advection) return true;
  return u[0] > 0.0 && pressure(model, u) > 0.0;
}

void require_physical(const Model& model, const State& u, const char* where) {
  if (!is_physical(model, u)) {
    throw NonphysicalState(std::string("nonphysical state ") + describe(u, model.nvars()) + " at " + where,
                           u);
  }
}

State analytic_flux(const Model& model, const State& u, Axis axis) {
  State f{};
  if (model.equation == Equation::advection) {
    f[0] = model.velocity[static_cast<std::size_t>(axis)] * u[0];
    return f;
  }
  if (rotated(model, axis)) return swap_momenta(analytic_flux(model, swap_momenta(u), Axis::x));

  const double rho = u[0];
  const double vx = u[1] / rho;
  const double p = pressure(model, u);
  if (!(rho > 0.0) || !(p > 0.0)) {
    throw NonphysicalState("nonphysical state " + describe(u, model.nvars()) + " in flux", u);
  }
  const auto e = static_cast<std::size_t>(model.energy_index());
  f[0] = u[1];
  f[1] = u[1] * vx + p;
  if (model.dim == 2) f[2] = u[2] * vx;
  f[e] = vx * (u[e] + p);
  return f;
}

double max_wavespeed(const Model& model, const State& u, Axis axis) {
  if (model.equation == Equation::advection) {
    return std::abs(model.velocity[static_cast<std::size_t>(axis)]);
  }
  const double rho = u[0];
  const double p = pressure(model, u);
  if (!(rho > 0.0) || !(p > 0.0)) {
    throw NonphysicalState("nonphysical state " + describe(u, model.nvars()) + " in wave speed", u);
  }
  const std::size_t mom = (axis == Axis::y) ? 2 : 1;
  return std::abs(u[mom] / rho) + std::sqrt(model.gamma * p / rho);
}

State lax_friedrichs(const Model& model, const State& ul, const State& ur, Axis axis, double alpha) {
  const State fl = analytic_flux(model, ul, axis);
  const State fr = analytic_flux(model, ur, axis);
  State f{};
  for (int c = 0; c < model.nvars(); ++c) {
    const auto k = static_cast<std::size_t>(c);
    f[k] = 0.5 * (fl[k] + fr[k]) - 0.5 * alpha * (ur[k] - ul[k]);
  }
  return f;
}

State lax_friedrichs(const Model& model, const State& ul, const State& ur, Axis axis) {
  const double alpha = std::max(max_wavespeed(model, ul, axis), max_wavespeed(model, ur, axis));
  return lax_friedrichs(model, ul, ur, axis, alpha);
}

State primitive_to_conserved(const Model& model, const State& prim) {
  if (model.equation == Equation::advection) return prim;
  State u{};
  const double rho = prim[0];
  const auto e = static_cast<std::size_t>(model.energy_index());
  const double p = prim[e];
  if (!(rho > 0.0) || !(p > 0.0)) {
    throw NonphysicalState("nonphysical primitive state " + describe(prim, model.nvars()), prim);
  }
  double kinetic = prim[1] * prim[1];
  if (model.dim == 2) kinetic += prim[2] * prim[2];
  u[0] = rho;
  u[1] = rho * prim[1];
  if (model.dim == 2) u[2] = rho * prim[2];
  u[e] = p / (model.gamma - 1.0) + 0.5 * rho * kinetic;
  return u;
}

State conserved_to_primitive(const Model& model, const State& cons) {
  if (model.equation == Equation::advection) return cons;
  require_physical(model, cons, "conserved_to_primitive");
  State w{};
  const auto e = static_cast<std::size_t>(model.energy_index());
  w[0] = cons[0];
  w[1] = cons[1] / cons[0];
  if (model.dim == 2) w[2] = cons[2] / cons[0];
  w[e] = pressure(model, cons);
  return w;
}

State CharacteristicBasis::to_characteristic(const State& u) const {
  State w{};
  for (int r = 0; r < n; ++r) {
    double s = 0.0;
    for (int c = 0; c < n; ++c) s += left[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] * u[static_cast<std::size_t>(c)];
    w[static_cast<std::size_t>(r)] = s;
  }
  return w;
}

State CharacteristicBasis::from_characteristic(const State& w) const {
  State u{};
  for (int r = 0; r < n; ++r) {
    double s = 0.0;
    for (int c = 0; c < n; ++c) s += right[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] * w[static_cast<std::size_t>(c)];
    u[static_cast<std::size_t>(r)] = s;
  }
  return u;
}

CharacteristicBasis characteristic_basis(const Model& model, const State& u_ref, Axis axis) {
  CharacteristicBasis b;
  if (model.equation == Equation::advection) {
    b.n = 1;
    b.left[0][0] = 1.0;
    b.right[0][0] = 1.0;
    b.eigenvalues[0] = model.velocity[static_cast<std::size_t>(axis)];
    return b;
  }
  if (!(u_ref[0] > 0.0) || !(pressure(model, u_ref) > 0.0)) {
    throw NonphysicalState("degenerate reference state " + describe(u_ref, model.nvars()) +
                               " for characteristic basis",
                           u_ref);
  }
  if (rotated(model, axis)) {
    CharacteristicBasis bx = characteristic_basis(model, swap_momenta(u_ref), Axis::x);
    // R_y = P R_x, L_y = L_x P with P swapping the momentum slots.
    b.n = bx.n;
    b.eigenvalues = bx.eigenvalues;
    b.right = bx.right;
    std::swap(b.right[1], b.right[2]);
    b.left = bx.left;
    for (auto& row : b.left) std::swap(row[1], row[2]);
    return b;
  }

  const double g = model.gamma;
  const double rho = u_ref[0];
  const double u = u_ref[1] / rho;
  const double v = model.dim == 2 ? u_ref[2] / rho : 0.0;
  const double p = pressure(model, u_ref);
  const double a = std::sqrt(g * p / rho);
  const double q2 = u * u + v * v;
  const double h = (u_ref[static_cast<std::size_t>(model.energy_index())] + p) / rho;
  const double b1 = (g - 1.0) / (a * a);
  const double b2 = 0.5 * b1 * q2;

  if (model.dim == 1) {
    b.n = 3;
    b.right = {{{1.0, 1.0, 1.0, 0.0}, {u - a, u, u + a, 0.0}, {h - u * a, 0.5 * q2, h + u * a, 0.0}, {}}};
    b.left = {{{0.5 * (b2 + u / a), 0.5 * (-b1 * u - 1.0 / a), 0.5 * b1, 0.0},
               {1.0 - b2, b1 * u, -b1, 0.0},
               {0.5 * (b2 - u / a), 0.5 * (-b1 * u + 1.0 / a), 0.5 * b1, 0.0},
               {}}};
    b.eigenvalues = {u - a, u, u + a, 0.0};
    return b;
  }

  b.n = 4;
  b.right = {{{1.0, 1.0, 0.0, 1.0},
              {u - a, u, 0.0, u + a},
              {v, v, 1.0, v},
              {h - u * a, 0.5 * q2, v, h + u * a}}};
  b.left = {{{0.5 * (b2 + u / a), 0.5 * (-b1 * u - 1.0 / a), -0.5 * b1 * v, 0.5 * b1},
             {1.0 - b2, b1 * u, b1 * v, -b1},
             {-v, 0.0, 1.0, 0.0},
             {0.5 * (b2 - u / a), 0.5 * (-b1 * u + 1.0 / a), -0.5 * b1 * v, 0.5 * b1}}};
  b.eigenvalues = {u - a, u, u, u + a};
  return b;
}

Matrix4 flux_jacobian(const Model& model, const State& s, Axis axis) {
  Matrix4 j{};
  if (model.equation == Equation::advection) {
    j[0][0] = model.velocity[static_cast<std::size_t>(axis)];
    return j;
  }
  if (rotated(model, axis)) {
    Matrix4 jx = flux_jacobian(model, swap_momenta(s), Axis::x);
    std::swap(jx[1], jx[2]);
    for (auto& row : jx) std::swap(row[1], row[2]);
    return jx;
  }
  const double g = model.gamma;
  const double rho = s[0];
  const double u = s[1] / rho;
  const double v = model.dim == 2 ? s[2] / rho : 0.0;
  const double p = pressure(model, s);
  const double h = (s[static_cast<std::size_t>(model.energy_index())] + p) / rho;
  const double phi = 0.5 * (g - 1.0) * (u * u + v * v);
  if (model.dim == 1) {
    j[0] = {0.0, 1.0, 0.0, 0.0};
    j[1] = {phi - u * u, (3.0 - g) * u, g - 1.0, 0.0};
    j[2] = {u * (phi - h), h - (g - 1.0) * u * u, g * u, 0.0};
    return j;
  }
  j[0] = {0.0, 1.0, 0.0, 0.0};
  j[1] = {phi - u * u, (3.0 - g) * u, -(g - 1.0) * v, g - 1.0};
  j[2] = {-u * v, v, u, 0.0};
  j[3] = {u * (phi - h), h - (g - 1.0) * u * u, -(g - 1.0) * u * v, g * u};
  return j;
}

}  // namespace svweno
