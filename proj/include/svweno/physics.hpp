#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace svweno {

inline constexpr int kMaxVars = 4;

/// Conserved (or characteristic) variables. Unused trailing slots stay zero.
///   advection: (u)
///   Euler 1D:  (rho, rho*U, E)
///   Euler 2D:  (rho, rho*U, rho*V, E)
using State = std::array<double, kMaxVars>;

enum class Equation { advection, euler };
enum class Axis { x = 0, y = 1 };

/// How the Lax-Friedrichs dissipation speed is chosen.
enum class LfVariant { local, global };

struct Model {
  Equation equation = Equation::advection;
  int dim = 1;
  double gamma = 1.4;
  std::array<double, 2> velocity{1.0, 0.0};

  int nvars() const { return equation == Equation::advection ? 1 : dim + 2; }
  int energy_index() const { return dim + 1; }

  static Model advection_1d(double c);
  static Model advection_2d(double cx, double cy);
  static Model euler_1d(double gamma = 1.4);
  static Model euler_2d(double gamma = 1.4);
};

/// Raised whenever an Euler state with rho <= 0 or p <= 0 (or a non-finite
/// value) reaches an operation that needs a physical state.
class NonphysicalState : public std::runtime_error {
 public:
  NonphysicalState(const std::string& what, const State& state)
      : std::runtime_error(what), state_(state) {}
  const State& state() const { return state_; }

 private:
  State state_;
};

double pressure(const Model& model, const State& u);
bool is_physical(const Model& model, const State& u);

/// Throws NonphysicalState tagged with `where` unless `u` is physical.
void require_physical(const Model& model, const State& u, const char* where);

State analytic_flux(const Model& model, const State& u, Axis axis);
double max_wavespeed(const Model& model, const State& u, Axis axis);

/// Rusanov flux 0.5 (f(uL) + f(uR)) - 0.5 alpha (uR - uL) with alpha the
/// larger of the two local wave speeds.
State lax_friedrichs(const Model& model, const State& ul, const State& ur, Axis axis);

/// Same flux with a caller-supplied dissipation speed (global variant).
State lax_friedrichs(const Model& model, const State& ul, const State& ur, Axis axis,
                     double alpha);

/// Primitive tuples are (u) for advection, (rho, U, P) or (rho, U, V, P) for Euler.
State primitive_to_conserved(const Model& model, const State& prim);
State conserved_to_primitive(const Model& model, const State& cons);

/// Eigenvectors of the flux Jacobian frozen at a reference state.
/// Columns of `right` are right eigenvectors ordered by eigenvalue
/// (u - a, u, [u,] u + a); `left` is its inverse.
struct CharacteristicBasis {
  int n = 1;
  std::array<std::array<double, kMaxVars>, kMaxVars> left{};
  std::array<std::array<double, kMaxVars>, kMaxVars> right{};
  std::array<double, kMaxVars> eigenvalues{};

  State to_characteristic(const State& u) const;
  State from_characteristic(const State& w) const;
};

CharacteristicBasis characteristic_basis(const Model& model, const State& u_ref, Axis axis);

/// Flux Jacobian dF/du at `u` (used by tests and diagnostics).
std::array<std::array<double, kMaxVars>, kMaxVars> flux_jacobian(const Model& model,
                                                                  const State& u, Axis axis);

}  // namespace svweno
