#pragma once

namespace svweno {

struct Primitive1D {
  double rho = 1.0;
  double u = 0.0;
  double p = 1.0;
};

/// Exact solution of the 1D Euler Riemann problem for an ideal gas.
///
/// The star pressure solves f_L(p) + f_R(p) + (u_R - u_L) = 0 by Newton
/// iteration from the primitive-variable guess, to relative change 1e-12.
/// Throws std::invalid_argument for nonphysical input and std::domain_error
/// when the data generate vacuum.
class ExactRiemann {
 public:
  ExactRiemann(const Primitive1D& left, const Primitive1D& right, double gamma = 1.4);

  double star_pressure() const { return p_star_; }
  double star_velocity() const { return u_star_; }
  int iterations() const { return iterations_; }

  /// Solution at similarity coordinate xi = (x - x0) / t.
  Primitive1D sample(double xi) const;

 private:
  double wave_function(double p, const Primitive1D& s, double a, double& dfdp) const;

  Primitive1D l_;
  Primitive1D r_;
  double gamma_;
  double al_;
  double ar_;
  double p_star_ = 0.0;
  double u_star_ = 0.0;
  int iterations_ = 0;
};

}  // namespace svweno
