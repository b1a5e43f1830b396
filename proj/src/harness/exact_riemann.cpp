#include "svweno/harness/exact_riemann.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace svweno {

ExactRiemann::ExactRiemann(const Primitive1D& left, const Primitive1D& right, double gamma)
    : l_(left), r_(right), gamma_(gamma) {
  if (!(gamma > 1.0)) throw std::invalid_argument("ratio of specific heats must exceed 1");
  for (const auto* s : {&left, &right}) {
    if (!(s->rho > 0.0) || !(s->p > 0.0) || !std::isfinite(s->u)) {
      throw std::invalid_argument("Riemann data must have positive density and pressure");
    }
  }
  al_ = std::sqrt(gamma * left.p / left.rho);
  ar_ = std::sqrt(gamma * right.p / right.rho);
  const double du = right.u - left.u;
  if (2.0 / (gamma - 1.0) * (al_ + ar_) <= du) {
    throw std::domain_error("Riemann data generate vacuum");
  }

  const double guess = 0.5 * (left.p + right.p) - 0.125 * du * (left.rho + right.rho) * (al_ + ar_);
  double p = std::max(guess, 1e-10 * std::min(left.p, right.p));
  for (iterations_ = 1; iterations_ <= 200; ++iterations_) {
    double dl = 0.0;
    double dr = 0.0;
    const double f = wave_function(p, left, al_, dl) + wave_function(p, right, ar_, dr) + du;
    double next = p - f / (dl + dr);
    if (next <= 0.0) next = 0.5 * p;
    const double change = std::abs(next - p) / (0.5 * (next + p));
    p = next;
    if (change < 1e-12) break;
  }
  p_star_ = p;
  double dl = 0.0;
  double dr = 0.0;
  u_star_ = 0.5 * (left.u + right.u) +
            0.5 * (wave_function(p, right, ar_, dr) - wave_function(p, left, al_, dl));
}

double ExactRiemann::wave_function(double p, const Primitive1D& s, double a, double& dfdp) const {
  const double g = gamma_;
  if (p > s.p) {
    const double ak = 2.0 / ((g + 1.0) * s.rho);
    const double bk = (g - 1.0) / (g + 1.0) * s.p;
    const double q = std::sqrt(ak / (p + bk));
    dfdp = q * (1.0 - 0.5 * (p - s.p) / (p + bk));
    return (p - s.p) * q;
  }
  const double ratio = p / s.p;
  dfdp = std::pow(ratio, -(g + 1.0) / (2.0 * g)) / (s.rho * a);
  return 2.0 * a / (g - 1.0) * (std::pow(ratio, (g - 1.0) / (2.0 * g)) - 1.0);
}

Primitive1D ExactRiemann::sample(double xi) const {
  const double g = gamma_;
  const double gm = (g - 1.0) / (g + 1.0);
  if (xi <= u_star_) {
    const auto& s = l_;
    const double a = al_;
    if (p_star_ > s.p) {
      const double ratio = p_star_ / s.p;
      const double speed = s.u - a * std::sqrt((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g));
      if (xi <= speed) return s;
      return {s.rho * (ratio + gm) / (gm * ratio + 1.0), u_star_, p_star_};
    }
    const double head = s.u - a;
    const double a_star = a * std::pow(p_star_ / s.p, (g - 1.0) / (2.0 * g));
    const double tail = u_star_ - a_star;
    if (xi <= head) return s;
    if (xi >= tail) return {s.rho * std::pow(p_star_ / s.p, 1.0 / g), u_star_, p_star_};
    const double c = 2.0 / (g + 1.0) + gm / a * (s.u - xi);
    return {s.rho * std::pow(c, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (a + 0.5 * (g - 1.0) * s.u + xi),
            s.p * std::pow(c, 2.0 * g / (g - 1.0))};
  }
  const auto& s = r_;
  const double a = ar_;
  if (p_star_ > s.p) {
    const double ratio = p_star_ / s.p;
    const double speed = s.u + a * std::sqrt((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g));
    if (xi >= speed) return s;
    return {s.rho * (ratio + gm) / (gm * ratio + 1.0), u_star_, p_star_};
  }
  const double head = s.u + a;
  const double a_star = a * std::pow(p_star_ / s.p, (g - 1.0) / (2.0 * g));
  const double tail = u_star_ + a_star;
  if (xi >= head) return s;
  if (xi <= tail) return {s.rho * std::pow(p_star_ / s.p, 1.0 / g), u_star_, p_star_};
  const double c = 2.0 / (g + 1.0) - gm / a * (s.u - xi);
  return {s.rho * std::pow(c, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (-a + 0.5 * (g - 1.0) * s.u + xi),
          s.p * std::pow(c, 2.0 * g / (g - 1.0))};
}

}  // namespace svweno
