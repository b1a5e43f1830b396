#include "svweno/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace svweno {

namespace {

// Legendre P_n(x) and its derivative by the three-term recurrence.
void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int j = 2; j <= n; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

void check_axis(double a, double b, int num_svs, int order) {
  if (order < kMinOrder || order > kMaxOrder) {
    throw std::invalid_argument("scheme order must be in 2..5, got " + std::to_string(order));
  }
  if (num_svs < 1) {
    throw std::invalid_argument("SV count must be positive");
  }
  if (!(b > a)) {
    throw std::invalid_argument("domain must satisfy b > a");
  }
}

}  // namespace

QuadratureRule gauss_rule(int n_q) {
  if (n_q < 1 || n_q > kMaxGaussPoints) {
    throw std::invalid_argument("unsupported Gauss point count " + std::to_string(n_q));
  }
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n_q));
  rule.weights.resize(static_cast<std::size_t>(n_q));
  if (n_q == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
    return rule;
  }
  for (int i = 0; i < n_q; ++i) {
    // Chebyshev-like initial guess, descending order flipped below.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n_q + 0.5));
    double p = 0.0;
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      legendre(n_q, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(n_q, x, p, dp);
    rule.nodes[static_cast<std::size_t>(n_q - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(n_q - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  // Exact symmetry.
  for (int i = 0; i < n_q / 2; ++i) {
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n_q - 1 - i);
    const double x = 0.5 * (rule.nodes[hi] - rule.nodes[lo]);
    const double w = 0.5 * (rule.weights[hi] + rule.weights[lo]);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (n_q % 2 == 1) rule.nodes[static_cast<std::size_t>(n_q / 2)] = 0.0;
  return rule;
}

std::vector<double> gauss_lobatto_fractions(int order) {
  if (order < kMinOrder || order > kMaxOrder) {
    throw std::invalid_argument("scheme order must be in 2..5, got " + std::to_string(order));
  }
  std::vector<double> f(static_cast<std::size_t>(order + 1));
  for (int m = 0; m <= order; ++m) {
    f[static_cast<std::size_t>(m)] = 0.5 * (1.0 - std::cos(m * std::numbers::pi / order));
  }
  f.front() = 0.0;
  f.back() = 1.0;
  return f;
}

double Grid1D::min_width() const { return *std::min_element(widths.begin(), widths.end()); }

Grid1D build_grid_1d(double a, double b, int num_svs, int order) {
  check_axis(a, b, num_svs, order);
  Grid1D g;
  g.a = a;
  g.b = b;
  g.num_svs = num_svs;
  g.order = order;
  g.sv_width = (b - a) / num_svs;
  g.pattern = gauss_lobatto_fractions(order);

  const int ncv = num_svs * order;
  g.edges.resize(static_cast<std::size_t>(ncv + 1));
  for (int i = 0; i < num_svs; ++i) {
    const double left = a + i * g.sv_width;
    g.edges[static_cast<std::size_t>(i * order)] = left;
    for (int m = 1; m < order; ++m) {
      g.edges[static_cast<std::size_t>(i * order + m)] =
          left + 0.5 * g.sv_width * (1.0 - std::cos(m * std::numbers::pi / order));
    }
  }
  g.edges.back() = b;

  g.widths.resize(static_cast<std::size_t>(ncv));
  g.centers.resize(static_cast<std::size_t>(ncv));
  for (std::size_t c = 0; c < g.widths.size(); ++c) {
    g.widths[c] = g.edges[c + 1] - g.edges[c];
    g.centers[c] = 0.5 * (g.edges[c + 1] + g.edges[c]);
  }
  return g;
}

CvIndex2D Grid2D::unflatten(int idx) const {
  const int k = order();
  const int gx = idx % cvs_x();
  const int gy = idx / cvs_x();
  return {gx / k, gx % k, gy / k, gy % k};
}

Grid2D build_grid_2d(const Rectangle& domain, int nsv_x, int nsv_y, int order) {
  return {build_grid_1d(domain.x0, domain.x1, nsv_x, order),
          build_grid_1d(domain.y0, domain.y1, nsv_y, order)};
}

}  // namespace svweno
