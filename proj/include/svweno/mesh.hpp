#pragma once

#include <cstddef>
#include <vector>

namespace svweno {

/// Gauss-Legendre rule on the reference interval [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

/// Gauss-Legendre nodes and weights for 1 <= n_q <= kMaxGaussPoints.
/// Throws std::invalid_argument for any other point count.
QuadratureRule gauss_rule(int n_q);

inline constexpr int kMaxGaussPoints = 8;
inline constexpr int kMinOrder = 2;
inline constexpr int kMaxOrder = 5;

/// Gauss-Lobatto CV edge fractions of one SV: (1 - cos(m*pi/k)) / 2, m = 0..k.
std::vector<double> gauss_lobatto_fractions(int order);

/// One axis of a two-level SV/CV partition.
///
/// The domain [a, b] holds `num_svs` spectral volumes of equal width, each
/// split into `order` control volumes at Gauss-Lobatto positions. CVs are
/// numbered globally, g = i * order + m.
struct Grid1D {
  double a = 0.0;
  double b = 1.0;
  int num_svs = 0;
  int order = 0;
  double sv_width = 0.0;

  std::vector<double> pattern;  // k+1 reference edge fractions in [0, 1]
  std::vector<double> edges;    // num_cvs()+1 CV edge coordinates
  std::vector<double> widths;   // per CV
  std::vector<double> centers;  // per CV

  int num_cvs() const { return num_svs * order; }
  int sv_of(int g) const { return g / order; }
  int local_of(int g) const { return g % order; }
  double sv_left(int i) const { return edges[static_cast<std::size_t>(i * order)]; }
  double min_width() const;
};

Grid1D build_grid_1d(double a, double b, int num_svs, int order);

struct Rectangle {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;
};

/// (i, m) along x and (j, n) along y.
struct CvIndex2D {
  int i = 0;
  int m = 0;
  int j = 0;
  int n = 0;

  friend bool operator==(const CvIndex2D&, const CvIndex2D&) = default;
};

/// Tensor product of two axis partitions sharing the order k.
struct Grid2D {
  Grid1D x;
  Grid1D y;

  int order() const { return x.order; }
  int cvs_x() const { return x.num_cvs(); }
  int cvs_y() const { return y.num_cvs(); }
  int num_cvs() const { return cvs_x() * cvs_y(); }
  int num_svs() const { return x.num_svs * y.num_svs; }

  int flat(int gx, int gy) const { return gy * cvs_x() + gx; }
  int flat(const CvIndex2D& c) const {
    return flat(c.i * order() + c.m, c.j * order() + c.n);
  }
  CvIndex2D unflatten(int idx) const;
  double volume(int gx, int gy) const {
    return x.widths[static_cast<std::size_t>(gx)] * y.widths[static_cast<std::size_t>(gy)];
  }
};

Grid2D build_grid_2d(const Rectangle& domain, int nsv_x, int nsv_y, int order);

}  // namespace svweno
