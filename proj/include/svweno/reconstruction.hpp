#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "svweno/mesh.hpp"

namespace svweno {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Largest coefficient count of any reconstruction (Q_4 tensor polynomial).
inline constexpr int kMaxCoeffs = kMaxOrder * kMaxOrder;

/// Mean of t^l over [lo, hi].
double monomial_mean(int l, double lo, double hi);

/// Horner evaluation of sum_l c_l t^l.
double eval_monomials(std::span<const double> coeffs, double t);

/// Monomial basis of one SV in the scaled coordinate xi = (x - x_c) / h_sv,
/// xi in [-1/2, 1/2]. The CV-averaging matrix A[m][l] = mean of xi^l over
/// CV m is factorized once and shared by every SV of a uniform grid.
class SvBasis {
 public:
  explicit SvBasis(int order);
  SvBasis(int order, const std::vector<double>& pattern);

  int order() const { return order_; }
  /// CV edges in xi, k+1 values from -1/2 to 1/2.
  const std::vector<double>& edges() const { return edges_; }
  const RowMatrix& average_matrix() const { return average_; }
  const RowMatrix& inverse() const { return inverse_; }
  double condition_number() const { return condition_; }

  /// Matrix mapping the k CV averages to point values at the given xi.
  RowMatrix evaluation_operator(std::span<const double> xi) const;

  std::vector<double> coefficients(std::span<const double> averages) const;

 private:
  int order_;
  std::vector<double> edges_;
  RowMatrix average_;
  RowMatrix inverse_;
  double condition_ = 0.0;
};

/// Degree-(k-1) polynomial of one SV in 1D.
struct SvPolynomial1D {
  int sv = 0;
  double center = 0.0;
  double width = 1.0;
  std::vector<double> coeffs;  // in xi

  /// Throws std::out_of_range when x lies outside the SV.
  double operator()(double x) const;
  double mean(double lo, double hi) const;
};

/// Tensor-product polynomial of one SV in 2D; coeffs[l * k + r] multiplies
/// xi^l eta^r.
struct SvPolynomial2D {
  int i = 0;
  int j = 0;
  int order = 0;
  double cx = 0.0;
  double cy = 0.0;
  double wx = 1.0;
  double wy = 1.0;
  std::vector<double> coeffs;

  double operator()(double x, double y) const;
  double mean(double x0, double x1, double y0, double y1) const;
};

/// Solves the CV-average system of SV `sv` (k averages, in CV order).
SvPolynomial1D reconstruct_sv(const SvBasis& basis, const Grid1D& grid, int sv,
                              std::span<const double> averages);

/// 2D version; `averages[m * k + n]` is the average of CV (m, n).
SvPolynomial2D reconstruct_sv(const SvBasis& basis, const Grid2D& grid, int i, int j,
                              std::span<const double> averages);

/// Polynomial attached to a single CV in its own scaled frame
/// eta = (x - center) / width. 2D uses tensor coefficients [l * order + r].
struct CvPolynomial1D {
  double center = 0.0;
  double width = 1.0;
  std::vector<double> coeffs;

  double operator()(double x) const;
  double mean(double lo, double hi) const;
};

struct CvPolynomial2D {
  int order = 0;
  double cx = 0.0;
  double cy = 0.0;
  double wx = 1.0;
  double wy = 1.0;
  std::vector<double> coeffs;

  double operator()(double x, double y) const;
  double mean(double x0, double x1, double y0, double y1) const;
};

/// Cells of a CV-centred stencil along one axis, as intervals in the target
/// CV's frame. Entry s is the target itself, [-1/2, 1/2].
struct AxisStencil {
  int half_width = 0;
  std::vector<std::pair<double, double>> intervals;

  double center_offset(int offset) const;  // centre of cell at offset, in target widths
};

/// Stencil geometry for the CV at local position m of a uniform
/// Gauss-Lobatto grid; neighbours past the SV edges continue into the
/// adjacent SV's pattern.
AxisStencil axis_stencil(const std::vector<double>& pattern, int m, int half_width);

/// Half-width of the large limiter stencil: floor(k / 2).
inline int large_stencil_half_width(int order) { return order / 2; }

/// Constrained least-squares reconstruction p0 on the large stencil.
///
/// The target CV average is matched exactly; the remaining stencil averages
/// are fitted in the least-squares sense. The constraint is eliminated by
/// writing p0 = ubar + sum_{j>0} a_j (phi_j - mean_target(phi_j)), and the
/// reduced problem is solved once by column-pivoted QR, giving a fixed
/// linear map from stencil averages to coefficients.
class LeastSquaresP0 {
 public:
  LeastSquaresP0(int order, const AxisStencil& stencil);
  LeastSquaresP0(int order, const AxisStencil& sx, const AxisStencil& sy);

  int dim() const { return dim_; }
  int order() const { return order_; }
  int num_coeffs() const { return static_cast<int>(map_.rows()); }
  int num_cells() const { return static_cast<int>(map_.cols()); }
  /// Coefficients = matrix() * averages. 2D cells are ordered [ix * w + iy].
  const RowMatrix& matrix() const { return map_; }

  std::vector<double> solve(std::span<const double> averages) const;

 private:
  void build(const std::vector<std::vector<double>>& means, int center);

  int dim_;
  int order_;
  RowMatrix map_;
};

/// Two linear candidates in the target CV frame: p1 from {m-1, m}, p2 from
/// {m, m+1}. Each is returned as the slope in eta; the constant term is the
/// target average.
std::pair<double, double> linear_candidate_slopes_1d(const AxisStencil& stencil, double avg_left,
                                                     double avg_center, double avg_right);

/// Four planar candidates (slope_x, slope_y) from the stencils
/// T1 {W, C, S}, T2 {C, E, S}, T3 {W, C, N}, T4 {C, E, N}.
std::array<std::pair<double, double>, 4> linear_candidate_slopes_2d(const AxisStencil& sx,
                                                                    const AxisStencil& sy, double w,
                                                                    double c, double e, double s,
                                                                    double n);

CvPolynomial1D least_squares_p0(const Grid1D& grid, int g, std::span<const double> averages);
std::vector<CvPolynomial1D> linear_candidates(const Grid1D& grid, int g, double avg_left,
                                              double avg_center, double avg_right);

}  // namespace svweno
