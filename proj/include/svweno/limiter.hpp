#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "svweno/mesh.hpp"
#include "svweno/reconstruction.hpp"

namespace svweno {

enum class LimiterMode { cvmsweno, full, off };

LimiterMode parse_limiter_mode(const std::string& name);
std::string to_string(LimiterMode mode);

/// Length h in the TVB threshold M h^2: the CV width or the width of the
/// SV that contains the CV.
enum class TvbLength { cv, sv };

TvbLength parse_tvb_length(const std::string& name);
std::string to_string(TvbLength length);

struct LimiterParams {
  LimiterMode mode = LimiterMode::cvmsweno;
  double tvb_m = 0.01;
  TvbLength tvb_length = TvbLength::cv;
  double epsilon = 1e-6;
  std::array<double, 3> gamma_1d{0.8, 0.1, 0.1};
  std::array<double, 5> gamma_2d{0.8, 0.05, 0.05, 0.05, 0.05};
  /// Limit Euler systems in characteristic variables.
  bool characteristic = true;
  /// Re-run the detector on every RK stage; otherwise the mask found at
  /// the first stage of a step is reused for the remaining stages.
  bool detect_every_stage = true;
  /// 2D Euler only: when a CV has a nonphysical face trace, pull all its
  /// traces toward the CV average until every one is physical.
  bool trace_fallback = false;

  /// Throws std::invalid_argument for negative M, non-positive epsilon or
  /// linear weights that are not positive with unit sum.
  void validate() const;
};

/// s * min(|a|, |b|, |c|) when all three share a strict sign s, else 0.
double minmod(double a, double b, double c);

struct MinmodResult {
  double value = 0.0;
  bool modified = false;  // true when the minmod branch replaced a1
};

/// TVB-modified minmod: a1 when |a1| <= M h^2, otherwise minmod(a1, a2, a3).
/// `modified` is decided structurally (a1 is kept only when all signs agree
/// and |a1| is the smallest magnitude, ties going to a1), never by comparing
/// the returned value with a1.
MinmodResult modified_minmod(double a1, double a2, double a3, double m, double h);

/// One-sided TVB test on one component along one axis.
/// trace_minus/trace_plus are the polynomial values at the CV's two faces.
bool tvb_flags(double avg, double trace_minus, double trace_plus, double avg_prev,
               double avg_next, double m, double h);

/// Quadratic form S with beta = c^T S c for a CV polynomial in its own
/// scaled frame: S[a][b] = sum_q int_{-1/2}^{1/2} d^q t^a d^q t^b.
RowMatrix smoothness_matrix_1d(int order);

/// 2D version over the unit square; derivative orders 1 <= q1 + q2 <= k.
RowMatrix smoothness_matrix_2d(int order);

double smoothness_indicator(const RowMatrix& s, std::span<const double> coeffs);
double smoothness_indicator(const CvPolynomial1D& p);
double smoothness_indicator(const CvPolynomial2D& p);

/// Output of one nonlinear WENO combination.
struct SwenoResult {
  std::array<double, kMaxCoeffs> coeffs{};
  std::array<double, 5> beta{};
  std::array<double, 5> weights{};
  double tau = 0.0;
};

/// Blends p0 with `linear` candidates (full coefficient vectors, same length
/// as p0) using linear weights gamma = (gamma_0, gamma_1, ...).
/// beta_0 is measured on (p0 - sum gamma_l p_l) / gamma_0.
SwenoResult sweno_combine(const RowMatrix& s, std::span<const double> p0,
                          std::span<const std::array<double, kMaxCoeffs>> linear,
                          std::span<const double> gamma, double epsilon);

/// Precomputed limiting operators for every local CV position of a uniform
/// 1D grid. Stencils are stored left to right, 2 * half_width() + 1 values.
class CvLimiter1D {
 public:
  explicit CvLimiter1D(const Grid1D& grid);

  int order() const { return order_; }
  int half_width() const { return half_width_; }
  const RowMatrix& smoothness() const { return smooth_; }
  const LeastSquaresP0& p0(int m) const { return p0_[static_cast<std::size_t>(m)]; }

  /// Limited CV polynomial coefficients (in the CV frame) for local position m.
  SwenoResult limit(int m, std::span<const double> stencil, const LimiterParams& params) const;

 private:
  int order_;
  int half_width_;
  RowMatrix smooth_;
  std::vector<LeastSquaresP0> p0_;
  std::vector<AxisStencil> near_;  // half-width-1 stencils for the linear candidates
};

/// 2D counterpart on the (2s+1)^2 box stencil, cells ordered [ix * w + iy].
class CvLimiter2D {
 public:
  explicit CvLimiter2D(int order);

  int order() const { return order_; }
  int half_width() const { return half_width_; }
  int width() const { return 2 * half_width_ + 1; }
  const RowMatrix& smoothness() const { return smooth_; }
  const LeastSquaresP0& p0(int m, int n) const {
    return p0_[static_cast<std::size_t>(m * order_ + n)];
  }

  SwenoResult limit(int m, int n, std::span<const double> stencil,
                    const LimiterParams& params) const;

 private:
  int order_;
  int half_width_;
  RowMatrix smooth_;
  std::vector<LeastSquaresP0> p0_;
  std::vector<AxisStencil> near_;
};

/// Per-CV troubled flags.
struct TroubledMask {
  std::vector<std::uint8_t> flags;

  int size() const { return static_cast<int>(flags.size()); }
  int count() const;
  double percent() const;
  bool operator[](int g) const { return flags[static_cast<std::size_t>(g)] != 0; }
};

enum class FaceKind : std::uint8_t { continuous, riemann };

/// Faces 0..num_cvs of a 1D grid. SV boundaries and faces adjacent to a
/// troubled CV are riemann; the rest are continuous.
std::vector<FaceKind> classify_faces_1d(const Grid1D& grid, const TroubledMask& mask);

struct FaceClasses2D {
  std::vector<FaceKind> x;  // (cvs_x + 1) * cvs_y, index fy * (cvs_x + 1) + fx
  std::vector<FaceKind> y;  // cvs_x * (cvs_y + 1), index fy * cvs_x + fx
};

FaceClasses2D classify_faces_2d(const Grid2D& grid, const TroubledMask& mask);

}  // namespace svweno
