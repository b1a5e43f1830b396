#include "svweno/reconstruction.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace svweno {

namespace {

constexpr double kInsideTolerance = 1e-10;

void check_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite CV average in reconstruction");
  }
}

double scaled(double x, double center, double width, const char* what) {
  const double t = (x - center) / width;
  if (std::abs(t) > 0.5 + kInsideTolerance) {
    throw std::out_of_range(std::string("evaluation point outside ") + what);
  }
  return t;
}

double tensor_eval(std::span<const double> coeffs, int k, double tx, double ty) {
  double acc = 0.0;
  for (int l = k - 1; l >= 0; --l) {
    acc = acc * tx + eval_monomials(coeffs.subspan(static_cast<std::size_t>(l * k), static_cast<std::size_t>(k)), ty);
  }
  return acc;
}

double tensor_mean(std::span<const double> coeffs, int k, double x0, double x1, double y0,
                   double y1) {
  double acc = 0.0;
  for (int l = 0; l < k; ++l) {
    const double mx = monomial_mean(l, x0, x1);
    for (int r = 0; r < k; ++r) {
      acc += coeffs[static_cast<std::size_t>(l * k + r)] * mx * monomial_mean(r, y0, y1);
    }
  }
  return acc;
}

}  // namespace

double monomial_mean(int l, double lo, double hi) {
  if (l == 0) return 1.0;
  return (std::pow(hi, l + 1) - std::pow(lo, l + 1)) / ((l + 1) * (hi - lo));
}

double eval_monomials(std::span<const double> coeffs, double t) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
  return acc;
}

SvBasis::SvBasis(int order) : SvBasis(order, gauss_lobatto_fractions(order)) {}

SvBasis::SvBasis(int order, const std::vector<double>& pattern) : order_(order) {
  if (order < kMinOrder || order > kMaxOrder) {
    throw std::invalid_argument("scheme order must be in 2..5");
  }
  if (static_cast<int>(pattern.size()) != order + 1) {
    throw std::invalid_argument("CV pattern must hold order + 1 edges");
  }
  edges_.resize(pattern.size());
  for (std::size_t e = 0; e < pattern.size(); ++e) edges_[e] = pattern[e] - 0.5;

  average_.resize(order, order);
  for (int m = 0; m < order; ++m) {
    for (int l = 0; l < order; ++l) {
      average_(m, l) = monomial_mean(l, edges_[static_cast<std::size_t>(m)], edges_[static_cast<std::size_t>(m + 1)]);
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(average_);
  if (!lu.isInvertible()) throw std::runtime_error("singular CV averaging matrix");
  inverse_ = lu.inverse();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(average_);
  const auto& sv = svd.singularValues();
  condition_ = sv(0) / sv(sv.size() - 1);
}

RowMatrix SvBasis::evaluation_operator(std::span<const double> xi) const {
  RowMatrix v(static_cast<Eigen::Index>(xi.size()), order_);
  for (std::size_t p = 0; p < xi.size(); ++p) {
    double t = 1.0;
    for (int l = 0; l < order_; ++l) {
      v(static_cast<Eigen::Index>(p), l) = t;
      t *= xi[p];
    }
  }
  return v * inverse_;
}

std::vector<double> SvBasis::coefficients(std::span<const double> averages) const {
  if (static_cast<int>(averages.size()) != order_) {
    throw std::invalid_argument("expected one average per CV");
  }
  check_finite(averages);
  Eigen::Map<const Eigen::VectorXd> u(averages.data(), order_);
  Eigen::VectorXd w = inverse_ * u;
  return {w.data(), w.data() + w.size()};
}

double SvPolynomial1D::operator()(double x) const {
  return eval_monomials(coeffs, scaled(x, center, width, "SV"));
}

double SvPolynomial1D::mean(double lo, double hi) const {
  const double a = scaled(lo, center, width, "SV");
  const double b = scaled(hi, center, width, "SV");
  double acc = 0.0;
  for (std::size_t l = 0; l < coeffs.size(); ++l) acc += coeffs[l] * monomial_mean(static_cast<int>(l), a, b);
  return acc;
}

double SvPolynomial2D::operator()(double x, double y) const {
  return tensor_eval(coeffs, order, scaled(x, cx, wx, "SV"), scaled(y, cy, wy, "SV"));
}

double SvPolynomial2D::mean(double x0, double x1, double y0, double y1) const {
  return tensor_mean(coeffs, order, scaled(x0, cx, wx, "SV"), scaled(x1, cx, wx, "SV"),
                     scaled(y0, cy, wy, "SV"), scaled(y1, cy, wy, "SV"));
}

SvPolynomial1D reconstruct_sv(const SvBasis& basis, const Grid1D& grid, int sv,
                              std::span<const double> averages) {
  if (sv < 0 || sv >= grid.num_svs) throw std::out_of_range("SV index");
  SvPolynomial1D p;
  p.sv = sv;
  p.width = grid.sv_width;
  p.center = grid.sv_left(sv) + 0.5 * grid.sv_width;
  p.coeffs = basis.coefficients(averages);
  return p;
}

SvPolynomial2D reconstruct_sv(const SvBasis& basis, const Grid2D& grid, int i, int j,
                              std::span<const double> averages) {
  const int k = basis.order();
  if (static_cast<int>(averages.size()) != k * k) {
    throw std::invalid_argument("expected k*k averages");
  }
  check_finite(averages);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> u(
      averages.data(), k, k);
  // W = A^{-1} U A^{-T}: rows follow x (m -> l), columns follow y (n -> r).
  const Eigen::MatrixXd w = basis.inverse() * u * basis.inverse().transpose();
  SvPolynomial2D p;
  p.i = i;
  p.j = j;
  p.order = k;
  p.wx = grid.x.sv_width;
  p.wy = grid.y.sv_width;
  p.cx = grid.x.sv_left(i) + 0.5 * p.wx;
  p.cy = grid.y.sv_left(j) + 0.5 * p.wy;
  p.coeffs.resize(static_cast<std::size_t>(k * k));
  for (int l = 0; l < k; ++l) {
    for (int r = 0; r < k; ++r) p.coeffs[static_cast<std::size_t>(l * k + r)] = w(l, r);
  }
  return p;
}

double CvPolynomial1D::operator()(double x) const {
  return eval_monomials(coeffs, scaled(x, center, width, "CV"));
}

double CvPolynomial1D::mean(double lo, double hi) const {
  // Stencil neighbours lie outside the CV, so no range check here.
  const double a = (lo - center) / width;
  const double b = (hi - center) / width;
  double acc = 0.0;
  for (std::size_t l = 0; l < coeffs.size(); ++l) acc += coeffs[l] * monomial_mean(static_cast<int>(l), a, b);
  return acc;
}

double CvPolynomial2D::operator()(double x, double y) const {
  return tensor_eval(coeffs, order, scaled(x, cx, wx, "CV"), scaled(y, cy, wy, "CV"));
}

double CvPolynomial2D::mean(double x0, double x1, double y0, double y1) const {
  return tensor_mean(coeffs, order, (x0 - cx) / wx, (x1 - cx) / wx, (y0 - cy) / wy, (y1 - cy) / wy);
}

double AxisStencil::center_offset(int offset) const {
  const auto& iv = intervals.at(static_cast<std::size_t>(offset + half_width));
  return 0.5 * (iv.first + iv.second);
}

AxisStencil axis_stencil(const std::vector<double>& pattern, int m, int half_width) {
  const int k = static_cast<int>(pattern.size()) - 1;
  if (m < 0 || m >= k) throw std::out_of_range("local CV index");
  const auto at = [&](int q) {
    const int shift = (q >= 0) ? q / k : -((-q + k - 1) / k);
    const int local = q - shift * k;
    return std::pair{shift + pattern[static_cast<std::size_t>(local)],
                     shift + pattern[static_cast<std::size_t>(local + 1)]};
  };
  const auto [lo, hi] = at(m);
  const double width = hi - lo;
  const double center = 0.5 * (lo + hi);
  AxisStencil s;
  s.half_width = half_width;
  for (int o = -half_width; o <= half_width; ++o) {
    if (o == 0) {
      s.intervals.emplace_back(-0.5, 0.5);
      continue;
    }
    const auto [a, b] = at(m + o);
    s.intervals.emplace_back((a - center) / width, (b - center) / width);
  }
  return s;
}

LeastSquaresP0::LeastSquaresP0(int order, const AxisStencil& stencil) : dim_(1), order_(order) {
  std::vector<std::vector<double>> means;
  for (const auto& [lo, hi] : stencil.intervals) {
    std::vector<double> row(static_cast<std::size_t>(order));
    for (int l = 0; l < order; ++l) row[static_cast<std::size_t>(l)] = monomial_mean(l, lo, hi);
    means.push_back(std::move(row));
  }
  build(means, stencil.half_width);
}

LeastSquaresP0::LeastSquaresP0(int order, const AxisStencil& sx, const AxisStencil& sy)
    : dim_(2), order_(order) {
  std::vector<std::vector<double>> means;
  for (const auto& [x0, x1] : sx.intervals) {
    for (const auto& [y0, y1] : sy.intervals) {
      std::vector<double> row(static_cast<std::size_t>(order * order));
      for (int l = 0; l < order; ++l) {
        for (int r = 0; r < order; ++r) {
          row[static_cast<std::size_t>(l * order + r)] = monomial_mean(l, x0, x1) * monomial_mean(r, y0, y1);
        }
      }
      means.push_back(std::move(row));
    }
  }
  const int w = static_cast<int>(sy.intervals.size());
  build(means, sx.half_width * w + sy.half_width);
}

void LeastSquaresP0::build(const std::vector<std::vector<double>>& means, int center) {
  const int ncell = static_cast<int>(means.size());
  const int ncoef = static_cast<int>(means.front().size());
  if (ncell < ncoef) throw std::runtime_error("least-squares stencil smaller than polynomial space");

  const auto& mc = means[static_cast<std::size_t>(center)];
  Eigen::MatrixXd b(ncell - 1, ncoef - 1);
  std::vector<int> cell_of_row;
  for (int c = 0; c < ncell; ++c) {
    if (c == center) continue;
    const int row = static_cast<int>(cell_of_row.size());
    cell_of_row.push_back(c);
    for (int j = 1; j < ncoef; ++j) {
      b(row, j - 1) = means[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)] - mc[static_cast<std::size_t>(j)];
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(b);
  if (qr.rank() < ncoef - 1) throw std::runtime_error("rank-deficient least-squares stencil");
  const Eigen::MatrixXd pinv = qr.solve(Eigen::MatrixXd::Identity(ncell - 1, ncell - 1));

  map_ = RowMatrix::Zero(ncoef, ncell);
  for (int j = 1; j < ncoef; ++j) {
    double sum = 0.0;
    for (int row = 0; row < ncell - 1; ++row) {
      map_(j, cell_of_row[static_cast<std::size_t>(row)]) = pinv(j - 1, row);
      sum += pinv(j - 1, row);
    }
    map_(j, center) = -sum;
  }
  map_(0, center) = 1.0;
  for (int j = 1; j < ncoef; ++j) map_.row(0) -= mc[static_cast<std::size_t>(j)] * map_.row(j);
}

std::vector<double> LeastSquaresP0::solve(std::span<const double> averages) const {
  if (static_cast<int>(averages.size()) != num_cells()) {
    throw std::invalid_argument("stencil average count mismatch");
  }
  Eigen::Map<const Eigen::VectorXd> u(averages.data(), num_cells());
  Eigen::VectorXd a = map_ * u;
  return {a.data(), a.data() + a.size()};
}

std::pair<double, double> linear_candidate_slopes_1d(const AxisStencil& stencil, double avg_left,
                                                     double avg_center, double avg_right) {
  return {(avg_center - avg_left) / (-stencil.center_offset(-1)),
          (avg_right - avg_center) / stencil.center_offset(1)};
}

std::array<std::pair<double, double>, 4> linear_candidate_slopes_2d(const AxisStencil& sx,
                                                                    const AxisStencil& sy, double w,
                                                                    double c, double e, double s,
                                                                    double n) {
  const auto [west, east] = linear_candidate_slopes_1d(sx, w, c, e);
  const auto [south, north] = linear_candidate_slopes_1d(sy, s, c, n);
  return {{{west, south}, {east, south}, {west, north}, {east, north}}};
}

CvPolynomial1D least_squares_p0(const Grid1D& grid, int g, std::span<const double> averages) {
  const int s = large_stencil_half_width(grid.order);
  const LeastSquaresP0 ls(grid.order, axis_stencil(grid.pattern, grid.local_of(g), s));
  return {grid.centers[static_cast<std::size_t>(g)], grid.widths[static_cast<std::size_t>(g)], ls.solve(averages)};
}

std::vector<CvPolynomial1D> linear_candidates(const Grid1D& grid, int g, double avg_left,
                                              double avg_center, double avg_right) {
  const auto stencil = axis_stencil(grid.pattern, grid.local_of(g), 1);
  const auto [s1, s2] = linear_candidate_slopes_1d(stencil, avg_left, avg_center, avg_right);
  const double c = grid.centers[static_cast<std::size_t>(g)];
  const double h = grid.widths[static_cast<std::size_t>(g)];
  return {{c, h, {avg_center, s1}}, {c, h, {avg_center, s2}}};
}

}  // namespace svweno
