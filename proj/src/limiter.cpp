#include "svweno/limiter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace svweno {

namespace {

double falling(int a, int q) {
  double r = 1.0;
  for (int j = 0; j < q; ++j) r *= (a - j);
  return r;
}

// int_{-1/2}^{1/2} (d^q t^a)(d^q t^b) dt
double derivative_product(int a, int b, int q) {
  if (q > a || q > b) return 0.0;
  return falling(a, q) * falling(b, q) * monomial_mean(a + b - 2 * q, -0.5, 0.5);
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

LimiterMode parse_limiter_mode(const std::string& name) {
  if (name == "cvmsweno") return LimiterMode::cvmsweno;
  if (name == "full") return LimiterMode::full;
  if (name == "off") return LimiterMode::off;
  throw std::invalid_argument("unknown limiter mode '" + name + "'");
}

std::string to_string(LimiterMode mode) {
  switch (mode) {
    case LimiterMode::cvmsweno: return "cvmsweno";
    case LimiterMode::full: return "full";
    case LimiterMode::off: return "off";
  }
  return "?";
}

TvbLength parse_tvb_length(const std::string& name) {
  if (name == "cv") return TvbLength::cv;
  if (name == "sv") return TvbLength::sv;
  throw std::invalid_argument("unknown TVB length '" + name + "' (expected cv or sv)");
}

std::string to_string(TvbLength length) { return length == TvbLength::cv ? "cv" : "sv"; }

void LimiterParams::validate() const {
  if (!(tvb_m >= 0.0)) throw std::invalid_argument("TVB constant M must be non-negative");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const auto check = [](std::span<const double> g) {
    double sum = 0.0;
    for (double v : g) {
      if (!(v > 0.0)) throw std::invalid_argument("linear weights must be positive");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-15) throw std::invalid_argument("linear weights must sum to 1");
  };
  check(gamma_1d);
  check(gamma_2d);
}

double minmod(double a, double b, double c) {
  const int s = sign(a);
  if (s == 0 || sign(b) != s || sign(c) != s) return 0.0;
  return s * std::min({std::abs(a), std::abs(b), std::abs(c)});
}

MinmodResult modified_minmod(double a1, double a2, double a3, double m, double h) {
  if (std::abs(a1) <= m * h * h) return {a1, false};
  const int s = sign(a1);
  const bool keeps = s != 0 && sign(a2) == s && sign(a3) == s && std::abs(a1) <= std::abs(a2) &&
                     std::abs(a1) <= std::abs(a3);
  if (keeps) return {a1, false};
  return {minmod(a1, a2, a3), true};
}

bool tvb_flags(double avg, double trace_minus, double trace_plus, double avg_prev, double avg_next,
               double m, double h) {
  const double dp = avg_next - avg;
  const double dm = avg - avg_prev;
  return modified_minmod(trace_plus - avg, dp, dm, m, h).modified ||
         modified_minmod(avg - trace_minus, dp, dm, m, h).modified;
}

RowMatrix smoothness_matrix_1d(int order) {
  RowMatrix s = RowMatrix::Zero(order, order);
  for (int a = 0; a < order; ++a) {
    for (int b = 0; b < order; ++b) {
      for (int q = 1; q <= order; ++q) s(a, b) += derivative_product(a, b, q);
    }
  }
  return s;
}

RowMatrix smoothness_matrix_2d(int order) {
  const int n = order * order;
  RowMatrix s = RowMatrix::Zero(n, n);
  for (int a = 0; a < order; ++a) {
    for (int b = 0; b < order; ++b) {
      for (int c = 0; c < order; ++c) {
        for (int d = 0; d < order; ++d) {
          double acc = 0.0;
          for (int q1 = 0; q1 <= order; ++q1) {
            for (int q2 = 0; q1 + q2 <= order; ++q2) {
              if (q1 + q2 == 0) continue;
              acc += derivative_product(a, c, q1) * derivative_product(b, d, q2);
            }
          }
          s(a * order + b, c * order + d) = acc;
        }
      }
    }
  }
  return s;
}

double smoothness_indicator(const RowMatrix& s, std::span<const double> coeffs) {
  const auto n = static_cast<Eigen::Index>(coeffs.size());
  double acc = 0.0;
  for (Eigen::Index a = 0; a < n; ++a) {
    if (coeffs[static_cast<std::size_t>(a)] == 0.0) continue;
    double row = 0.0;
    for (Eigen::Index b = 0; b < n; ++b) row += s(a, b) * coeffs[static_cast<std::size_t>(b)];
    acc += coeffs[static_cast<std::size_t>(a)] * row;
  }
  return std::max(acc, 0.0);
}

double smoothness_indicator(const CvPolynomial1D& p) {
  return smoothness_indicator(smoothness_matrix_1d(static_cast<int>(p.coeffs.size())), p.coeffs);
}

double smoothness_indicator(const CvPolynomial2D& p) {
  return smoothness_indicator(smoothness_matrix_2d(p.order), p.coeffs);
}

SwenoResult sweno_combine(const RowMatrix& s, std::span<const double> p0,
                          std::span<const std::array<double, kMaxCoeffs>> linear,
                          std::span<const double> gamma, double epsilon) {
  const std::size_t n = p0.size();
  const std::size_t nl = linear.size();
  if (gamma.size() != nl + 1 || nl + 1 > 5 || n > static_cast<std::size_t>(kMaxCoeffs)) {
    throw std::invalid_argument("inconsistent candidate count");
  }
  SwenoResult r;
  std::array<double, kMaxCoeffs> tilde{};
  for (std::size_t a = 0; a < n; ++a) {
    double v = p0[a];
    for (std::size_t l = 0; l < nl; ++l) v -= gamma[l + 1] * linear[l][a];
    tilde[a] = v / gamma[0];
  }
  r.beta[0] = smoothness_indicator(s, std::span<const double>(tilde.data(), n));
  double diff = 0.0;
  for (std::size_t l = 0; l < nl; ++l) {
    r.beta[l + 1] = smoothness_indicator(s, std::span<const double>(linear[l].data(), n));
    diff += std::abs(r.beta[0] - r.beta[l + 1]);
  }
  r.tau = (diff / static_cast<double>(nl)) * (diff / static_cast<double>(nl));

  double total = 0.0;
  for (std::size_t l = 0; l <= nl; ++l) {
    r.weights[l] = gamma[l] * (1.0 + r.tau / (r.beta[l] + epsilon));
    total += r.weights[l];
  }
  for (std::size_t l = 0; l <= nl; ++l) r.weights[l] /= total;

  for (std::size_t a = 0; a < n; ++a) {
    double v = r.weights[0] * tilde[a];
    for (std::size_t l = 0; l < nl; ++l) v += r.weights[l + 1] * linear[l][a];
    r.coeffs[a] = v;
  }
  return r;
}

CvLimiter1D::CvLimiter1D(const Grid1D& grid)
    : order_(grid.order),
      half_width_(large_stencil_half_width(grid.order)),
      smooth_(smoothness_matrix_1d(grid.order)) {
  for (int m = 0; m < order_; ++m) {
    p0_.emplace_back(order_, axis_stencil(grid.pattern, m, half_width_));
    near_.push_back(axis_stencil(grid.pattern, m, 1));
  }
}

SwenoResult CvLimiter1D::limit(int m, std::span<const double> stencil,
                               const LimiterParams& params) const {
  const auto& ls = p0_[static_cast<std::size_t>(m)];
  if (static_cast<int>(stencil.size()) != ls.num_cells()) {
    throw std::invalid_argument("stencil size mismatch");
  }
  std::array<double, kMaxCoeffs> p0{};
  const auto& map = ls.matrix();
  for (int a = 0; a < order_; ++a) {
    double v = 0.0;
    for (int c = 0; c < ls.num_cells(); ++c) v += map(a, c) * stencil[static_cast<std::size_t>(c)];
    p0[static_cast<std::size_t>(a)] = v;
  }
  const auto s = static_cast<std::size_t>(half_width_);
  const double center = stencil[s];
  const auto [s1, s2] =
      linear_candidate_slopes_1d(near_[static_cast<std::size_t>(m)], stencil[s - 1], center, stencil[s + 1]);
  std::array<std::array<double, kMaxCoeffs>, 2> lin{};
  lin[0][0] = center;
  lin[0][1] = s1;
  lin[1][0] = center;
  lin[1][1] = s2;
  return sweno_combine(smooth_, std::span<const double>(p0.data(), static_cast<std::size_t>(order_)),
                       lin, params.gamma_1d, params.epsilon);
}

CvLimiter2D::CvLimiter2D(int order)
    : order_(order),
      half_width_(large_stencil_half_width(order)),
      smooth_(smoothness_matrix_2d(order)) {
  const auto pattern = gauss_lobatto_fractions(order);
  std::vector<AxisStencil> wide;
  for (int m = 0; m < order; ++m) {
    wide.push_back(axis_stencil(pattern, m, half_width_));
    near_.push_back(axis_stencil(pattern, m, 1));
  }
  for (int m = 0; m < order; ++m) {
    for (int n = 0; n < order; ++n) {
      p0_.emplace_back(order, wide[static_cast<std::size_t>(m)], wide[static_cast<std::size_t>(n)]);
    }
  }
}

SwenoResult CvLimiter2D::limit(int m, int n, std::span<const double> stencil,
                               const LimiterParams& params) const {
  const auto& ls = p0(m, n);
  if (static_cast<int>(stencil.size()) != ls.num_cells()) {
    throw std::invalid_argument("stencil size mismatch");
  }
  const int nc = order_ * order_;
  std::array<double, kMaxCoeffs> p{};
  const auto& map = ls.matrix();
  for (int a = 0; a < nc; ++a) {
    double v = 0.0;
    for (int c = 0; c < ls.num_cells(); ++c) v += map(a, c) * stencil[static_cast<std::size_t>(c)];
    p[static_cast<std::size_t>(a)] = v;
  }
  const int w = width();
  const int s = half_width_;
  const auto at = [&](int ix, int iy) { return stencil[static_cast<std::size_t>(ix * w + iy)]; };
  const auto slopes =
      linear_candidate_slopes_2d(near_[static_cast<std::size_t>(m)], near_[static_cast<std::size_t>(n)],
                                 at(s - 1, s), at(s, s), at(s + 1, s), at(s, s - 1), at(s, s + 1));
  std::array<std::array<double, kMaxCoeffs>, 4> lin{};
  for (std::size_t l = 0; l < 4; ++l) {
    lin[l][0] = at(s, s);
    lin[l][static_cast<std::size_t>(order_)] = slopes[l].first;  // x slope: (l=1, r=0)
    lin[l][1] = slopes[l].second;                                // y slope: (l=0, r=1)
  }
  return sweno_combine(smooth_, std::span<const double>(p.data(), static_cast<std::size_t>(nc)), lin,
                       params.gamma_2d, params.epsilon);
}

int TroubledMask::count() const {
  return static_cast<int>(std::count_if(flags.begin(), flags.end(), [](std::uint8_t f) { return f != 0; }));
}

double TroubledMask::percent() const {
  return flags.empty() ? 0.0 : 100.0 * count() / static_cast<double>(flags.size());
}

std::vector<FaceKind> classify_faces_1d(const Grid1D& grid, const TroubledMask& mask) {
  const int n = grid.num_cvs();
  if (mask.size() != n) throw std::invalid_argument("mask does not match grid");
  std::vector<FaceKind> kinds(static_cast<std::size_t>(n + 1), FaceKind::continuous);
  for (int f = 0; f <= n; ++f) {
    const bool sv_face = f % grid.order == 0;
    const bool near = (f > 0 && mask[f - 1]) || (f < n && mask[f]);
    if (sv_face || near) kinds[static_cast<std::size_t>(f)] = FaceKind::riemann;
  }
  return kinds;
}

FaceClasses2D classify_faces_2d(const Grid2D& grid, const TroubledMask& mask) {
  const int cx = grid.cvs_x();
  const int cy = grid.cvs_y();
  const int k = grid.order();
  if (mask.size() != grid.num_cvs()) throw std::invalid_argument("mask does not match grid");
  FaceClasses2D out;
  out.x.assign(static_cast<std::size_t>((cx + 1) * cy), FaceKind::continuous);
  out.y.assign(static_cast<std::size_t>(cx * (cy + 1)), FaceKind::continuous);
  for (int gy = 0; gy < cy; ++gy) {
    for (int fx = 0; fx <= cx; ++fx) {
      const bool near = (fx > 0 && mask[grid.flat(fx - 1, gy)]) || (fx < cx && mask[grid.flat(fx, gy)]);
      if (fx % k == 0 || near) out.x[static_cast<std::size_t>(gy * (cx + 1) + fx)] = FaceKind::riemann;
    }
  }
  for (int fy = 0; fy <= cy; ++fy) {
    for (int gx = 0; gx < cx; ++gx) {
      const bool near = (fy > 0 && mask[grid.flat(gx, fy - 1)]) || (fy < cy && mask[grid.flat(gx, fy)]);
      if (fy % k == 0 || near) out.y[static_cast<std::size_t>(fy * cx + gx)] = FaceKind::riemann;
    }
  }
  return out;
}

}  // namespace svweno
