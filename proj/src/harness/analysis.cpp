#include "svweno/harness/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace svweno {

ErrorNorms error_norms(const std::vector<double>& numerical, const std::vector<double>& exact) {
  if (numerical.size() != exact.size() || numerical.empty()) {
    throw std::invalid_argument("error norms need two non-empty fields on the same grid");
  }
  ErrorNorms n;
  double sq = 0.0;
  for (std::size_t g = 0; g < numerical.size(); ++g) {
    const double e = std::abs(numerical[g] - exact[g]);
    n.l1 += e;
    sq += e * e;
    n.linf = std::max(n.linf, e);
  }
  const auto count = static_cast<double>(numerical.size());
  n.l1 /= count;
  n.l2 = std::sqrt(sq / count);
  return n;
}

ErrorNorms error_norms(const Averages& numerical, const Averages& exact, int component) {
  if (component < 0 || component >= kMaxVars) throw std::invalid_argument("component out of range");
  const auto c = static_cast<std::size_t>(component);
  std::vector<double> a(numerical.size());
  std::vector<double> b(exact.size());
  for (std::size_t g = 0; g < a.size(); ++g) a[g] = numerical[g][c];
  for (std::size_t g = 0; g < b.size(); ++g) b[g] = exact[g][c];
  return error_norms(a, b);
}

double convergence_rate(double e_coarse, double e_fine, int n_coarse, int n_fine) {
  return std::log(e_coarse / e_fine) / std::log(static_cast<double>(n_fine) / n_coarse);
}

ConvergenceReport run_convergence_study(const ProblemConfig& base, const std::vector<int>& nsv_list) {
  if (!base.exact) throw std::invalid_argument("convergence study needs an exact solution");
  ConvergenceReport report;
  report.problem = base.name;
  report.order = base.order;
  const ConvergenceRow* prev = nullptr;
  for (int n : nsv_list) {
    ConvergenceRow row;
    row.nsv = n;
    ProblemConfig cfg = base;
    cfg.nsv_x = n;
    if (cfg.dim == 2) cfg.nsv_y = n;
    try {
      const RunResult run = advance(cfg);
      const auto disc = make_discretization(cfg);
      const Averages exact = disc->cell_averages(cfg.exact, run.field.time);
      row.norms = error_norms(run.field.averages, exact, 0);
      row.troubled_percent = run.log.final_troubled_percent();
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    if (prev && prev->ok && row.ok) {
      row.rates = ErrorNorms{convergence_rate(prev->norms.l1, row.norms.l1, prev->nsv, n),
                             convergence_rate(prev->norms.l2, row.norms.l2, prev->nsv, n),
                             convergence_rate(prev->norms.linf, row.norms.linf, prev->nsv, n)};
      row.doubling = n == 2 * prev->nsv;
    }
    report.rows.push_back(row);
    prev = &report.rows.back();
  }
  return report;
}

std::string ConvergenceReport::to_csv() const {
  std::ostringstream os;
  os << "nsv,l1,rate_l1,l2,rate_l2,linf,rate_linf,troubled_percent,rate_kind,status\n";
  os << std::setprecision(6) << std::scientific;
  for (const auto& r : rows) {
    os << r.nsv << ',';
    if (!r.ok) {
      os << ",,,,,,,,failed: " << r.error << '\n';
      continue;
    }
    const auto rate = [&](double v) {
      std::ostringstream s;
      if (r.rates) s << std::fixed << std::setprecision(2) << v;
      return s.str();
    };
    os << r.norms.l1 << ',' << rate(r.rates ? r.rates->l1 : 0.0) << ',' << r.norms.l2 << ','
       << rate(r.rates ? r.rates->l2 : 0.0) << ',' << r.norms.linf << ',' << rate(r.rates ? r.rates->linf : 0.0)
       << ',' << std::fixed << std::setprecision(2) << r.troubled_percent << std::scientific << std::setprecision(6)
       << ',' << (r.rates ? (r.doubling ? "log2" : "generalized") : "") << ",ok\n";
  }
  return os.str();
}

std::string ConvergenceReport::to_text() const {
  std::ostringstream os;
  os << problem << ", order " << order << '\n';
  os << std::setw(6) << "N" << std::setw(13) << "l1" << std::setw(7) << "R1" << std::setw(13) << "l2"
     << std::setw(7) << "R2" << std::setw(13) << "linf" << std::setw(7) << "Rinf" << std::setw(9) << "percent"
     << '\n';
  for (const auto& r : rows) {
    os << std::setw(6) << r.nsv;
    if (!r.ok) {
      os << "  failed: " << r.error << '\n';
      continue;
    }
    const auto cell = [&](double e, double rate) {
      os << std::setw(13) << std::scientific << std::setprecision(2) << e;
      if (r.rates) {
        os << std::setw(6) << std::fixed << std::setprecision(2) << rate << (r.doubling ? ' ' : '*');
      } else {
        os << std::setw(7) << "-";
      }
    };
    cell(r.norms.l1, r.rates ? r.rates->l1 : 0.0);
    cell(r.norms.l2, r.rates ? r.rates->l2 : 0.0);
    cell(r.norms.linf, r.rates ? r.rates->linf : 0.0);
    os << std::setw(9) << std::fixed << std::setprecision(2) << r.troubled_percent << '\n';
  }
  os << "(* generalized rate for non-doubling N)\n";
  return os.str();
}

double ReferenceProfile::mean(double lo, double hi) const {
  if (!(hi > lo)) throw std::invalid_argument("empty averaging interval");
  auto it = std::upper_bound(edges.begin(), edges.end(), lo);
  std::size_t c = it == edges.begin() ? 0 : static_cast<std::size_t>(it - edges.begin() - 1);
  double acc = 0.0;
  double x = lo;
  while (x < hi && c < density.size()) {
    const double right = std::min(hi, edges[c + 1]);
    if (right > x) acc += density[c] * (right - x);
    x = std::max(x, right);
    ++c;
  }
  return acc / (hi - lo);
}

double ReferenceProfile::max() const { return *std::max_element(density.begin(), density.end()); }

ReferenceProfile reference_profile(const Grid1D& grid, const Averages& averages) {
  ReferenceProfile p;
  p.edges = grid.edges;
  p.density.resize(averages.size());
  for (std::size_t g = 0; g < averages.size(); ++g) p.density[g] = averages[g][0];
  return p;
}

ReferenceProfile fine_reference(const ProblemConfig& base, const std::string& cache_path) {
  if (base.dim != 1) throw std::invalid_argument("fine references are 1D only");
  if (!cache_path.empty()) {
    std::ifstream in(cache_path);
    if (in) {
      ReferenceProfile p;
      std::size_t n = 0;
      in >> n;
      p.edges.resize(n + 1);
      p.density.resize(n);
      for (auto& e : p.edges) in >> e;
      for (auto& d : p.density) in >> d;
      if (in) return p;
    }
  }
  ProblemConfig cfg = base;
  cfg.order = 5;
  cfg.nsv_x = 800;
  cfg.limiter.mode = LimiterMode::cvmsweno;
  cfg.limiter.tvb_m = 0.01;
  const RunResult run = advance(cfg);
  const ReferenceProfile p = reference_profile(build_grid_1d(cfg.domain.x0, cfg.domain.x1, cfg.nsv_x, cfg.order),
                                               run.field.averages);
  if (!cache_path.empty()) {
    std::ofstream out(cache_path);
    out << std::setprecision(17) << p.density.size() << '\n';
    for (double e : p.edges) out << e << '\n';
    for (double d : p.density) out << d << '\n';
  }
  return p;
}

double reference_l1(const Grid1D& grid, const Averages& averages, const ReferenceProfile& ref) {
  double acc = 0.0;
  for (std::size_t g = 0; g < averages.size(); ++g) {
    acc += std::abs(averages[g][0] - ref.mean(grid.edges[g], grid.edges[g + 1]));
  }
  return acc / static_cast<double>(averages.size());
}

}  // namespace svweno
