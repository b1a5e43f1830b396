#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "svweno/harness/analysis.hpp"
#include "svweno/harness/exact_riemann.hpp"
#include "svweno/harness/output.hpp"
#include "svweno/harness/presets.hpp"

using namespace svweno;

namespace {

int count_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  int n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("svweno_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("error norms") {
  const std::vector<double> a{1.0, 2.0, 3.0};
  const auto zero = error_norms(a, a);
  CHECK(zero.l1 == 0.0);
  CHECK(zero.l2 == 0.0);
  CHECK(zero.linf == 0.0);

  const auto unit = error_norms(std::vector<double>{1.0, -1.0}, std::vector<double>{0.0, 0.0});
  CHECK(unit.l1 == 1.0);
  CHECK(unit.l2 == 1.0);
  CHECK(unit.linf == 1.0);

  const auto mixed = error_norms(std::vector<double>{0.0, 3.0}, std::vector<double>{0.0, 0.0});
  CHECK(mixed.l1 == 1.5);
  CHECK(mixed.l2 == doctest::Approx(std::sqrt(4.5)));
  CHECK(mixed.linf == 3.0);

  const Averages u{{0.0, 9.0, 0.0, 0.0}, {2.0, 9.0, 0.0, 0.0}};
  const Averages v{{0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}};
  CHECK(error_norms(u, v, 0).l1 == 1.0);
  CHECK(error_norms(u, v, 1).l1 == 9.0);
  CHECK_THROWS_AS(error_norms(a, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("convergence rate") {
  CHECK(convergence_rate(8e-3, 1e-3, 10, 20) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(convergence_rate(1.0, 1.0 / 16.0, 20, 40) == doctest::Approx(4.0).epsilon(1e-14));
  // Non-doubling pairs use the true resolution ratio.
  CHECK(convergence_rate(std::pow(80.0, -3.0), std::pow(100.0, -3.0), 80, 100) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("exact Riemann solver: Sod") {
  const ExactRiemann r({1.0, 0.0, 1.0}, {0.125, 0.0, 0.1});
  CHECK(r.star_pressure() == doctest::Approx(0.30313).epsilon(1e-5));
  CHECK(r.star_velocity() == doctest::Approx(0.92745).epsilon(1e-5));
  CHECK(r.iterations() > 0);

  // Rankine-Hugoniot across the right shock.
  const Primitive1D post = r.sample(r.star_velocity() + 0.3);
  const Primitive1D pre{0.125, 0.0, 0.1};
  const double s = (post.rho * post.u - pre.rho * pre.u) / (post.rho - pre.rho);
  CHECK(r.sample(s - 1e-6).rho == doctest::Approx(post.rho));
  CHECK(r.sample(s + 1e-6).rho == doctest::Approx(pre.rho));
  const auto momentum = [s](const Primitive1D& w) { return w.rho * w.u * (w.u - s) + w.p; };
  const auto energy = [s](const Primitive1D& w) {
    const double e = w.p / 0.4 + 0.5 * w.rho * w.u * w.u;
    return e * (w.u - s) + w.p * w.u;
  };
  CHECK(std::abs(momentum(post) - momentum(pre)) < 1e-9);
  CHECK(std::abs(energy(post) - energy(pre)) < 1e-9);

  // Far field.
  CHECK(r.sample(-10.0).rho == 1.0);
  CHECK(r.sample(10.0).p == 0.1);
}

TEST_CASE("exact Riemann solver: mirror symmetry") {
  const Primitive1D l{0.445, 0.698, 3.528};
  const Primitive1D rr{0.5, 0.0, 0.571};
  const ExactRiemann a(l, rr);
  const ExactRiemann b({rr.rho, -rr.u, rr.p}, {l.rho, -l.u, l.p});
  CHECK(a.star_pressure() == doctest::Approx(b.star_pressure()).epsilon(1e-12));
  for (double xi : {-3.0, -1.2, -0.1, 0.4, 1.0, 2.5}) {
    const auto wa = a.sample(xi);
    const auto wb = b.sample(-xi);
    CHECK(wa.rho == doctest::Approx(wb.rho).epsilon(1e-10));
    CHECK(wa.u == doctest::Approx(-wb.u).scale(1.0).epsilon(1e-10));
    CHECK(wa.p == doctest::Approx(wb.p).epsilon(1e-10));
  }
  const ExactRiemann same({1.0, 0.0, 1.0}, {1.0, 0.0, 1.0});
  CHECK(same.star_pressure() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(same.star_velocity() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("exact Riemann solver: bad input") {
  CHECK_THROWS_AS(ExactRiemann({-1.0, 0.0, 1.0}, {1.0, 0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(ExactRiemann({1.0, -20.0, 0.1}, {1.0, 20.0, 0.1}), std::domain_error);
}

TEST_CASE("presets") {
  const auto sod = preset("sod1d");
  CHECK(sod.domain.x0 == -5.0);
  CHECK(sod.domain.x1 == 5.0);
  CHECK(sod.t_final == 2.0);
  CHECK(sod.initial(-1.0, 0.0, 0.0)[0] == 1.0);
  CHECK(sod.initial(1.0, 0.0, 0.0)[0] == 0.125);
  REQUIRE(sod.exact);

  const auto blast = preset("blast1d");
  CHECK(blast.t_final == 0.038);
  CHECK(blast.boundary.left.at(0.0).kind == BoundaryKind::reflective);
  CHECK(blast.boundary.right.at(0.0).kind == BoundaryKind::reflective);
  CHECK(blast.nsv_x == 400);

  const auto so = preset("shuosher");
  CHECK(so.t_final == 1.8);
  CHECK(so.initial(-4.01, 0.0, 0.0)[0] == doctest::Approx(3.857134));
  CHECK(so.initial(-3.99, 0.0, 0.0)[0] == doctest::Approx(1.0 + 0.2 * std::sin(5.0 * -3.99)));

  const auto dm = preset("doublemach");
  CHECK(dm.nsv_x == 960);
  CHECK(dm.nsv_y == 240);
  CHECK(dm.dim == 2);

  for (const auto& info : preset_catalog()) {
    const ProblemConfig c = preset(info.name);
    CHECK(c.name == info.name);
    CHECK_NOTHROW(c.validate());
  }
  CHECK_THROWS_AS(preset("nope"), std::invalid_argument);
  CHECK(shock_tube_states("lax1d")->first.p == 3.528);
  CHECK_FALSE(shock_tube_states("sine1d"));
}

TEST_CASE("run spec: overrides and JSON round trip") {
  RunSpec s;
  s.problem = "lax1d";
  s.order = 4;
  s.nsv_x = 64;
  s.tvb_m = 20.0;
  s.tvb_length = "sv";
  s.epsilon = 1e-8;
  s.cfl = 0.3;
  s.limiter = "full";
  s.characteristic = false;
  s.flux = "global";
  s.detect_every_stage = false;
  s.trace_fallback = true;
  s.workers = 2;
  const RunSpec back = RunSpec::from_json(s.to_json());
  CHECK(back == s);

  const ProblemConfig c = s.build();
  CHECK(c.order == 4);
  CHECK(c.nsv_x == 64);
  CHECK(c.limiter.tvb_m == 20.0);
  CHECK(c.limiter.tvb_length == TvbLength::sv);
  CHECK(c.limiter.mode == LimiterMode::full);
  CHECK(c.flux == LfVariant::global);
  CHECK_FALSE(c.limiter.characteristic);
  CHECK(c.t_final == 1.3);

  RunSpec empty;
  CHECK(RunSpec::from_json(empty.to_json()) == empty);
  RunSpec bad;
  bad.flux = "upwind";
  CHECK_THROWS_AS(bad.build(), std::invalid_argument);
  bad = RunSpec{};
  bad.order = 9;
  CHECK_THROWS_AS(bad.build(), std::invalid_argument);
}

TEST_CASE("output files") {
  const auto dir = scratch("out");
  const ProblemConfig sod = preset("sod1d");
  const auto grid = build_grid_1d(sod.domain.x0, sod.domain.x1, 100, 3);
  const Averages u(300, primitive_to_conserved(sod.model, {1.0, 0.0, 1.0, 0.0}));
  write_field_1d(dir / "sod.csv", grid, sod.model, u, u);
  CHECK(count_lines(dir / "sod.csv") == 1 + 100 * 3);
  {
    std::ifstream in(dir / "sod.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,cv_width,rho,u,p,exact_rho,exact_u,exact_p");
  }

  const ProblemConfig r1 = preset("riemann2d1");
  const auto g2 = build_grid_2d(r1.domain, 100, 100, 3);
  const Averages u2(static_cast<std::size_t>(g2.num_cvs()), primitive_to_conserved(r1.model, {1.0, 0.1, 0.2, 1.0}));
  write_field_2d(dir / "r1.dat", g2, r1.model, u2);
  CHECK(count_lines(dir / "r1.dat") == 2 + 90000);
  write_density_matrix(dir / "rho.dat", g2, u2);
  CHECK(count_lines(dir / "rho.dat") == 300);

  CHECK(component_names(Model::advection_1d(1.0)) == std::vector<std::string>{"u"});
  const auto w = output_components(Model::euler_2d(), primitive_to_conserved(Model::euler_2d(), {2.0, 0.5, -1.0, 3.0}));
  REQUIRE(w.size() == 4);
  CHECK(w[2] == doctest::Approx(-1.0));
  CHECK(w[3] == doctest::Approx(3.0));
  std::filesystem::remove_all(dir);
}

TEST_CASE("write_outputs for a short run") {
  const auto dir = scratch("run");
  ProblemConfig c = preset("sod1d");
  c.nsv_x = 20;
  c.t_final = 0.2;
  c.record_troubled_history = true;
  const RunResult r = advance(c);
  const auto files = write_outputs(dir, c, r, "unit");
  for (const auto& f : files) CHECK(std::filesystem::exists(f));
  CHECK(count_lines(dir / "field.csv") == 1 + 60);
  CHECK(count_lines(dir / "runlog.jsonl") == static_cast<int>(r.log.steps.size()));
  std::ifstream in(dir / "summary.json");
  const auto j = nlohmann::json::parse(in);
  CHECK(j.at("problem") == "sod1d");
  CHECK(j.at("note") == "unit");
  CHECK(j.at("t_final").get<double>() == 0.2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("troubled fraction for the smooth sine at M = 0.01") {
  ProblemConfig c = preset("sine1d");
  c.limiter.tvb_m = 0.01;
  c.nsv_x = 100;
  const RunResult r = advance(c);
  const double pct = r.log.final_troubled_percent();
  CHECK(pct > 0.0);
  CHECK(std::abs(pct - 3.33) <= 4.0);
}

TEST_CASE("convergence study") {
  ProblemConfig c = preset("sine1d");
  c.limiter.mode = LimiterMode::off;
  const auto rep = run_convergence_study(c, {10, 20, 30});
  REQUIRE(rep.rows.size() == 3);
  CHECK_FALSE(rep.rows[0].rates);
  CHECK(rep.rows[1].doubling);
  CHECK_FALSE(rep.rows[2].doubling);
  CHECK(rep.rows[1].rates->l1 == doctest::Approx(3.0).epsilon(0.1));
  CHECK(rep.rows[2].rates->l1 == doctest::Approx(3.0).epsilon(0.1));
  std::istringstream csv(rep.to_csv());
  int lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  CHECK(lines == 4);
  CHECK(rep.to_text().find("sine1d") != std::string::npos);

  ProblemConfig bad = preset("sod1d");
  bad.t_final = 0.1;
  bad.initial = [](double, double, double) { return State{-1.0, 0.0, 1.0, 0.0}; };
  const auto failed = run_convergence_study(bad, {10});
  REQUIRE(failed.rows.size() == 1);
  CHECK_FALSE(failed.rows[0].ok);
  CHECK_FALSE(failed.rows[0].error.empty());

  ProblemConfig no_exact = preset("shuosher");
  CHECK_THROWS_AS(run_convergence_study(no_exact, {10}), std::invalid_argument);
}

TEST_CASE("reference profiles") {
  const ReferenceProfile p{{0.0, 1.0, 2.0}, {1.0, 3.0}};
  CHECK(p.mean(0.5, 1.5) == doctest::Approx(2.0));
  CHECK(p.mean(0.0, 1.0) == doctest::Approx(1.0));
  CHECK(p.max() == 3.0);

  const auto g = build_grid_1d(0.0, 2.0, 2, 3);
  Averages u(6);
  for (int i = 0; i < 6; ++i) u[static_cast<std::size_t>(i)] = {i < 3 ? 1.0 : 3.0, 0.0, 2.5, 0.0};
  const auto ref = reference_profile(g, u);
  CHECK(ref.edges.size() == 7);
  CHECK(reference_l1(g, u, ref) == doctest::Approx(0.0).scale(1.0));
  CHECK(reference_l1(g, u, p) == doctest::Approx(0.0).scale(1.0));
  Averages shifted = u;
  for (auto& s : shifted) s[0] += 0.5;
  CHECK(reference_l1(g, shifted, p) == doctest::Approx(0.5));
}
