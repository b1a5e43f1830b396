#include "svweno/harness/presets.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

namespace svweno {

namespace {

using std::numbers::pi;

StateFunction from_primitive_1d(Model model, std::function<Primitive1D(double x, double t)> f) {
  return [model, f](double x, double, double t) {
    const Primitive1D w = f(x, t);
    return primitive_to_conserved(model, State{w.rho, w.u, w.p, 0.0});
  };
}

StateFunction riemann_exact(Model model, Primitive1D left, Primitive1D right) {
  const auto solver = std::make_shared<ExactRiemann>(left, right, model.gamma);
  return from_primitive_1d(model, [solver, left, right](double x, double t) {
    if (t <= 0.0) return x < 0.0 ? left : right;
    return solver->sample(x / t);
  });
}

ProblemConfig shock_tube(const std::string& name, Primitive1D left, Primitive1D right, double t_final,
                         double tvb_m) {
  ProblemConfig c;
  c.name = name;
  c.model = Model::euler_1d();
  c.dim = 1;
  c.domain = {-5.0, 5.0, 0.0, 1.0};
  c.nsv_x = 100;
  c.order = 3;
  c.t_final = t_final;
  c.limiter.tvb_m = tvb_m;
  c.boundary = BoundarySpec::uniform(BoundaryKind::outflow);
  c.initial = from_primitive_1d(c.model, [left, right](double x, double) { return x < 0.0 ? left : right; });
  c.exact = riemann_exact(c.model, left, right);
  return c;
}

State quadrant_state(const Model& model, double x, double y, const std::array<State, 4>& prim) {
  // prim holds quadrants 1..4: (x>.5,y>.5), (x<.5,y>.5), (x<.5,y<.5), (x>.5,y<.5).
  const bool east = x > 0.5;
  const bool north = y > 0.5;
  const std::size_t q = north ? (east ? 0 : 1) : (east ? 3 : 2);
  return primitive_to_conserved(model, prim[q]);
}

ProblemConfig riemann_2d(const std::string& name, const std::array<State, 4>& prim, double t_final) {
  ProblemConfig c;
  c.name = name;
  c.model = Model::euler_2d();
  c.dim = 2;
  c.domain = {0.0, 1.0, 0.0, 1.0};
  c.nsv_x = 100;
  c.nsv_y = 100;
  c.order = 3;
  c.t_final = t_final;
  c.limiter.tvb_m = 100.0;
  // Local LF loses positivity at the shock junction near the corner at low M.
  c.flux = LfVariant::global;
  c.boundary = BoundarySpec::uniform(BoundaryKind::outflow);
  const Model model = c.model;
  c.initial = [model, prim](double x, double y, double) { return quadrant_state(model, x, y, prim); };
  return c;
}

}  // namespace

State double_mach_post_shock() { return {8.0, 57.1597, -33.0012, 563.544}; }
State double_mach_pre_shock() { return {1.4, 0.0, 0.0, 2.5}; }
double double_mach_top_switch(double t) { return 1.0 / 6.0 + (1.0 + 20.0 * t) / std::sqrt(3.0); }

const std::vector<PresetInfo>& preset_catalog() {
  static const std::vector<PresetInfo> catalog = {
      {"sine1d", "linear advection of sin(pi x) on [-1,1], periodic, t=1"},
      {"eulersine1d", "Euler density sine wave on [0,2], U=0.7, P=1, periodic, t=2"},
      {"sod1d", "Sod shock tube on [-5,5], outflow, t=2"},
      {"lax1d", "Lax shock tube on [-5,5], outflow, t=1.3"},
      {"shuosher", "Mach 3 shock / entropy wave interaction on [-5,5], 180 SVs, t=1.8"},
      {"blast1d", "Woodward-Colella blast waves on [0,1], reflective walls, 400 SVs, t=0.038"},
      {"riemann2d1", "2D Riemann problem I on the unit square, outflow, t=0.25"},
      {"riemann2d2", "2D Riemann problem II on the unit square, outflow, t=0.2"},
      {"doublemach", "double Mach reflection on [0,4]x[0,1], 960x240 SVs, t=0.2"},
      {"sine2d", "linear advection of sin(pi (x+y)) on [-1,1]^2, periodic, t=1"},
  };
  return catalog;
}

std::optional<std::pair<Primitive1D, Primitive1D>> shock_tube_states(const std::string& name) {
  if (name == "sod1d") return std::pair{Primitive1D{1.0, 0.0, 1.0}, Primitive1D{0.125, 0.0, 0.1}};
  if (name == "lax1d") return std::pair{Primitive1D{0.445, 0.698, 3.528}, Primitive1D{0.5, 0.0, 0.571}};
  return std::nullopt;
}

ProblemConfig preset(const std::string& name) {
  if (name == "sine1d") {
    ProblemConfig c;
    c.name = name;
    c.model = Model::advection_1d(1.0);
    c.domain = {-1.0, 1.0, 0.0, 1.0};
    c.t_final = 1.0;
    c.limiter.tvb_m = 2.0;
    c.boundary = BoundarySpec::uniform(BoundaryKind::periodic);
    c.initial = [](double x, double, double) { return State{std::sin(pi * x), 0.0, 0.0, 0.0}; };
    c.exact = [](double x, double, double t) { return State{std::sin(pi * (x - t)), 0.0, 0.0, 0.0}; };
    return c;
  }
  if (name == "eulersine1d") {
    ProblemConfig c;
    c.name = name;
    c.model = Model::euler_1d();
    c.domain = {0.0, 2.0, 0.0, 1.0};
    c.t_final = 2.0;
    c.limiter.tvb_m = 2.0;
    c.boundary = BoundarySpec::uniform(BoundaryKind::periodic);
    const auto wave = [](double x, double t) { return Primitive1D{1.0 + 0.2 * std::sin(pi * (x - 0.7 * t)), 0.7, 1.0}; };
    c.initial = from_primitive_1d(c.model, wave);
    c.exact = from_primitive_1d(c.model, wave);
    return c;
  }
  if (auto states = shock_tube_states(name)) {
    return name == "sod1d" ? shock_tube(name, states->first, states->second, 2.0, 10.0)
                           : shock_tube(name, states->first, states->second, 1.3, 0.01);
  }
  if (name == "shuosher") {
    ProblemConfig c = shock_tube(name, {}, {}, 1.8, 300.0);
    c.nsv_x = 180;
    c.exact = nullptr;
    c.initial = from_primitive_1d(c.model, [](double x, double) {
      if (x < -4.0) return Primitive1D{3.857134, 2.629369, 10.33333};
      return Primitive1D{1.0 + 0.2 * std::sin(5.0 * x), 0.0, 1.0};
    });
    return c;
  }
  if (name == "blast1d") {
    ProblemConfig c = shock_tube(name, {}, {}, 0.038, 0.01);
    c.domain = {0.0, 1.0, 0.0, 1.0};
    c.nsv_x = 400;
    c.exact = nullptr;
    c.boundary = BoundarySpec::uniform(BoundaryKind::reflective);
    // Local LF gives negative pressure traces behind the colliding shocks.
    c.flux = LfVariant::global;
    c.initial = from_primitive_1d(c.model, [](double x, double) {
      if (x < 0.1) return Primitive1D{1.0, 0.0, 1000.0};
      if (x < 0.9) return Primitive1D{1.0, 0.0, 0.01};
      return Primitive1D{1.0, 0.0, 100.0};
    });
    return c;
  }
  if (name == "riemann2d1") {
    return riemann_2d(name,
                      {State{0.5313, 0.0, 0.0, 0.4}, State{1.0, 0.7276, 0.0, 1.0}, State{0.8, 0.0, 0.0, 1.0},
                       State{1.0, 0.0, 0.7276, 1.0}},
                      0.25);
  }
  if (name == "riemann2d2") {
    return riemann_2d(name,
                      {State{1.0, 0.1, -0.3, 1.0}, State{0.5197, -0.6259, -0.3, 0.4}, State{0.8, 0.1, -0.3, 0.4},
                       State{0.5313, 0.1, 0.4276, 0.4}},
                      0.2);
  }
  if (name == "doublemach") {
    ProblemConfig c;
    c.name = name;
    c.model = Model::euler_2d();
    c.dim = 2;
    c.domain = {0.0, 4.0, 0.0, 1.0};
    c.nsv_x = 960;
    c.nsv_y = 240;
    c.order = 3;
    c.t_final = 0.2;
    c.limiter.tvb_m = 100.0;
    const State post = double_mach_post_shock();
    const State pre = double_mach_pre_shock();
    const double x_foot = 1.0 / 6.0;
    c.initial = [=](double x, double y, double) { return y > std::sqrt(3.0) * (x - x_foot) ? post : pre; };
    // Near the oblique shock no linear candidate is clean, and the limited
    // traces of cut CVs reach negative pressure within the first step.
    c.limiter.trace_fallback = true;
    c.boundary.left = BoundarySide::prescribed([=](double, double, double) { return post; });
    c.boundary.right = BoundarySide::prescribed([=](double, double, double) { return pre; });
    c.boundary.top = BoundarySide::prescribed(
        [=](double x, double, double t) { return x < double_mach_top_switch(t) ? post : pre; });
    BoundarySide bottom;
    bottom.segments.push_back({BoundaryKind::prescribed, -std::numeric_limits<double>::infinity(), x_foot,
                               [=](double, double, double) { return post; }});
    bottom.segments.push_back(
        {BoundaryKind::reflective, x_foot, std::numeric_limits<double>::infinity(), {}});
    c.boundary.bottom = bottom;
    return c;
  }
  if (name == "sine2d") {
    ProblemConfig c;
    c.name = name;
    c.model = Model::advection_2d(1.0, 1.0);
    c.dim = 2;
    c.domain = {-1.0, 1.0, -1.0, 1.0};
    c.nsv_x = 20;
    c.nsv_y = 20;
    c.t_final = 1.0;
    c.limiter.tvb_m = 2.0;
    c.boundary = BoundarySpec::uniform(BoundaryKind::periodic);
    c.initial = [](double x, double y, double) { return State{std::sin(pi * (x + y)), 0.0, 0.0, 0.0}; };
    c.exact = [](double x, double y, double t) { return State{std::sin(pi * (x + y - 2.0 * t)), 0.0, 0.0, 0.0}; };
    return c;
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

ProblemConfig RunSpec::build() const {
  ProblemConfig c = preset(problem);
  if (order) c.order = *order;
  if (nsv_x) c.nsv_x = *nsv_x;
  if (nsv_y) c.nsv_y = *nsv_y;
  if (tvb_m) c.limiter.tvb_m = *tvb_m;
  if (tvb_length) c.limiter.tvb_length = parse_tvb_length(*tvb_length);
  if (epsilon) c.limiter.epsilon = *epsilon;
  if (cfl) c.cfl = *cfl;
  if (t_final) c.t_final = *t_final;
  if (limiter) c.limiter.mode = parse_limiter_mode(*limiter);
  if (characteristic) c.limiter.characteristic = *characteristic;
  if (flux) {
    if (*flux == "local") {
      c.flux = LfVariant::local;
    } else if (*flux == "global") {
      c.flux = LfVariant::global;
    } else {
      throw std::invalid_argument("flux must be 'local' or 'global'");
    }
  }
  if (detect_every_stage) c.limiter.detect_every_stage = *detect_every_stage;
  if (trace_fallback) c.limiter.trace_fallback = *trace_fallback;
  if (workers) c.workers = *workers;
  c.validate();
  return c;
}

namespace {

template <class T>
void put(nlohmann::json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <class T>
void get(const nlohmann::json& j, const char* key, std::optional<T>& v) {
  if (j.contains(key) && !j.at(key).is_null()) v = j.at(key).get<T>();
}

}  // namespace

std::string RunSpec::to_json() const {
  nlohmann::json j;
  j["problem"] = problem;
  put(j, "order", order);
  put(j, "nsv_x", nsv_x);
  put(j, "nsv_y", nsv_y);
  put(j, "tvb_m", tvb_m);
  put(j, "tvb_length", tvb_length);
  put(j, "epsilon", epsilon);
  put(j, "cfl", cfl);
  put(j, "t_final", t_final);
  put(j, "limiter", limiter);
  put(j, "characteristic", characteristic);
  put(j, "flux", flux);
  put(j, "detect_every_stage", detect_every_stage);
  put(j, "trace_fallback", trace_fallback);
  put(j, "workers", workers);
  return j.dump(2);
}

RunSpec RunSpec::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  RunSpec s;
  s.problem = j.at("problem").get<std::string>();
  get(j, "order", s.order);
  get(j, "nsv_x", s.nsv_x);
  get(j, "nsv_y", s.nsv_y);
  get(j, "tvb_m", s.tvb_m);
  get(j, "tvb_length", s.tvb_length);
  get(j, "epsilon", s.epsilon);
  get(j, "cfl", s.cfl);
  get(j, "t_final", s.t_final);
  get(j, "limiter", s.limiter);
  get(j, "characteristic", s.characteristic);
  get(j, "flux", s.flux);
  get(j, "detect_every_stage", s.detect_every_stage);
  get(j, "trace_fallback", s.trace_fallback);
  get(j, "workers", s.workers);
  return s;
}

}  // namespace svweno
