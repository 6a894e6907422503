#include "idpdg/cases.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

namespace idpdg {

RiemannData riemann_data(const std::string& name) {
  auto w = [](double rho, double u, double p) { return Primitive1D{rho, Vec<1>(u), p}; };
  if (name == "sod") return {w(1.0, 0.0, 1.0), w(0.125, 0.0, 0.1), 0.0};
  if (name == "lax") return {w(0.445, 0.698, 3.528), w(0.5, 0.0, 0.571), 0.0};
  if (name == "toro4") return {w(5.99924, 19.5975, 460.894), w(5.99242, -6.19633, 46.0950), -0.1};
  throw ConfigError("case.name: '" + name + "' is not a Riemann problem");
}

Primitive2D dmr_pre_shock() { return Primitive2D{1.4, Vec<2>::Zero(), 1.0}; }

State<1> density_wave(double x, double t, double x_min, double length) {
  const double rho = 1.0 + 0.2 * std::sin(2.0 * std::numbers::pi * (x - x_min - t) / length);
  return conserved<1>(rho, Vec<1>(1.0), 1.0);
}

namespace {

template <int Dim>
Mesh<Dim> read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("mesh.file: cannot open '" + path + "'");
  return read_mesh<Dim>(in);
}

}  // namespace

CaseSetup<1> setup_1d(const CaseConfig& cfg) {
  CaseSetup<1> c;
  const GasModel<double> gas{};
  if (is_riemann_case(cfg.name)) {
    const RiemannData rp = riemann_data(cfg.name);
    c.mesh = cfg.mesh_file.empty() ? build_segment_mesh(cfg.x_min, cfg.x_max, cfg.elements)
                                   : read_mesh_file<1>(cfg.mesh_file);
    const State<1> uL = to_conserved<double, 1>(rp.left, gas), uR = to_conserved<double, 1>(rp.right, gas);
    const double x0 = rp.x0;
    c.initial = [=](const Vec<1>& x) { return x(0) < x0 ? uL : uR; };
    c.exact = [=](const Vec<1>& x, double t) {
      if (t <= 0.0) return x(0) < x0 ? uL : uR;
      return exact_riemann_solution(uL, uR, (x(0) - x0) / t, gas);
    };
  } else if (cfg.name == "smooth") {
    c.mesh = cfg.mesh_file.empty()
                 ? build_segment_mesh(cfg.x_min, cfg.x_max, cfg.elements, BoundaryTag::Periodic, BoundaryTag::Periodic)
                 : read_mesh_file<1>(cfg.mesh_file);
    const double a = cfg.x_min, L = cfg.x_max - cfg.x_min;
    c.initial = [=](const Vec<1>& x) { return density_wave(x(0), 0.0, a, L); };
    c.exact = [=](const Vec<1>& x, double t) { return density_wave(x(0), t, a, L); };
  } else {
    throw ConfigError("case.name: '" + cfg.name + "' is not a 1D case");
  }
  return c;
}

CaseSetup<2> setup_2d(const CaseConfig& cfg) {
  CaseSetup<2> c;
  const GasModel<double> gas{};
  if (cfg.name == "dmr") {
    if (cfg.mesh_file.empty()) {
      RampMeshSpec spec;
      spec.nx = cfg.nx;
      spec.ny = cfg.ny;
      spec.x_min = cfg.x_min;
      spec.x_max = cfg.x_max;
      spec.mapping_degree = cfg.mapping_degree;
      c.mesh = build_ramp_mesh(spec);
    } else {
      c.mesh = read_mesh_file<2>(cfg.mesh_file);
    }
    const Primitive2D pre = dmr_pre_shock();
    const Primitive1D pre1{pre.rho, Vec<1>(pre.velocity(0)), pre.pressure};
    const Primitive1D post1 = post_shock_state(pre1, kDmrMach, gas);
    const State<2> upre = to_conserved<double, 2>(pre, gas);
    const State<2> upost = conserved<2>(post1.rho, Vec<2>(post1.velocity(0), 0.0), post1.pressure, gas);
    const double speed = shock_speed(pre1, kDmrMach, gas);
    c.boundary.inflow = upost;
    c.initial = [=](const Vec<2>& x) { return x(0) < 0.0 ? upost : upre; };
    // Exact only ahead of the reflected structure: a planar shock at x = s t.
    c.exact = [=](const Vec<2>& x, double t) { return x(0) < speed * t ? upost : upre; };
  } else if (cfg.name == "freestream") {
    if (cfg.mesh_file.empty()) {
      QuadMeshSpec spec;
      spec.nx = cfg.nx;
      spec.ny = cfg.ny;
      spec.lower = Vec<2>(cfg.x_min, cfg.x_min);
      spec.upper = Vec<2>(cfg.x_max, cfg.x_max);
      spec.distortion = cfg.distortion;
      spec.mapping_degree = cfg.mapping_degree;
      spec.tags = {BoundaryTag::Periodic, BoundaryTag::Periodic, BoundaryTag::Periodic, BoundaryTag::Periodic};
      c.mesh = build_quad_mesh(spec);
    } else {
      c.mesh = read_mesh_file<2>(cfg.mesh_file);
    }
    const State<2> u = conserved<2>(1.0, Vec<2>(0.5, 0.25), 1.0, gas);
    c.initial = [=](const Vec<2>&) { return u; };
    c.exact = [=](const Vec<2>&, double) { return u; };
  } else {
    throw ConfigError("case.name: '" + cfg.name + "' is not a 2D case");
  }
  return c;
}

SchemeSettings scheme_settings(const CaseConfig& cfg) {
  SchemeSettings s;
  s.scheme = cfg.scheme;
  s.degree = cfg.degree;
  s.interface_flux = cfg.interface_flux;
  s.wave_speed = cfg.wave_speed;
  return s;
}

LimiterSettings limiter_settings(const CaseConfig& cfg) {
  LimiterSettings l;
  l.mode = cfg.limiter;
  l.floors = Floors{cfg.rho_min, cfg.rho_e_min};
  l.mean_fraction = cfg.mean_fraction;
  l.smoothness_gate = cfg.smoothness_gate;
  l.smoothness_scale = cfg.smoothness_scale;
  l.pseudo.tol = cfg.pseudo_tol;
  l.pseudo.max_iter = cfg.pseudo_max_iter;
  l.verify = cfg.verify;
  return l;
}

TimeSettings time_settings(const CaseConfig& cfg) {
  TimeSettings t;
  t.rk_order = cfg.rk_order;
  t.cfl = cfg.cfl;
  t.t_final = cfg.t_final;
  t.max_steps = cfg.max_steps;
  return t;
}

template <int Dim>
CaseRun<Dim> run_case(const CaseConfig& cfg, const StepObserver<Dim>& observer) {
  CaseRun<Dim> r;
  if constexpr (Dim == 1)
    r.setup = setup_1d(cfg);
  else
    r.setup = setup_2d(cfg);
  r.op = std::make_unique<SchemeOperator<Dim>>(r.setup.mesh, scheme_settings(cfg), r.setup.boundary);
  const TimeIntegrator<Dim> integrator(*r.op, limiter_settings(cfg), time_settings(cfg));
  r.result = run(integrator, r.op->project(r.setup.initial), observer);
  return r;
}

template CaseRun<1> run_case<1>(const CaseConfig&, const StepObserver<1>&);
template CaseRun<2> run_case<2>(const CaseConfig&, const StepObserver<2>&);

}  // namespace idpdg
