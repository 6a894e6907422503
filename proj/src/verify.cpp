#include "idpdg/verify.hpp"

#include "idpdg/cases.hpp"

#include <cstdio>
#include <stdexcept>

namespace idpdg {

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names = {"closure", "quadrature", "pseudo", "idp", "freestream", "conservation"};
  return names;
}

namespace {

const SchemeKind kSchemes[] = {SchemeKind::DGSEM, SchemeKind::ModalDG};

Mesh<2> curved_mesh(int n, double distortion, int mapping_degree) {
  QuadMeshSpec spec;
  spec.nx = spec.ny = n;
  spec.distortion = distortion;
  spec.mapping_degree = mapping_degree;
  spec.tags = {BoundaryTag::Periodic, BoundaryTag::Periodic, BoundaryTag::Periodic, BoundaryTag::Periodic};
  return build_quad_mesh(spec);
}

void closure_suite(Report& r) {
  for (SchemeKind scheme : kSchemes) {
    SchemeSettings s;
    s.scheme = scheme;
    s.degree = 3;
    const SchemeOperator<2> op(curved_mesh(4, 0.1, 2), s);
    double worst = 0.0;
    for (int e = 0; e < op.num_elements(); ++e) worst = std::max(worst, verify_closure(op.geometry(e)));
    r.below("closure." + to_string(scheme) + ".max_residual", worst, 1e-12);
  }
}

void quadrature_suite(Report& r) {
  for (int p = 1; p <= 6; ++p) {
    for (bool curved : {false, true}) {
      SchemeSettings s;
      s.scheme = SchemeKind::ModalDG;
      s.degree = p;
      const SchemeOperator<2> op(curved_mesh(2, curved ? 0.1 : 0.0, curved ? std::min(p, 2) : 1), s);
      double exact = 0.0, sum = 0.0, eps = 1e300;
      for (int e = 0; e < op.num_elements(); ++e) {
        const auto& rule = op.rule(e);
        const auto& b = op.basis(e);
        const Eigen::VectorXd avg = b.volume_values.transpose() * rule.nu + b.face_values.transpose() * rule.beta;
        Eigen::VectorXd target = Eigen::VectorXd::Zero(avg.size());
        target(0) = 1.0;
        exact = std::max(exact, (avg - target).cwiseAbs().maxCoeff());
        sum = std::max(sum, std::abs(rule.nu.sum() + rule.beta.sum() - 1.0));
        eps = std::min(eps, rule.epsilon);
      }
      const std::string tag = "quadrature.p" + std::to_string(p) + (curved ? ".curved" : ".straight");
      r.below(tag + ".exactness", exact, 1e-11);
      r.below(tag + ".weight_sum", sum, 1e-13);
      r.at_least(tag + ".epsilon_positive", eps > 0.0 ? 1.0 : 0.0, 1.0);
    }
  }
}

void pseudo_suite(Report& r) {
  const GasModel<double> gas{};
  StateBlock<1> minus(3, 2);
  minus.col(0) = conserved<1>(1.0, Vec<1>(0.0), 1.0);
  minus.col(1) = conserved<1>(0.125, Vec<1>(0.0), 0.1);
  const std::vector<Vec<1>> normals = {Vec<1>(-1.0), Vec<1>(1.0)};
  const Eigen::VectorXd s = Eigen::VectorXd::Constant(2, 10.0);
  StateBlock<1> plus(3, 2);
  plus.col(0) = minus.col(1);
  plus.col(1) = minus.col(0);
  const Eigen::VectorXd speeds = interface_wave_speeds<1>(minus, plus, normals, gas, WaveSpeedEstimate::Default);
  const PseudoSettings cfg{};
  const auto g = pseudo_equilibrium_global<1>(minus, speeds, normals, s, gas, cfg);
  const auto l = pseudo_equilibrium_local<1>(minus, speeds, normals, s, gas, cfg);
  r.below("pseudo.global.residual", flux_balance_residual<1>(g, minus, normals, s, gas), 1e-10);
  r.below("pseudo.global.iterations", g.iterations, 3.5);
  r.at_least("pseudo.global.domination", wave_speed_domination<1>(g, minus, normals, gas, cfg.estimate), 1.0);
  r.below("pseudo.local.residual", flux_balance_residual<1>(l, minus, normals, s, gas), 1e-10);
  r.below("pseudo.local.iterations", l.iterations, 5.5);
  r.at_least("pseudo.local.domination", wave_speed_domination<1>(l, minus, normals, gas, cfg.estimate), 1.0);
}

void idp_suite(Report& r) {
  for (const char* name : {"sod", "lax", "toro4"}) {
    for (LimiterMode mode : {LimiterMode::POS, LimiterMode::IDP, LimiterMode::IDPloc}) {
      CaseConfig cfg = defaults_for(name);
      cfg.elements = 50;
      cfg.limiter = mode;
      cfg.verify = true;
      const auto run = run_case<1>(cfg);
      const auto& v = run.result.diagnostics.verification;
      const std::string tag = std::string("idp.") + name + "." + to_string(mode);
      r.below(tag + ".theorem_violations", double(v.theorem_violations), 0.5);
      r.at_least(tag + ".theorem_slack", v.min_theorem_slack, -1e-12);
      r.below(tag + ".identity_error", v.max_identity_error, 1e-12);
      r.below(tag + ".pseudo_residual", v.max_pseudo_residual, 1e-10);
      r.at_least(tag + ".domination", v.min_domination, 1.0);
      r.at_least(tag + ".min_density", run.result.diagnostics.min_density, 1e-300);
    }
  }
}

void freestream_suite(Report& r) {
  for (SchemeKind scheme : kSchemes) {
    CaseConfig cfg = defaults_for("freestream");
    cfg.scheme = scheme;
    const auto run = run_case<2>(cfg);
    const State<2> u = run.setup.initial(Vec<2>::Zero());
    double drift = 0.0;
    for (int e = 0; e < run.op->num_elements(); ++e) {
      const Field<2> pts = run.op->check_states(run.result.U, e);
      drift = std::max(drift, (pts.colwise() - u).cwiseAbs().maxCoeff());
    }
    r.below("freestream." + to_string(scheme) + ".max_drift", drift, 1e-11);
  }
}

void conservation_suite(Report& r) {
  for (SchemeKind scheme : kSchemes) {
    for (LimiterMode mode : {LimiterMode::None, LimiterMode::IDP}) {
      CaseConfig cfg = defaults_for("smooth");
      cfg.scheme = scheme;
      cfg.limiter = mode;
      cfg.max_steps = 100;
      cfg.t_final = 1e9;
      const auto run = run_case<1>(cfg);
      const auto& totals = run.result.diagnostics.totals;
      double drift = 0.0;
      for (const auto& t : totals)
        drift = std::max(drift, ((t - totals.front()).cwiseAbs().array() / totals.front().cwiseAbs().array()).maxCoeff());
      r.below("conservation." + to_string(scheme) + "." + to_string(mode) + ".relative_drift", drift, 1e-11);
    }
  }
}

}  // namespace

Report run_verify(const std::string& suite) {
  Report r;
  const bool all = suite == "all";
  bool known = all;
  auto want = [&](const char* name) {
    known |= suite == name;
    return all || suite == name;
  };
  if (want("closure")) closure_suite(r);
  if (want("quadrature")) quadrature_suite(r);
  if (want("pseudo")) pseudo_suite(r);
  if (want("idp")) idp_suite(r);
  if (want("freestream")) freestream_suite(r);
  if (want("conservation")) conservation_suite(r);
  if (!known) throw std::invalid_argument("unknown verify suite '" + suite + "'");
  return r;
}

void print_report(std::ostream& os, const Report& report) {
  char buf[256];
  for (const auto& c : report.checks) {
    std::snprintf(buf, sizeof buf, "%-52s %14.6e %12.3e %s\n", c.name.c_str(), c.value, c.threshold,
                  c.pass ? "PASS" : "FAIL");
    os << buf;
  }
}

}  // namespace idpdg
