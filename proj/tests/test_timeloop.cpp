#include "idpdg/cases.hpp"

#include <doctest.h>

using namespace idpdg;

namespace {

// Shu-Osher rows applied to u' = z u with unit step.
double ssp_linear(const SspTableau& t, double z) {
  double u = 1.0;
  for (int i = 0; i < t.stages; ++i) u = t.a[i] * 1.0 + t.b[i] * (u + z * u);
  return u;
}

CaseConfig sod_config() {
  CaseConfig cfg = defaults_for("sod");
  cfg.verify = true;
  return cfg;
}

}  // namespace

TEST_CASE("ssp tableaux are convex and have the right order") {
  for (int order = 1; order <= 3; ++order) {
    const SspTableau t = ssp_tableau(order);
    CHECK(t.stages == order);
    for (int i = 0; i < t.stages; ++i) {
      CHECK(t.a[i] >= 0.0);
      CHECK(t.b[i] >= 0.0);
      CHECK(t.a[i] + t.b[i] == doctest::Approx(1.0).epsilon(1e-15));
    }
  }
  for (double z : {-0.3, 0.1, 0.7}) {
    CHECK(ssp_linear(ssp_tableau(1), z) == doctest::Approx(1 + z).epsilon(1e-15));
    CHECK(ssp_linear(ssp_tableau(2), z) == doctest::Approx(1 + z + z * z / 2).epsilon(1e-15));
    CHECK(ssp_linear(ssp_tableau(3), z) == doctest::Approx(1 + z + z * z / 2 + z * z * z / 6).epsilon(1e-15));
  }
  CHECK_THROWS(ssp_tableau(4));
}

TEST_CASE("euler step") {
  const CaseConfig cfg = sod_config();
  const auto setup = setup_1d(cfg);
  const SchemeOperator<1> op(setup.mesh, scheme_settings(cfg), setup.boundary);
  const TimeIntegrator<1> ti(op, limiter_settings(cfg), time_settings(cfg));
  const Field<1> U = op.project(setup.initial);
  const auto prep = ti.prepare(U);

  SUBCASE("zero step is the identity") {
    StepStats stats;
    Verification ver;
    const Field<1> V = ti.euler_step(U, prep, 0.0, stats, ver);
    CHECK((V - U).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("cell averages follow the face-flux update") {
    StepStats stats;
    Verification ver;
    const double dt = cfg.cfl * prep.max_dt();
    const Field<1> V = ti.euler_step(U, prep, dt, stats, ver);
    const int nf = op.face_points_per_element();
    double worst = 0.0;
    for (int e = 0; e < op.num_elements(); ++e) {
      State<1> sum = State<1>::Zero();
      for (int k = 0; k < nf; ++k) sum += op.geometry(e).face_weight[k] * prep.traces.flux.col(e * nf + k);
      worst = std::max(worst, (op.mean(V, e) - op.mean(U, e) + dt * sum).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-12);
    CHECK(ver.theorem_violations == 0);
    CHECK(ver.max_identity_error < 1e-12);
    CHECK(ver.post_limit_violations == 0);
    CHECK(ver.max_limiter_drift < 1e-13);
  }
  SUBCASE("first-order ssp is the euler step") {
    TimeSettings ts = time_settings(cfg);
    ts.rk_order = 1;
    const TimeIntegrator<1> ti1(op, limiter_settings(cfg), ts);
    StepStats s1, s2;
    Verification v1, v2;
    const double dt = 0.5 * prep.max_dt();
    CHECK((ti1.ssp_step(U, prep, dt, s1, v1) - ti1.euler_step(U, prep, dt, s2, v2)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("an oversized step is refused so the loop can retry") {
    StepStats stats;
    Verification ver;
    bool refused = false;
    try {
      ti.ssp_step(U, prep, 4.0 * prep.max_dt(), stats, ver);
    } catch (const StepRejected&) {
      refused = true;
    } catch (const IdpViolation&) {
      refused = true;
    }
    CHECK(refused);
  }
}

TEST_CASE("uniform flow on a curved mesh is preserved") {
  CaseConfig cfg = defaults_for("freestream");
  cfg.max_steps = 10;
  for (SchemeKind scheme : {SchemeKind::DGSEM, SchemeKind::ModalDG}) {
    cfg.scheme = scheme;
    const auto run = run_case<2>(cfg);
    const State<2> u = run.setup.initial(Vec<2>::Zero());
    double drift = 0.0;
    for (int e = 0; e < run.op->num_elements(); ++e)
      drift = std::max(drift, (run.op->check_states(run.result.U, e).colwise() - u).cwiseAbs().maxCoeff());
    CHECK(drift < 1e-12);
    CHECK(run.result.diagnostics.activations() == 0);
    CHECK(run.result.diagnostics.iteration_mean() == doctest::Approx(1.0));
  }
}

TEST_CASE("zero end time echoes the initial state") {
  CaseConfig cfg = defaults_for("sod");
  cfg.t_final = 0.0;
  const auto run = run_case<1>(cfg);
  CHECK(run.result.steps == 0);
  CHECK((run.result.U - run.op->project(run.setup.initial)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sod to t = 0.2 stays positive and hits the end time") {
  const auto run = run_case<1>(sod_config());
  CHECK(run.result.time == 0.2);
  CHECK(run.result.diagnostics.min_density > 0.0);
  CHECK(run.result.diagnostics.verification.clean());
  CHECK(run.result.diagnostics.steps.size() == static_cast<std::size_t>(run.result.steps));
  CHECK(run.result.diagnostics.iteration_mean() < 2.0);
}

TEST_CASE("periodic smooth flow conserves totals") {
  for (LimiterMode mode : {LimiterMode::None, LimiterMode::IDP}) {
    CaseConfig cfg = defaults_for("smooth");
    cfg.limiter = mode;
    cfg.max_steps = 100;
    const auto run = run_case<1>(cfg);
    const auto& totals = run.result.diagnostics.totals;
    REQUIRE(totals.size() == 101);
    for (const auto& t : totals)
      CHECK(((t - totals.front()).cwiseAbs().array() / totals.front().cwiseAbs().array()).maxCoeff() < 1e-11);
  }
}

TEST_CASE("positivity mode keeps traces away from vacuum") {
  // with the bare 1e-12 floor a trace of this run sits at rho = 1e-12 and the
  // step collapses to ~1e-10
  CaseConfig cfg = defaults_for("lax");
  cfg.scheme = SchemeKind::ModalDG;
  cfg.limiter = LimiterMode::POS;
  cfg.max_steps = 400;
  const auto run = run_case<1>(cfg);
  const auto& steps = run.result.diagnostics.steps;
  double dt_min = 1.0;
  for (const auto& s : steps) dt_min = std::min(dt_min, s.dt);
  CHECK(dt_min > 1e-3 * steps.front().dt);
  CHECK(run.result.diagnostics.min_density >= 0.0);
}
