#include "idpdg/timeloop.hpp"

#include "idpdg/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace idpdg {

SspTableau ssp_tableau(int order) {
  switch (order) {
    case 1: return {1, {0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
    case 2: return {2, {0.0, 0.5, 0.0}, {1.0, 0.5, 0.0}};
    case 3: return {3, {0.0, 0.75, 1.0 / 3.0}, {1.0, 0.25, 2.0 / 3.0}};
  }
  throw std::invalid_argument("SSP-RK order must be 1, 2 or 3, got " + std::to_string(order));
}

void Verification::merge(const Verification& o) {
  elements_checked += o.elements_checked;
  theorem_violations += o.theorem_violations;
  min_theorem_slack = std::min(min_theorem_slack, o.min_theorem_slack);
  max_identity_error = std::max(max_identity_error, o.max_identity_error);
  max_mean_error = std::max(max_mean_error, o.max_mean_error);
  max_limiter_drift = std::max(max_limiter_drift, o.max_limiter_drift);
  max_pseudo_residual = std::max(max_pseudo_residual, o.max_pseudo_residual);
  min_domination = std::min(min_domination, o.min_domination);
  post_limit_violations += o.post_limit_violations;
  min_post_limit_slack = std::min(min_post_limit_slack, o.min_post_limit_slack);
  inadmissible_averages += o.inadmissible_averages;
}

bool Verification::clean() const {
  return theorem_violations == 0 && post_limit_violations == 0 && inadmissible_averages == 0 &&
         max_identity_error <= 1e-12 && max_pseudo_residual < 1e-10 && min_domination >= 1.0;
}

long Diagnostics::pseudo_solves() const {
  long n = 0;
  for (const auto& s : steps) n += s.pseudo_solves;
  return n;
}

long Diagnostics::pseudo_iterations() const {
  long n = 0;
  for (const auto& s : steps) n += s.pseudo_iterations;
  return n;
}

double Diagnostics::iteration_mean() const {
  const long n = pseudo_solves();
  return n ? double(pseudo_iterations()) / double(n) : 0.0;
}

long Diagnostics::activations() const {
  long n = 0;
  for (const auto& s : steps) n += s.activations;
  return n;
}

template <int Dim>
TimeIntegrator<Dim>::TimeIntegrator(const SchemeOperator<Dim>& op, LimiterSettings limiter, TimeSettings time)
    : op_(op), limiter_(limiter), time_(time) {
  ssp_tableau(time_.rk_order);
  if (!(time_.cfl > 0.0 && time_.cfl <= 1.0)) throw std::invalid_argument("cfl fraction must lie in (0, 1]");
  if (!(limiter_.floors.rho > 0.0 && limiter_.floors.rho_e > 0.0))
    throw std::invalid_argument("positivity floors must be positive");
  limiter_.pseudo.estimate = op.settings().wave_speed;
  const auto idx = modal_indices<Dim>(op.settings().degree);
  for (int j = 0; j < static_cast<int>(idx.size()); ++j)
    if (*std::max_element(idx[j].begin(), idx[j].end()) == op.settings().degree) top_modes_.push_back(j);
}

template <int Dim>
StagePreparation<Dim> TimeIntegrator<Dim>::prepare(const Field<Dim>& U) const {
  const int ne = op_.num_elements();
  if (ne == 0) throw std::invalid_argument("empty mesh");
  const int nf = op_.face_points_per_element();
  const auto& gas = op_.settings().gas;
  StagePreparation<Dim> prep;
  prep.traces = op_.traces(U);
  prep.pseudo.resize(ne);
  prep.step_factor.resize(ne);
  std::vector<double> residual(ne, 0.0), domination(ne, std::numeric_limits<double>::infinity());
  const bool limiting = limiter_.mode != LimiterMode::None;
  const auto& tr = prep.traces;

  parallel_for(ne, [&](int e) {
    const auto& g = op_.geometry(e);
    const StateBlock<Dim> minus = tr.minus.middleCols(e * nf, nf);
    const Eigen::VectorXd speed = tr.speed.segment(e * nf, nf);
    const Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(g.face_weight.data(), nf);
    const Eigen::VectorXd& beta = op_.rule(e).beta;
    if (!limiting) {
      prep.step_factor[e] = element_step_factor(s, beta, Eigen::VectorXd(), speed);
      return;
    }
    const StateBlock<Dim> plus = tr.plus.middleCols(e * nf, nf);
    const Eigen::VectorXd wave = interface_wave_speeds<Dim>(minus, plus, g.normals, gas, limiter_.pseudo.estimate);
    auto& pe = prep.pseudo[e];
    pe = limiter_.mode == LimiterMode::IDPloc
             ? pseudo_equilibrium_local<Dim>(minus, wave, g.normals, s, gas, limiter_.pseudo)
             : pseudo_equilibrium_global<Dim>(minus, wave, g.normals, s, gas, limiter_.pseudo);
    prep.step_factor[e] = element_step_factor(s, beta, pe.lambda, speed);
    if (limiter_.verify) {
      residual[e] = flux_balance_residual<Dim>(pe, minus, g.normals, s, gas);
      domination[e] = wave_speed_domination<Dim>(pe, minus, g.normals, gas, limiter_.pseudo.estimate);
    }
  });
  prep.max_step_factor = *std::max_element(prep.step_factor.begin(), prep.step_factor.end());
  prep.max_pseudo_residual = *std::max_element(residual.begin(), residual.end());
  prep.min_domination = *std::min_element(domination.begin(), domination.end());
  return prep;
}

template <int Dim>
bool TimeIntegrator<Dim>::is_smooth(const Field<Dim>& U, int e) const {
  const double s = smoothness_indicator(op_.density_modes(U, e), top_modes_);
  return s < smoothness_threshold(op_.settings().degree, limiter_.smoothness_scale);
}

template <int Dim>
void TimeIntegrator<Dim>::limit_element(const Field<Dim>& U, Field<Dim>& Unew, const TraceData<Dim>& tr,
                                        const PseudoEquilibrium<Dim>& pe, double dt, int e, double& theta,
                                        Verification& ver) const {
  const int nf = op_.face_points_per_element();
  const auto& g = op_.geometry(e);
  const auto& rule = op_.rule(e);
  const Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(g.face_weight.data(), nf);
  const StateBlock<Dim> minus = tr.minus.middleCols(e * nf, nf);
  const StateBlock<Dim> flux = tr.flux.middleCols(e * nf, nf);

  const State<Dim> avg = op_.mean(Unew, e);
  if (!is_admissible<double, Dim>(avg)) {
    ++ver.inadmissible_averages;
    throw IdpViolation("IDP violation: inadmissible cell average " + describe<Dim>(avg) + " in element " +
                           std::to_string(e),
                       e);
  }
  const StateBlock<Dim> candidates =
      candidate_updates<Dim>(minus, flux, pe, g.normals, s, rule.beta, dt, op_.settings().gas, e);
  const Field<Dim> old_volume = op_.volume_states(U, e);
  const Bounds theorem = compute_bounds<Dim>(old_volume, candidates);
  const double avg_rho_e = internal_energy_density<double, Dim>(avg);

  if (limiter_.verify) {
    ++ver.elements_checked;
    const double slack = std::min((avg(0) - theorem.rho) / std::max(1.0, std::abs(theorem.rho)),
                                  (avg_rho_e - theorem.rho_e) / std::max(1.0, std::abs(theorem.rho_e)));
    ver.min_theorem_slack = std::min(ver.min_theorem_slack, slack);
    if (slack < -1e-12) ++ver.theorem_violations;
    const State<Dim> direct = op_.mean(U, e) - dt * (flux * s);
    const State<Dim> recon = old_volume * rule.nu + candidates * rule.beta;
    const double scale = std::max(1.0, direct.norm());
    ver.max_identity_error = std::max(ver.max_identity_error, (recon - direct).norm() / scale);
    ver.max_mean_error = std::max(ver.max_mean_error, (avg - direct).norm() / scale);
  }

  Bounds bounds{std::max(limiter_.floors.rho, limiter_.mean_fraction * avg(0)),
                std::max(limiter_.floors.rho_e, limiter_.mean_fraction * avg_rho_e)};
  const bool idp = limiter_.mode == LimiterMode::IDP || limiter_.mode == LimiterMode::IDPloc;
  if (idp && !(limiter_.smoothness_gate && is_smooth(Unew, e))) {
    bounds.rho = std::max(bounds.rho, theorem.rho);
    bounds.rho_e = std::max(bounds.rho_e, theorem.rho_e);
  }
  bounds.rho = std::min(bounds.rho, avg(0));
  bounds.rho_e = std::min(bounds.rho_e, avg_rho_e);

  theta = limiter_theta<Dim>(op_.check_states(Unew, e), avg, bounds);
  if (theta > 0.0) op_.apply_scaling(Unew, e, theta, avg);

  if (limiter_.verify) {
    const double slack = bound_slack<Dim>(op_.check_states(Unew, e), bounds);
    ver.min_post_limit_slack = std::min(ver.min_post_limit_slack, slack);
    if (slack < -1e-12) ++ver.post_limit_violations;
    ver.max_limiter_drift =
        std::max(ver.max_limiter_drift, (op_.mean(Unew, e) - avg).norm() / std::max(1.0, avg.norm()));
  }
}

template <int Dim>
Field<Dim> TimeIntegrator<Dim>::euler_step(const Field<Dim>& U, const StagePreparation<Dim>& prep, double dt,
                                           StepStats& stats, Verification& ver) const {
  const int ne = op_.num_elements();
  Field<Dim> Unew = U + dt * op_.time_derivative(U, prep.traces);
  if (limiter_.mode == LimiterMode::None) {
    for (int e = 0; e < ne; ++e) {
      const Field<Dim> pts = op_.check_states(Unew, e);
      for (int i = 0; i < pts.cols(); ++i) require_admissible<double, Dim>(pts.col(i), e);
    }
    return Unew;
  }
  std::vector<double> theta(ne, 0.0);
  std::vector<Verification> local(limiter_.verify ? ne : 0);
  Verification scratch;
  parallel_for(ne, [&](int e) {
    Verification& v = limiter_.verify ? local[e] : scratch;
    limit_element(U, Unew, prep.traces, prep.pseudo[e], dt, e, theta[e], v);
  });
  for (const auto& v : local) ver.merge(v);
  if (limiter_.verify) {
    ver.max_pseudo_residual = std::max(ver.max_pseudo_residual, prep.max_pseudo_residual);
    ver.min_domination = std::min(ver.min_domination, prep.min_domination);
  }

  double sum = stats.theta_mean * double(stats.activations);
  for (int e = 0; e < ne; ++e) {
    stats.pseudo_iterations += prep.pseudo[e].iterations;
    if (theta[e] > 0.0) {
      ++stats.activations;
      sum += theta[e];
      stats.theta_max = std::max(stats.theta_max, theta[e]);
    }
  }
  stats.pseudo_solves += ne;
  stats.theta_mean = stats.activations ? sum / double(stats.activations) : 0.0;
  stats.iteration_mean = double(stats.pseudo_iterations) / double(stats.pseudo_solves);
  return Unew;
}

template <int Dim>
Field<Dim> TimeIntegrator<Dim>::ssp_step(const Field<Dim>& U, const StagePreparation<Dim>& prep, double dt,
                                         StepStats& stats, Verification& ver) const {
  const SspTableau tab = ssp_tableau(time_.rk_order);
  Field<Dim> stage = euler_step(U, prep, dt, stats, ver);
  for (int i = 1; i < tab.stages; ++i) {
    const StagePreparation<Dim> p = prepare(stage);
    if (dt > p.max_dt() * (1.0 + 1e-12))
      throw StepRejected("stage " + std::to_string(i + 1) + " needs dt <= " + std::to_string(p.max_dt()));
    stage = tab.a[i] * U + tab.b[i] * euler_step(stage, p, dt, stats, ver);
  }
  return stage;
}

namespace {

template <int Dim>
void track_density(const SchemeOperator<Dim>& op, const Field<Dim>& U, Diagnostics& d) {
  for (int e = 0; e < op.num_elements(); ++e) {
    const Field<Dim> pts = op.check_states(U, e);
    d.min_density = std::min(d.min_density, pts.row(0).minCoeff());
    d.max_density = std::max(d.max_density, pts.row(0).maxCoeff());
  }
}

}  // namespace

template <int Dim>
RunResult<Dim> run(const TimeIntegrator<Dim>& integrator, Field<Dim> U0, const StepObserver<Dim>& observer) {
  const auto& op = integrator.op();
  const auto& ts = integrator.time();
  RunResult<Dim> result;
  result.U = std::move(U0);
  auto& diag = result.diagnostics;
  diag.totals.push_back(op.total(result.U));
  track_density(op, result.U, diag);
  if (observer) observer(result.U, 0.0, 0);

  double t = 0.0;
  while (t < ts.t_final && (ts.max_steps < 0 || result.steps < ts.max_steps)) {
    const StagePreparation<Dim> prep = integrator.prepare(result.U);
    double dt = ts.cfl * prep.max_dt();
    bool last = false;
    if (t + dt >= ts.t_final) {
      dt = ts.t_final - t;
      last = true;
    }
    StepStats stats;
    Verification ver;
    Field<Dim> next;
    for (int attempt = 0;; ++attempt) {
      stats = StepStats{};
      ver = Verification{};
      try {
        next = integrator.ssp_step(result.U, prep, dt, stats, ver);
        stats.retries = attempt;
        break;
      } catch (const IdpViolation&) {
        if (attempt >= ts.max_retries) throw;
      } catch (const StepRejected&) {
        if (attempt >= ts.max_retries) throw;
      }
      dt *= 0.5;
      last = false;
    }
    result.U = std::move(next);
    t = last ? ts.t_final : t + dt;
    ++result.steps;
    stats.step = static_cast<int>(result.steps);
    stats.time = t;
    stats.dt = dt;
    diag.steps.push_back(stats);
    diag.verification.merge(ver);
    diag.totals.push_back(op.total(result.U));
    track_density(op, result.U, diag);
    if (observer) observer(result.U, t, result.steps);
  }
  result.time = t;
  return result;
}

template class TimeIntegrator<1>;
template class TimeIntegrator<2>;
template RunResult<1> run<1>(const TimeIntegrator<1>&, Field<1>, const StepObserver<1>&);
template RunResult<2> run<2>(const TimeIntegrator<2>&, Field<2>, const StepObserver<2>&);

}  // namespace idpdg
