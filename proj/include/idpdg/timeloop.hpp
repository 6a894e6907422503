#pragma once

// SSP Runge-Kutta time stepping with the IDP pipeline after every forward
// Euler stage: pseudo-equilibria and the step bound from the stage traces,
// candidate states and bounds, then the scaling limiter.

#include "idpdg/discretization.hpp"
#include "idpdg/idp.hpp"

#include <array>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace idpdg {

struct LimiterSettings {
  LimiterMode mode{LimiterMode::IDP};
  Floors floors{};
  // floors are raised to this fraction of the element mean of rho and rho e
  double mean_fraction{1e-4};
  bool smoothness_gate{true};
  double smoothness_scale{6.0};
  PseudoSettings pseudo{};
  bool verify{false};  // evaluate the per-step property checks below
};

/// A later SSP stage found its traces need a smaller step than the one in use.
class StepRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shu-Osher rows: u^(i) = a_i u^n + b_i E(u^(i-1)).
struct SspTableau {
  int stages;
  std::array<double, 3> a;
  std::array<double, 3> b;
};

SspTableau ssp_tableau(int order);

/// Worst values of the property checks seen so far.
struct Verification {
  long elements_checked{0};
  long theorem_violations{0};       // psi(<u^{n+1}>) < m (theorem bound, no floors)
  double min_theorem_slack{std::numeric_limits<double>::infinity()};
  double max_identity_error{0.0};   // convex reconstruction vs direct average update
  double max_mean_error{0.0};       // direct average update vs mean of the new field
  double max_limiter_drift{0.0};    // mean change caused by the limiter
  double max_pseudo_residual{0.0};
  double min_domination{std::numeric_limits<double>::infinity()};
  long post_limit_violations{0};
  double min_post_limit_slack{std::numeric_limits<double>::infinity()};
  long inadmissible_averages{0};

  void merge(const Verification& o);
  bool clean() const;
};

struct StepStats {
  int step{0};
  double time{0.0};
  double dt{0.0};
  int retries{0};
  long activations{0};   // limited elements summed over stages
  double theta_mean{0.0};  // over limited elements
  double theta_max{0.0};
  double iteration_mean{0.0};
  long pseudo_solves{0};
  long pseudo_iterations{0};
};

struct Diagnostics {
  std::vector<StepStats> steps;
  Verification verification;
  std::vector<Eigen::VectorXd> totals;  // conserved totals, initial state first
  double min_density{std::numeric_limits<double>::infinity()};
  double max_density{-std::numeric_limits<double>::infinity()};

  long pseudo_solves() const;
  long pseudo_iterations() const;
  double iteration_mean() const;
  long activations() const;
};

struct TimeSettings {
  int rk_order{3};
  double cfl{0.9};
  double t_final{0.2};
  long max_steps{-1};  // negative: unlimited
  int max_retries{3};
};

/// Stage data computed from the traces of the stage input.
template <int Dim>
struct StagePreparation {
  TraceData<Dim> traces;
  std::vector<PseudoEquilibrium<Dim>> pseudo;  // empty entries when limiting is off
  std::vector<double> step_factor;             // per element, see element_step_factor
  double max_step_factor{0.0};
  // filled when verification is on
  double max_pseudo_residual{0.0};
  double min_domination{std::numeric_limits<double>::infinity()};

  /// Largest dt allowed by the IDP step condition.
  double max_dt() const { return 0.5 / max_step_factor; }
};

template <int Dim>
class TimeIntegrator {
 public:
  TimeIntegrator(const SchemeOperator<Dim>& op, LimiterSettings limiter, TimeSettings time);

  const SchemeOperator<Dim>& op() const { return op_; }
  const LimiterSettings& limiter() const { return limiter_; }
  const TimeSettings& time() const { return time_; }

  StagePreparation<Dim> prepare(const Field<Dim>& U) const;

  /// Forward Euler update plus limiting. `stats` and `ver` are accumulated.
  Field<Dim> euler_step(const Field<Dim>& U, const StagePreparation<Dim>& prep, double dt, StepStats& stats,
                        Verification& ver) const;

  /// One SSP-RK step of size dt. Stage 1 uses `prep`; later stages are
  /// re-prepared and throw StepRejected if dt exceeds their bound.
  Field<Dim> ssp_step(const Field<Dim>& U, const StagePreparation<Dim>& prep, double dt, StepStats& stats,
                      Verification& ver) const;

  /// Scaling limiter on element e of the Euler update `Unew` from `U`.
  void limit_element(const Field<Dim>& U, Field<Dim>& Unew, const TraceData<Dim>& tr,
                     const PseudoEquilibrium<Dim>& pe, double dt, int e, double& theta, Verification& ver) const;

  /// Smoothness gate on density; true means the element counts as smooth.
  bool is_smooth(const Field<Dim>& U, int e) const;

 private:
  const SchemeOperator<Dim>& op_;
  LimiterSettings limiter_;
  TimeSettings time_;
  std::vector<int> top_modes_;
};

template <int Dim>
struct RunResult {
  Field<Dim> U;
  double time{0.0};
  long steps{0};
  Diagnostics diagnostics;
};

template <int Dim>
using StepObserver = std::function<void(const Field<Dim>&, double time, long step)>;

/// Advances U0 from t = 0 to time.t_final (clipped exactly) or max_steps.
template <int Dim>
RunResult<Dim> run(const TimeIntegrator<Dim>& integrator, Field<Dim> U0, const StepObserver<Dim>& observer = {});

}  // namespace idpdg
