#pragma once

// Test problems: the shock-tube Riemann problems, the smooth periodic density
// wave, free-stream flow on a curved mesh and the Mach 10 wedge reflection.

#include "idpdg/config.hpp"
#include "idpdg/exact_riemann.hpp"
#include "idpdg/timeloop.hpp"

#include <functional>
#include <memory>
#include <string>

namespace idpdg {

struct RiemannData {
  Primitive1D left;
  Primitive1D right;
  double x0;
};

RiemannData riemann_data(const std::string& name);

using Primitive2D = PrimitiveState<double, 2>;

/// Upstream state of the wedge problem and the Mach number of its shock.
Primitive2D dmr_pre_shock();
inline constexpr double kDmrMach = 10.0;

template <int Dim>
struct CaseSetup {
  Mesh<Dim> mesh;
  BoundaryData<Dim> boundary;
  std::function<State<Dim>(const Vec<Dim>&)> initial;
  std::function<State<Dim>(const Vec<Dim>&, double)> exact;  // empty when unknown
};

CaseSetup<1> setup_1d(const CaseConfig& cfg);
CaseSetup<2> setup_2d(const CaseConfig& cfg);

SchemeSettings scheme_settings(const CaseConfig& cfg);
LimiterSettings limiter_settings(const CaseConfig& cfg);
TimeSettings time_settings(const CaseConfig& cfg);

/// Owns the operator so the result can be post-processed.
template <int Dim>
struct CaseRun {
  CaseSetup<Dim> setup;
  std::unique_ptr<SchemeOperator<Dim>> op;
  RunResult<Dim> result;
};

/// Builds the case, projects the initial data and runs it to completion.
template <int Dim>
CaseRun<Dim> run_case(const CaseConfig& cfg, const StepObserver<Dim>& observer = {});

/// Smooth density wave rho = 1 + 0.2 sin(2 pi (x - t) / L) at u = 1, p = 1.
State<1> density_wave(double x, double t, double x_min, double length);

}  // namespace idpdg
