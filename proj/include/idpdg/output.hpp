#pragma once

// Writers for profiles (CSV), 2D fields (legacy VTK), per-step statistics
// and error norms against a reference solution.

#include "idpdg/timeloop.hpp"

#include <functional>
#include <ostream>
#include <string>

namespace idpdg {

/// x, rho, u, p at `samples` equispaced points per element (end points included).
void write_profile_csv(std::ostream& os, const SchemeOperator<1>& op, const Field<1>& U, int samples);

/// L1 norm of the density error, integrated with a 12-point Gauss rule per element.
template <int Dim>
double l1_density_error(const SchemeOperator<Dim>& op, const Field<Dim>& U,
                        const std::function<State<Dim>(const Vec<Dim>&)>& exact);

/// Unstructured grid of `sub` x `sub` sub-cells per element with point data
/// rho, velocity, p.
void write_vtk(std::ostream& os, const SchemeOperator<2>& op, const Field<2>& U, int sub,
               const std::string& title = "idpdg");

/// One row per step: step, time, dt, retries, activations, theta_mean,
/// theta_max, iteration_mean.
void write_stats_csv(std::ostream& os, const Diagnostics& diag);

struct DensityRange {
  double min;
  double max;
};

/// Density extrema over the limiter check points of every element.
template <int Dim>
DensityRange density_range(const SchemeOperator<Dim>& op, const Field<Dim>& U);

}  // namespace idpdg
