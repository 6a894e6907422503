#pragma once

// Exact self-similar solution of the 1D polytropic-gas Riemann problem.
// Used as a test and error-norm oracle, never as a production flux.

#include "idpdg/physics.hpp"

namespace idpdg {

using Primitive1D = PrimitiveState<double, 1>;

struct RiemannWaves {
  double p_star{};
  double u_star{};
  double rho_star_left{};
  double rho_star_right{};
  bool left_shock{};
  bool right_shock{};
  double left_shock_speed{};   // meaningful when left_shock
  double right_shock_speed{};  // meaningful when right_shock
  int iterations{};
};

/// f_K(p) of the star-pressure equation for one side, and its derivative.
struct PressureFunction {
  double value;
  double derivative;
};
PressureFunction side_pressure_function(double p, const Primitive1D& side, double gamma);

/// Newton solve of f_L(p) + f_R(p) + (uR - uL) = 0 to a 1e-12 relative residual.
/// Throws std::runtime_error("vacuum formation") when the data creates vacuum.
RiemannWaves solve_riemann(const Primitive1D& left, const Primitive1D& right,
                           const GasModel<double>& gas = {});

Primitive1D sample_riemann(const Primitive1D& left, const Primitive1D& right,
                           const RiemannWaves& waves, double xi, const GasModel<double>& gas = {});

State<1> exact_riemann_solution(const State<1>& uL, const State<1>& uR, double xi,
                                const GasModel<double>& gas = {});

/// State behind a shock of Mach number `mach` running in +x into `pre`.
Primitive1D post_shock_state(const Primitive1D& pre, double mach, const GasModel<double>& gas = {});

/// Speed of that shock (lab frame).
double shock_speed(const Primitive1D& pre, double mach, const GasModel<double>& gas = {});

}  // namespace idpdg
