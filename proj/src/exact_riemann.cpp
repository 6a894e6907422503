#include "idpdg/exact_riemann.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace idpdg {

PressureFunction side_pressure_function(double p, const Primitive1D& side, double gamma) {
  const double rho = side.rho;
  const double pk = side.pressure;
  const double c = std::sqrt(gamma * pk / rho);
  if (p > pk) {
    const double a = 2.0 / ((gamma + 1.0) * rho);
    const double b = (gamma - 1.0) / (gamma + 1.0) * pk;
    const double q = std::sqrt(a / (p + b));
    return {(p - pk) * q, q * (1.0 - 0.5 * (p - pk) / (b + p))};
  }
  const double ratio = p / pk;
  const double expo = (gamma - 1.0) / (2.0 * gamma);
  const double value = 2.0 * c / (gamma - 1.0) * (std::pow(ratio, expo) - 1.0);
  const double derivative = 1.0 / (rho * c) * std::pow(ratio, -(gamma + 1.0) / (2.0 * gamma));
  return {value, derivative};
}

RiemannWaves solve_riemann(const Primitive1D& left, const Primitive1D& right,
                           const GasModel<double>& gas) {
  const double g = gas.gamma;
  const double uL = left.velocity(0), uR = right.velocity(0);
  const double cL = std::sqrt(g * left.pressure / left.rho);
  const double cR = std::sqrt(g * right.pressure / right.rho);
  if (2.0 / (g - 1.0) * (cL + cR) <= uR - uL) throw std::runtime_error("vacuum formation");

  const double du = uR - uL;
  // Two-rarefaction initial guess: exact when both waves are rarefactions.
  double p = std::max(two_rarefaction_pressure(left.rho, uL, left.pressure, right.rho, uR,
                                               right.pressure, g),
                      1e-14 * std::min(left.pressure, right.pressure));
  RiemannWaves w;
  const double scale = std::max({left.pressure, right.pressure, 1e-300});
  for (w.iterations = 1; w.iterations <= 100; ++w.iterations) {
    const auto fl = side_pressure_function(p, left, g);
    const auto fr = side_pressure_function(p, right, g);
    const double residual = fl.value + fr.value + du;
    double next = p - residual / (fl.derivative + fr.derivative);
    if (next <= 0.0) next = 0.5 * p;
    const bool done = std::abs(next - p) <= 1e-15 * scale ||
                      std::abs(residual) <= 1e-12 * (std::abs(uL) + std::abs(uR) + cL + cR);
    p = next;
    if (done) break;
  }
  if (w.iterations > 100) throw std::runtime_error("exact Riemann solver did not converge");

  const auto fl = side_pressure_function(p, left, g);
  const auto fr = side_pressure_function(p, right, g);
  w.p_star = p;
  w.u_star = 0.5 * (uL + uR) + 0.5 * (fr.value - fl.value);

  const double gm = (g - 1.0) / (g + 1.0);
  auto star_density = [&](const Primitive1D& s) {
    const double ratio = p / s.pressure;
    if (p > s.pressure) return s.rho * (ratio + gm) / (gm * ratio + 1.0);
    return s.rho * std::pow(ratio, 1.0 / g);
  };
  w.rho_star_left = star_density(left);
  w.rho_star_right = star_density(right);
  w.left_shock = p > left.pressure;
  w.right_shock = p > right.pressure;
  const double k1 = (g + 1.0) / (2.0 * g), k2 = (g - 1.0) / (2.0 * g);
  if (w.left_shock) w.left_shock_speed = uL - cL * std::sqrt(k1 * p / left.pressure + k2);
  if (w.right_shock) w.right_shock_speed = uR + cR * std::sqrt(k1 * p / right.pressure + k2);
  return w;
}

Primitive1D sample_riemann(const Primitive1D& left, const Primitive1D& right,
                           const RiemannWaves& w, double xi, const GasModel<double>& gas) {
  const double g = gas.gamma;
  auto make = [](double rho, double u, double p) {
    Primitive1D s;
    s.rho = rho;
    s.velocity(0) = u;
    s.pressure = p;
    return s;
  };
  if (xi <= w.u_star) {
    const double uL = left.velocity(0);
    const double cL = std::sqrt(g * left.pressure / left.rho);
    if (w.left_shock) {
      if (xi <= w.left_shock_speed) return left;
      return make(w.rho_star_left, w.u_star, w.p_star);
    }
    const double head = uL - cL;
    const double cstar = cL * std::pow(w.p_star / left.pressure, (g - 1.0) / (2.0 * g));
    const double tail = w.u_star - cstar;
    if (xi <= head) return left;
    if (xi >= tail) return make(w.rho_star_left, w.u_star, w.p_star);
    const double c = 2.0 / (g + 1.0) * (cL + 0.5 * (g - 1.0) * (uL - xi));
    const double u = 2.0 / (g + 1.0) * (cL + 0.5 * (g - 1.0) * uL + xi);
    const double rho = left.rho * std::pow(c / cL, 2.0 / (g - 1.0));
    const double p = left.pressure * std::pow(c / cL, 2.0 * g / (g - 1.0));
    return make(rho, u, p);
  }
  const double uR = right.velocity(0);
  const double cR = std::sqrt(g * right.pressure / right.rho);
  if (w.right_shock) {
    if (xi >= w.right_shock_speed) return right;
    return make(w.rho_star_right, w.u_star, w.p_star);
  }
  const double head = uR + cR;
  const double cstar = cR * std::pow(w.p_star / right.pressure, (g - 1.0) / (2.0 * g));
  const double tail = w.u_star + cstar;
  if (xi >= head) return right;
  if (xi <= tail) return make(w.rho_star_right, w.u_star, w.p_star);
  const double c = 2.0 / (g + 1.0) * (cR - 0.5 * (g - 1.0) * (uR - xi));
  const double u = 2.0 / (g + 1.0) * (-cR + 0.5 * (g - 1.0) * uR + xi);
  const double rho = right.rho * std::pow(c / cR, 2.0 / (g - 1.0));
  const double p = right.pressure * std::pow(c / cR, 2.0 * g / (g - 1.0));
  return make(rho, u, p);
}

State<1> exact_riemann_solution(const State<1>& uL, const State<1>& uR, double xi,
                                const GasModel<double>& gas) {
  require_admissible<double, 1>(uL);
  require_admissible<double, 1>(uR);
  const auto left = to_primitive<double, 1>(uL, gas);
  const auto right = to_primitive<double, 1>(uR, gas);
  if ((uL - uR).cwiseAbs().maxCoeff() == 0.0) return uL;
  const auto waves = solve_riemann(left, right, gas);
  return to_conserved<double, 1>(sample_riemann(left, right, waves, xi, gas), gas);
}

Primitive1D post_shock_state(const Primitive1D& pre, double mach, const GasModel<double>& gas) {
  const double g = gas.gamma;
  const double m2 = mach * mach;
  Primitive1D post;
  post.rho = pre.rho * (g + 1.0) * m2 / ((g - 1.0) * m2 + 2.0);
  post.pressure = pre.pressure * (1.0 + 2.0 * g / (g + 1.0) * (m2 - 1.0));
  const double s = shock_speed(pre, mach, gas);
  post.velocity(0) = pre.velocity(0) + (s - pre.velocity(0)) * (1.0 - pre.rho / post.rho);
  return post;
}

double shock_speed(const Primitive1D& pre, double mach, const GasModel<double>& gas) {
  return pre.velocity(0) + mach * std::sqrt(gas.gamma * pre.pressure / pre.rho);
}

}  // namespace idpdg
