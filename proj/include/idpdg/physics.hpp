#pragma once

// Compressible Euler equations for a polytropic ideal gas.
//
// States are fixed-size Eigen column vectors (rho, rho*v, rho*E) of length
// Dim + 2. Every function here is a pure function of its arguments.

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace idpdg {

template <typename Scalar, int Dim>
using Vector = Eigen::Matrix<Scalar, Dim, 1>;

template <typename Scalar, int Dim>
using ConservedState = Eigen::Matrix<Scalar, Dim + 2, 1>;

template <int Dim>
using Vec = Vector<double, Dim>;

template <int Dim>
using State = ConservedState<double, Dim>;

/// Raised whenever a state outside {rho > 0, rho*e > 0} reaches an operation
/// that needs a physical state. Carries the element id when known (-1 otherwise).
class InadmissibleState : public std::runtime_error {
 public:
  explicit InadmissibleState(const std::string& what, int element = -1)
      : std::runtime_error(what), element_(element) {}
  int element() const noexcept { return element_; }

 private:
  int element_;
};

template <typename Scalar = double>
struct GasModel {
  Scalar gamma{1.4};
  Scalar cv{1.0};  // only enters the entropy diagnostic
};

template <typename Scalar, int Dim>
struct PrimitiveState {
  Scalar rho{};
  Vector<Scalar, Dim> velocity = Vector<Scalar, Dim>::Zero();
  Scalar pressure{};
};

/// Wave-speed estimator used for |lambda|(uL, uR, n).
enum class WaveSpeedEstimate {
  Default,     // max(|vL.n| + cL, |vR.n| + cR)
  Guaranteed,  // two-rarefaction pressure bound, encloses the exact fan
};

template <typename Scalar, int Dim>
inline Scalar density(const ConservedState<Scalar, Dim>& u) {
  return u(0);
}

template <typename Scalar, int Dim>
inline Vector<Scalar, Dim> momentum(const ConservedState<Scalar, Dim>& u) {
  return u.template segment<Dim>(1);
}

template <typename Scalar, int Dim>
inline Scalar total_energy(const ConservedState<Scalar, Dim>& u) {
  return u(Dim + 1);
}

/// rho*e = rho*E - |rho v|^2 / (2 rho); -inf when rho <= 0.
template <typename Scalar, int Dim>
inline Scalar internal_energy_density(const ConservedState<Scalar, Dim>& u) {
  if (!(u(0) > Scalar(0))) return -std::numeric_limits<Scalar>::infinity();
  return u(Dim + 1) - momentum<Scalar, Dim>(u).squaredNorm() / (Scalar(2) * u(0));
}

template <typename Scalar, int Dim>
inline bool is_admissible(const ConservedState<Scalar, Dim>& u) {
  return u(0) > Scalar(0) && internal_energy_density<Scalar, Dim>(u) > Scalar(0);
}

template <int Dim>
std::string describe(const State<Dim>& u) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (int i = 0; i < Dim + 2; ++i) os << (i ? ", " : "") << u(i);
  os << ")";
  return os.str();
}

template <int Dim>
[[noreturn, gnu::cold, gnu::noinline]] void throw_inadmissible(const State<Dim>& u, int element) {
  std::string msg = "inadmissible state " + describe<Dim>(u);
  if (element >= 0) msg += " in element " + std::to_string(element);
  throw InadmissibleState(msg, element);
}

template <typename Scalar, int Dim>
inline void require_admissible(const ConservedState<Scalar, Dim>& u, int element = -1) {
  if (!is_admissible<Scalar, Dim>(u)) [[unlikely]]
    throw_inadmissible<Dim>(u.template cast<double>(), element);
}

template <typename Scalar, int Dim>
inline Scalar pressure(const ConservedState<Scalar, Dim>& u, const GasModel<Scalar>& gas) {
  return (gas.gamma - Scalar(1)) * internal_energy_density<Scalar, Dim>(u);
}

template <typename Scalar, int Dim>
inline Scalar sound_speed(const ConservedState<Scalar, Dim>& u, const GasModel<Scalar>& gas) {
  return std::sqrt(gas.gamma * pressure<Scalar, Dim>(u, gas) / u(0));
}

template <typename Scalar, int Dim>
PrimitiveState<Scalar, Dim> to_primitive(const ConservedState<Scalar, Dim>& u,
                                         const GasModel<Scalar>& gas) {
  PrimitiveState<Scalar, Dim> w;
  w.rho = u(0);
  w.velocity = momentum<Scalar, Dim>(u) / u(0);
  w.pressure = pressure<Scalar, Dim>(u, gas);
  return w;
}

template <typename Scalar, int Dim>
ConservedState<Scalar, Dim> to_conserved(const PrimitiveState<Scalar, Dim>& w,
                                         const GasModel<Scalar>& gas) {
  ConservedState<Scalar, Dim> u;
  u(0) = w.rho;
  u.template segment<Dim>(1) = w.rho * w.velocity;
  u(Dim + 1) = w.pressure / (gas.gamma - Scalar(1)) +
               Scalar(0.5) * w.rho * w.velocity.squaredNorm();
  return u;
}

/// Shorthand for building a state from (rho, velocity, pressure).
template <int Dim>
State<Dim> conserved(double rho, const Vec<Dim>& velocity, double p,
                     const GasModel<double>& gas = {}) {
  return to_conserved<double, Dim>(PrimitiveState<double, Dim>{rho, velocity, p}, gas);
}

/// f(u) . n. Throws InadmissibleState rather than returning NaN.
template <typename Scalar, int Dim>
ConservedState<Scalar, Dim> physical_flux(const ConservedState<Scalar, Dim>& u,
                                          const Vector<Scalar, Dim>& n,
                                          const GasModel<Scalar>& gas) {
  require_admissible<Scalar, Dim>(u);
  const Scalar p = pressure<Scalar, Dim>(u, gas);
  const Vector<Scalar, Dim> v = momentum<Scalar, Dim>(u) / u(0);
  const Scalar vn = v.dot(n);
  ConservedState<Scalar, Dim> f;
  f(0) = u(0) * vn;
  f.template segment<Dim>(1) = momentum<Scalar, Dim>(u) * vn + p * n;
  f(Dim + 1) = (u(Dim + 1) + p) * vn;
  return f;
}

/// Upper bound of the pressure in the star region from the two-rarefaction
/// approximation; it bounds the exact star pressure from above for 1 < gamma <= 5/3.
template <typename Scalar>
Scalar two_rarefaction_pressure(Scalar rhoL, Scalar uL, Scalar pL, Scalar rhoR, Scalar uR,
                                Scalar pR, Scalar gamma) {
  const Scalar cL = std::sqrt(gamma * pL / rhoL);
  const Scalar cR = std::sqrt(gamma * pR / rhoR);
  const Scalar z = (gamma - 1) / (2 * gamma);
  const Scalar num = cL + cR - (gamma - 1) / 2 * (uR - uL);
  if (num <= 0) return Scalar(0);
  const Scalar den = cL / std::pow(pL, z) + cR / std::pow(pR, z);
  return std::pow(num / den, 1 / z);
}

template <typename Scalar, int Dim>
Scalar max_wave_speed(const ConservedState<Scalar, Dim>& uL, const ConservedState<Scalar, Dim>& uR,
                      const Vector<Scalar, Dim>& n, const GasModel<Scalar>& gas,
                      WaveSpeedEstimate estimate = WaveSpeedEstimate::Default) {
  require_admissible<Scalar, Dim>(uL);
  require_admissible<Scalar, Dim>(uR);
  const Scalar vL = momentum<Scalar, Dim>(uL).dot(n) / uL(0);
  const Scalar vR = momentum<Scalar, Dim>(uR).dot(n) / uR(0);
  const Scalar cL = sound_speed<Scalar, Dim>(uL, gas);
  const Scalar cR = sound_speed<Scalar, Dim>(uR, gas);
  if (estimate == WaveSpeedEstimate::Default) {
    return std::max(std::abs(vL) + cL, std::abs(vR) + cR);
  }
  const Scalar pL = pressure<Scalar, Dim>(uL, gas);
  const Scalar pR = pressure<Scalar, Dim>(uR, gas);
  const Scalar g = gas.gamma;
  const Scalar pstar = two_rarefaction_pressure<Scalar>(uL(0), vL, pL, uR(0), vR, pR, g);
  const Scalar factor = (g + 1) / (2 * g);
  const Scalar qL = std::sqrt(Scalar(1) + factor * std::max(pstar / pL - Scalar(1), Scalar(0)));
  const Scalar qR = std::sqrt(Scalar(1) + factor * std::max(pstar / pR - Scalar(1), Scalar(0)));
  return std::max(std::abs(vL - cL * qL), std::abs(vR + cR * qR));
}

/// s = Cv ln(p / rho^gamma).
template <typename Scalar, int Dim>
Scalar specific_entropy(const ConservedState<Scalar, Dim>& u, const GasModel<Scalar>& gas) {
  require_admissible<Scalar, Dim>(u);
  return gas.cv * std::log(pressure<Scalar, Dim>(u, gas) / std::pow(u(0), gas.gamma));
}

/// The two quasiconcave functions enforced by the limiter.
enum class Quasiconcave { Density, InternalEnergy };

template <typename Scalar, int Dim>
inline Scalar quasiconcave_value(Quasiconcave which, const ConservedState<Scalar, Dim>& u) {
  return which == Quasiconcave::Density ? u(0) : internal_energy_density<Scalar, Dim>(u);
}

}  // namespace idpdg
