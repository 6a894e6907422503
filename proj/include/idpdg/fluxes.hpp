#pragma once

// Two-point numerical fluxes. Interface fluxes h(uL, uR, n) are consistent
// and conservative; the volume flux is additionally symmetric in (uL, uR).

#include "idpdg/physics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace idpdg {

enum class InterfaceFluxKind { Rusanov, HLL, Suliciu };
enum class VolumeFluxKind { KennedyGruber };

#ifdef NDEBUG
inline constexpr bool kCheckWaveSpeeds = false;
#else
inline constexpr bool kCheckWaveSpeeds = true;
#endif

/// Flux value plus the largest |signal speed| of the underlying approximate
/// Riemann solver. The speed enters the time-step bound.
template <typename Scalar, int Dim>
struct InterfaceFlux {
  ConservedState<Scalar, Dim> flux;
  Scalar speed;
};

/// 1/2 (f(uL) + f(uR)).n - lambda/2 (uR - uL)
template <typename Scalar, int Dim>
ConservedState<Scalar, Dim> rusanov_flux(const ConservedState<Scalar, Dim>& uL,
                                         const ConservedState<Scalar, Dim>& uR,
                                         const Vector<Scalar, Dim>& n, Scalar lambda,
                                         const GasModel<Scalar>& gas,
                                         bool check = kCheckWaveSpeeds) {
  if (check) {
    const Scalar bound = max_wave_speed<Scalar, Dim>(uL, uR, n, gas);
    if (lambda < bound * (1 - Scalar(1e-14)))
      throw std::invalid_argument("Rusanov speed " + std::to_string(double(lambda)) +
                                  " below wave-speed estimate " + std::to_string(double(bound)));
  }
  return Scalar(0.5) * (physical_flux<Scalar, Dim>(uL, n, gas) + physical_flux<Scalar, Dim>(uR, n, gas)) -
         Scalar(0.5) * lambda * (uR - uL);
}

namespace detail {

/// Outer wave speeds (SL, SR) enclosing the exact fan, from the
/// two-rarefaction star-pressure bound.
template <typename Scalar, int Dim>
std::pair<Scalar, Scalar> enclosing_speeds(const ConservedState<Scalar, Dim>& uL,
                                           const ConservedState<Scalar, Dim>& uR,
                                           const Vector<Scalar, Dim>& n,
                                           const GasModel<Scalar>& gas) {
  const Scalar vL = momentum<Scalar, Dim>(uL).dot(n) / uL(0);
  const Scalar vR = momentum<Scalar, Dim>(uR).dot(n) / uR(0);
  const Scalar pL = pressure<Scalar, Dim>(uL, gas), pR = pressure<Scalar, Dim>(uR, gas);
  const Scalar cL = sound_speed<Scalar, Dim>(uL, gas), cR = sound_speed<Scalar, Dim>(uR, gas);
  const Scalar g = gas.gamma;
  const Scalar pstar = two_rarefaction_pressure<Scalar>(uL(0), vL, pL, uR(0), vR, pR, g);
  const Scalar factor = (g + 1) / (2 * g);
  const Scalar qL = std::sqrt(Scalar(1) + factor * std::max(pstar / pL - Scalar(1), Scalar(0)));
  const Scalar qR = std::sqrt(Scalar(1) + factor * std::max(pstar / pR - Scalar(1), Scalar(0)));
  return {std::min(vL - cL * qL, vR - cR), std::max(vR + cR * qR, vL + cL)};
}

}  // namespace detail

/// HLL flux with outer speeds that enclose the exact Riemann fan.
template <typename Scalar, int Dim>
InterfaceFlux<Scalar, Dim> hll_flux(const ConservedState<Scalar, Dim>& uL,
                                    const ConservedState<Scalar, Dim>& uR,
                                    const Vector<Scalar, Dim>& n, const GasModel<Scalar>& gas) {
  const auto fL = physical_flux<Scalar, Dim>(uL, n, gas);
  const auto fR = physical_flux<Scalar, Dim>(uR, n, gas);
  const auto [sL, sR] = detail::enclosing_speeds<Scalar, Dim>(uL, uR, n, gas);
  const Scalar speed = std::max(std::abs(sL), std::abs(sR));
  if (sL >= 0) return {fL, speed};
  if (sR <= 0) return {fR, speed};
  return {(sR * fL - sL * fR + sL * sR * (uR - uL)) / (sR - sL), speed};
}

/// Middle state of the HLL solver above, for identity checks.
template <typename Scalar, int Dim>
ConservedState<Scalar, Dim> hll_middle_state(const ConservedState<Scalar, Dim>& uL,
                                             const ConservedState<Scalar, Dim>& uR,
                                             const Vector<Scalar, Dim>& n,
                                             const GasModel<Scalar>& gas) {
  const auto [sL, sR] = detail::enclosing_speeds<Scalar, Dim>(uL, uR, n, gas);
  return (sR * uR - sL * uL - (physical_flux<Scalar, Dim>(uR, n, gas) - physical_flux<Scalar, Dim>(uL, n, gas))) /
         (sR - sL);
}

template <typename Scalar, int Dim>
std::pair<Scalar, Scalar> hll_speeds(const ConservedState<Scalar, Dim>& uL,
                                     const ConservedState<Scalar, Dim>& uR,
                                     const Vector<Scalar, Dim>& n, const GasModel<Scalar>& gas) {
  return detail::enclosing_speeds<Scalar, Dim>(uL, uR, n, gas);
}

/// Intermediate states of the Suliciu relaxation solver in the normal frame.
template <typename Scalar>
struct SuliciuFan {
  Scalar cL, cR;          // Lagrangian sound speeds
  Scalar u_star, p_star;  // contact velocity and relaxed pressure
  Scalar tau_left, tau_right;     // 1/rho in the two star states
  Scalar energy_left, energy_right;  // specific total energy in the star states
  Scalar sL, sR;          // outer speeds
};

/// Relaxation solver with the positivity-preserving choice of cL, cR.
template <typename Scalar>
SuliciuFan<Scalar> suliciu_fan(Scalar rhoL, Scalar uL, Scalar pL, Scalar EL, Scalar rhoR, Scalar uR,
                               Scalar pR, Scalar ER, Scalar gamma) {
  const Scalar a = (gamma + 1) / 2;
  const Scalar aL = std::sqrt(gamma * pL / rhoL), aR = std::sqrt(gamma * pR / rhoR);
  SuliciuFan<Scalar> s;
  if (pR >= pL) {
    s.cL = rhoL * (aL + a * std::max((pR - pL) / (rhoR * aR) + uL - uR, Scalar(0)));
    s.cR = rhoR * (aR + a * std::max((pL - pR) / s.cL + uL - uR, Scalar(0)));
  } else {
    s.cR = rhoR * (aR + a * std::max((pL - pR) / (rhoL * aL) + uL - uR, Scalar(0)));
    s.cL = rhoL * (aL + a * std::max((pR - pL) / s.cR + uL - uR, Scalar(0)));
  }
  const Scalar cs = s.cL + s.cR;
  s.u_star = (s.cL * uL + s.cR * uR + pL - pR) / cs;
  s.p_star = (s.cR * pL + s.cL * pR - s.cL * s.cR * (uR - uL)) / cs;
  s.tau_left = 1 / rhoL + (s.cR * (uR - uL) + pL - pR) / (s.cL * cs);
  s.tau_right = 1 / rhoR + (s.cL * (uR - uL) + pR - pL) / (s.cR * cs);
  s.energy_left = EL - (s.p_star * s.u_star - pL * uL) / s.cL;
  s.energy_right = ER + (s.p_star * s.u_star - pR * uR) / s.cR;
  s.sL = uL - s.cL / rhoL;
  s.sR = uR + s.cR / rhoR;
  return s;
}

template <typename Scalar, int Dim>
InterfaceFlux<Scalar, Dim> suliciu_flux(const ConservedState<Scalar, Dim>& uL,
                                        const ConservedState<Scalar, Dim>& uR,
                                        const Vector<Scalar, Dim>& n, const GasModel<Scalar>& gas) {
  require_admissible<Scalar, Dim>(uL);
  require_admissible<Scalar, Dim>(uR);
  const Scalar rhoL = uL(0), rhoR = uR(0);
  const Vector<Scalar, Dim> vL = momentum<Scalar, Dim>(uL) / rhoL;
  const Vector<Scalar, Dim> vR = momentum<Scalar, Dim>(uR) / rhoR;
  const Scalar unL = vL.dot(n), unR = vR.dot(n);
  const Scalar pL = pressure<Scalar, Dim>(uL, gas), pR = pressure<Scalar, Dim>(uR, gas);
  const auto fan = suliciu_fan<Scalar>(rhoL, unL, pL, uL(Dim + 1) / rhoL, rhoR, unR, pR,
                                       uR(Dim + 1) / rhoR, gas.gamma);
  const Scalar speed = std::max(std::abs(fan.sL), std::abs(fan.sR));
  if (fan.sL >= 0) return {physical_flux<Scalar, Dim>(uL, n, gas), speed};
  if (fan.sR <= 0) return {physical_flux<Scalar, Dim>(uR, n, gas), speed};

  // Star state on the upwind side of the contact; tangential velocity is advected.
  const bool left = fan.u_star >= 0;
  const Scalar rho = 1 / (left ? fan.tau_left : fan.tau_right);
  const Scalar E = left ? fan.energy_left : fan.energy_right;
  const Vector<Scalar, Dim> v_tangent = left ? Vector<Scalar, Dim>(vL - unL * n)
                                             : Vector<Scalar, Dim>(vR - unR * n);
  const Vector<Scalar, Dim> v = v_tangent + fan.u_star * n;
  ConservedState<Scalar, Dim> f;
  const Scalar mass = rho * fan.u_star;
  f(0) = mass;
  f.template segment<Dim>(1) = mass * v + fan.p_star * n;
  f(Dim + 1) = (rho * E + fan.p_star) * fan.u_star;
  return {f, speed};
}

template <typename Scalar, int Dim>
InterfaceFlux<Scalar, Dim> interface_flux(InterfaceFluxKind kind,
                                          const ConservedState<Scalar, Dim>& uL,
                                          const ConservedState<Scalar, Dim>& uR,
                                          const Vector<Scalar, Dim>& n, const GasModel<Scalar>& gas,
                                          WaveSpeedEstimate estimate = WaveSpeedEstimate::Default) {
  switch (kind) {
    case InterfaceFluxKind::Rusanov: {
      const Scalar lambda = max_wave_speed<Scalar, Dim>(uL, uR, n, gas, estimate);
      return {rusanov_flux<Scalar, Dim>(uL, uR, n, lambda, gas, false), lambda};
    }
    case InterfaceFluxKind::HLL:
      return hll_flux<Scalar, Dim>(uL, uR, n, gas);
    case InterfaceFluxKind::Suliciu:
      return suliciu_flux<Scalar, Dim>(uL, uR, n, gas);
  }
  throw std::logic_error("unknown interface flux");
}

/// Kennedy-Gruber split flux contracted with the (non-normalized) metric vector m.
template <typename Scalar, int Dim>
ConservedState<Scalar, Dim> kennedy_gruber_flux(const ConservedState<Scalar, Dim>& uL,
                                                const ConservedState<Scalar, Dim>& uR,
                                                const Vector<Scalar, Dim>& m,
                                                const GasModel<Scalar>& gas) {
  require_admissible<Scalar, Dim>(uL);
  require_admissible<Scalar, Dim>(uR);
  const Scalar rho = Scalar(0.5) * (uL(0) + uR(0));
  const Vector<Scalar, Dim> v = Scalar(0.5) * (momentum<Scalar, Dim>(uL) / uL(0) +
                                               momentum<Scalar, Dim>(uR) / uR(0));
  const Scalar E = Scalar(0.5) * (uL(Dim + 1) / uL(0) + uR(Dim + 1) / uR(0));
  const Scalar p = Scalar(0.5) * (pressure<Scalar, Dim>(uL, gas) + pressure<Scalar, Dim>(uR, gas));
  const Scalar vm = v.dot(m);
  ConservedState<Scalar, Dim> f;
  f(0) = rho * vm;
  f.template segment<Dim>(1) = rho * v * vm + p * m;
  f(Dim + 1) = rho * E * vm + p * vm;
  return f;
}

template <typename Scalar, int Dim>
ConservedState<Scalar, Dim> volume_flux(VolumeFluxKind, const ConservedState<Scalar, Dim>& uL,
                                        const ConservedState<Scalar, Dim>& uR,
                                        const Vector<Scalar, Dim>& m, const GasModel<Scalar>& gas) {
  return kennedy_gruber_flux<Scalar, Dim>(uL, uR, m, gas);
}

/// 1/2 (uL + uR) - ratio (f(uR) - f(uL)).n with ratio = dt/h.
template <typename Scalar, int Dim>
ConservedState<Scalar, Dim> riemann_fan_average(const ConservedState<Scalar, Dim>& uL,
                                                const ConservedState<Scalar, Dim>& uR,
                                                const Vector<Scalar, Dim>& n, Scalar ratio,
                                                const GasModel<Scalar>& gas) {
  const Scalar lambda = max_wave_speed<Scalar, Dim>(uL, uR, n, gas);
  if (ratio * lambda > Scalar(0.5) * (1 + Scalar(1e-14))) throw std::invalid_argument("half-CFL violated");
  return Scalar(0.5) * (uL + uR) -
         ratio * (physical_flux<Scalar, Dim>(uR, n, gas) - physical_flux<Scalar, Dim>(uL, n, gas));
}

}  // namespace idpdg
