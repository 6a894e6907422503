#pragma once

// Invariant-domain-preserving limiting: pseudo-equilibrium states, the
// time-step bound, candidate states and local bounds, and the scaling limiter.
//
// Element-level functions take the element's face data as column blocks:
// traces u^-(x_k), normals n_k and face weights s_k.

#include "idpdg/fluxes.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace idpdg {

enum class LimiterMode { None, POS, IDP, IDPloc };

std::string to_string(LimiterMode mode);
LimiterMode parse_limiter_mode(const std::string& name);

struct Floors {
  double rho{1e-12};
  double rho_e{1e-12};
};

/// Raised when a candidate state or a stage bound check fails; the time
/// loop retries the step with a smaller time step.
class IdpViolation : public std::runtime_error {
 public:
  explicit IdpViolation(const std::string& what, int element = -1)
      : std::runtime_error(what), element_(element) {}
  int element() const noexcept { return element_; }

 private:
  int element_;
};

template <int Dim>
using StateBlock = Eigen::Matrix<double, Dim + 2, Eigen::Dynamic>;

template <int Dim>
struct PseudoEquilibrium {
  State<Dim> u_star;
  Eigen::VectorXd lambda;  // lambda*^k per face point (all equal in global mode)
  int iterations{0};       // number of u* evaluations
  double theta{1.0};       // admissibility scaling of the first update
};

struct PseudoSettings {
  double tol{1e-12};  // relative growth of lambda treated as stationary
  int max_iter{50};
  WaveSpeedEstimate estimate{WaveSpeedEstimate::Default};
  Floors floors{};
};

/// Largest t in [0, 1] with u0 - t d inside {rho >= rho_min, rho e >= (rho e)_min}.
template <int Dim>
double admissibility_theta(const State<Dim>& u0, const State<Dim>& d, const Floors& floors);

/// |lambda|(u^-, u^+, n_k) per face point.
template <int Dim>
Eigen::VectorXd interface_wave_speeds(const StateBlock<Dim>& minus, const StateBlock<Dim>& plus,
                                      const std::vector<Vec<Dim>>& normals, const GasModel<double>& gas,
                                      WaveSpeedEstimate estimate);

template <int Dim>
PseudoEquilibrium<Dim> pseudo_equilibrium_global(const StateBlock<Dim>& minus, const Eigen::VectorXd& speeds,
                                                 const std::vector<Vec<Dim>>& normals, const Eigen::VectorXd& s,
                                                 const GasModel<double>& gas, const PseudoSettings& settings);

template <int Dim>
PseudoEquilibrium<Dim> pseudo_equilibrium_local(const StateBlock<Dim>& minus, const Eigen::VectorXd& speeds,
                                                const std::vector<Vec<Dim>>& normals, const Eigen::VectorXd& s,
                                                const GasModel<double>& gas, const PseudoSettings& settings);

/// || sum_k s_k h_{lambda_k}(u*, u^-_k, n_k) || / (S lambda_max max_k ||u^-_k||)
template <int Dim>
double flux_balance_residual(const PseudoEquilibrium<Dim>& pe, const StateBlock<Dim>& minus,
                             const std::vector<Vec<Dim>>& normals, const Eigen::VectorXd& s,
                             const GasModel<double>& gas);

/// Smallest ratio lambda*_k / |lambda|(u*, u^-_k, n_k); >= 1 when dominated.
template <int Dim>
double wave_speed_domination(const PseudoEquilibrium<Dim>& pe, const StateBlock<Dim>& minus,
                             const std::vector<Vec<Dim>>& normals, const GasModel<double>& gas,
                             WaveSpeedEstimate estimate);

/// max_k (s_k / beta_k) max(lambda*_k, speed_k); the step is admissible for
/// dt <= 1 / (2 * this).
double element_step_factor(const Eigen::VectorXd& s, const Eigen::VectorXd& beta, const Eigen::VectorXd& lambda,
                           const Eigen::VectorXd& speed);

/// U_k = u^-_k - (dt s_k / beta_k) (h_k - h_{lambda*_k}(u*, u^-_k, n_k)).
/// Throws IdpViolation if a candidate is not admissible.
template <int Dim>
StateBlock<Dim> candidate_updates(const StateBlock<Dim>& minus, const StateBlock<Dim>& flux,
                                  const PseudoEquilibrium<Dim>& pe, const std::vector<Vec<Dim>>& normals,
                                  const Eigen::VectorXd& s, const Eigen::VectorXd& beta, double dt,
                                  const GasModel<double>& gas, int element = -1);

struct Bounds {
  double rho;
  double rho_e;
};

/// Minimum of psi over the volume states at t^n and the candidate states.
template <int Dim>
Bounds compute_bounds(const StateBlock<Dim>& volume_states, const StateBlock<Dim>& candidates);

/// Smallest theta in [0, 1] so that (1 - theta) u(z) + theta avg meets the
/// bounds at every check point z. Density in closed form, rho e by bisection.
template <int Dim>
double limiter_theta(const StateBlock<Dim>& points, const State<Dim>& avg, const Bounds& bounds);

/// Relative slack min_z (psi(z) - m) / max(1, |m|) over both constraints.
template <int Dim>
double bound_slack(const StateBlock<Dim>& points, const Bounds& bounds);

/// Persson-Peraire style indicator: log10 of the share of density energy in
/// the modes of the highest degree p.
double smoothness_indicator(const Eigen::VectorXd& modes, const std::vector<int>& top_modes);

/// log10 threshold below which an element counts as smooth.
inline double smoothness_threshold(int p, double scale) { return -scale * std::log10(double(p) + 1.0); }

}  // namespace idpdg
