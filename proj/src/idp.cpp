#include "idpdg/idp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace idpdg {

std::string to_string(LimiterMode mode) {
  switch (mode) {
    case LimiterMode::None: return "none";
    case LimiterMode::POS: return "pos";
    case LimiterMode::IDP: return "idp";
    case LimiterMode::IDPloc: return "idploc";
  }
  return "?";
}

LimiterMode parse_limiter_mode(const std::string& name) {
  if (name == "none") return LimiterMode::None;
  if (name == "pos") return LimiterMode::POS;
  if (name == "idp") return LimiterMode::IDP;
  if (name == "idploc") return LimiterMode::IDPloc;
  throw std::invalid_argument("unknown limiter '" + name + "' (expected none, pos, idp or idploc)");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest positive root of a t^2 + b t + c with c > 0; +inf if none.
double first_positive_root(double a, double b, double c) {
  if (a == 0.0) return b < 0.0 ? -c / b : kInf;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return kInf;
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  double best = kInf;
  const double r1 = q / a;
  if (r1 > 0.0) best = std::min(best, r1);
  if (q != 0.0) {
    const double r2 = c / q;
    if (r2 > 0.0) best = std::min(best, r2);
  }
  return best;
}

// lambda stays put if the new estimate is covered with relative margin tol,
// otherwise it jumps to the estimate plus a 2 tol margin. This keeps every
// accepted lambda strictly above the estimate it was checked against and
// makes the stopping test exact.
bool grow(double& lambda, double estimate, double tol) {
  if (estimate * (1.0 + tol) <= lambda) return false;
  lambda = estimate * (1.0 + 2.0 * tol);
  return true;
}

template <int Dim>
Floors interior_floors(const State<Dim>& u) {
  return Floors{0.1 * u(0), 0.1 * internal_energy_density<double, Dim>(u)};
}

std::string pseudo_failure(const char* which, int iterations, const Eigen::VectorXd& lambda) {
  std::ostringstream os;
  os.precision(17);
  os << which << " pseudo-equilibrium did not converge in " << iterations << " iterations; lambda = ["
     << lambda.transpose() << "]";
  return os.str();
}

}  // namespace

template <int Dim>
double admissibility_theta(const State<Dim>& u0, const State<Dim>& d, const Floors& floors) {
  const double rho0 = u0(0);
  const double re0 = internal_energy_density<double, Dim>(u0);
  if (!(rho0 >= floors.rho) || !(re0 >= floors.rho_e))
    throw std::invalid_argument("admissibility_theta: base state violates the floors " + describe<Dim>(u0));
  double t = 1.0;
  const double drho = d(0);
  if (drho > 0.0) t = std::min(t, (rho0 - floors.rho) / drho);
  // 2 rho (rho e - eps) along u0 - t d is the quadratic a t^2 + b t + c.
  const Vec<Dim> m0 = momentum<double, Dim>(u0), dm = d.template segment<Dim>(1);
  const double E0 = total_energy<double, Dim>(u0), dE = d(Dim + 1);
  const double eps = floors.rho_e;
  const double a = 2.0 * drho * dE - dm.squaredNorm();
  const double b = -2.0 * (rho0 * dE + E0 * drho) + 2.0 * m0.dot(dm) + 2.0 * eps * drho;
  const double c = 2.0 * rho0 * E0 - m0.squaredNorm() - 2.0 * eps * rho0;
  if (c <= 0.0) return 0.0;
  t = std::min(t, first_positive_root(a, b, c));
  return std::max(t, 0.0);
}

template <int Dim>
Eigen::VectorXd interface_wave_speeds(const StateBlock<Dim>& minus, const StateBlock<Dim>& plus,
                                      const std::vector<Vec<Dim>>& normals, const GasModel<double>& gas,
                                      WaveSpeedEstimate estimate) {
  Eigen::VectorXd out(minus.cols());
  for (int k = 0; k < minus.cols(); ++k)
    out(k) = max_wave_speed<double, Dim>(minus.col(k), plus.col(k), normals[k], gas, estimate);
  return out;
}

template <int Dim>
PseudoEquilibrium<Dim> pseudo_equilibrium_global(const StateBlock<Dim>& minus, const Eigen::VectorXd& speeds,
                                                 const std::vector<Vec<Dim>>& normals, const Eigen::VectorXd& s,
                                                 const GasModel<double>& gas, const PseudoSettings& cfg) {
  const int nf = static_cast<int>(minus.cols());
  const Eigen::VectorXd gamma = s / s.sum();
  State<Dim> u0 = State<Dim>::Zero(), F = State<Dim>::Zero();
  for (int k = 0; k < nf; ++k) {
    u0 += gamma(k) * minus.col(k);
    F += gamma(k) * physical_flux<double, Dim>(minus.col(k), normals[k], gas);
  }
  auto max_speed_from = [&](const State<Dim>& u) {
    double m = 0.0;
    for (int k = 0; k < nf; ++k)
      m = std::max(m, max_wave_speed<double, Dim>(u, minus.col(k), normals[k], gas, cfg.estimate));
    return m;
  };
  const double a = speeds.maxCoeff();
  const double b = max_speed_from(u0);
  const double lambda1 = std::max(a, b);

  PseudoEquilibrium<Dim> pe;
  pe.theta = admissibility_theta<Dim>(u0, F / lambda1, interior_floors<Dim>(u0));
  if (!(pe.theta > 0.0)) throw std::runtime_error("pseudo-equilibrium: zero admissibility scaling");
  double lambda = a / pe.theta;
  grow(lambda, b / pe.theta, cfg.tol);
  State<Dim> u = u0 - F / lambda;
  pe.iterations = 1;
  while (grow(lambda, max_speed_from(u) / pe.theta, cfg.tol)) {
    if (pe.iterations >= cfg.max_iter)
      throw std::runtime_error(pseudo_failure("global", pe.iterations, Eigen::VectorXd::Constant(1, lambda)));
    u = u0 - F / lambda;
    ++pe.iterations;
  }
  pe.u_star = u;
  pe.lambda = Eigen::VectorXd::Constant(nf, lambda);
  return pe;
}

template <int Dim>
PseudoEquilibrium<Dim> pseudo_equilibrium_local(const StateBlock<Dim>& minus, const Eigen::VectorXd& speeds,
                                                const std::vector<Vec<Dim>>& normals, const Eigen::VectorXd& s,
                                                const GasModel<double>& gas, const PseudoSettings& cfg) {
  const int nf = static_cast<int>(minus.cols());
  const Eigen::VectorXd gamma = s / s.sum();
  StateBlock<Dim> f(Dim + 2, nf);
  State<Dim> u0 = State<Dim>::Zero();
  for (int k = 0; k < nf; ++k) {
    u0 += gamma(k) * minus.col(k);
    f.col(k) = physical_flux<double, Dim>(minus.col(k), normals[k], gas);
  }
  Eigen::VectorXd b(nf), lt(nf);
  for (int k = 0; k < nf; ++k) {
    b(k) = max_wave_speed<double, Dim>(u0, minus.col(k), normals[k], gas, cfg.estimate);
    lt(k) = std::max(speeds(k), b(k));
  }
  const Eigen::VectorXd w = gamma.cwiseProduct(lt) / gamma.dot(lt);
  State<Dim> uw = State<Dim>::Zero(), d = State<Dim>::Zero();
  for (int k = 0; k < nf; ++k) {
    uw += w(k) * minus.col(k);
    d += w(k) / lt(k) * f.col(k);
  }
  PseudoEquilibrium<Dim> pe;
  pe.theta = admissibility_theta<Dim>(uw, d, interior_floors<Dim>(uw));
  if (!(pe.theta > 0.0)) throw std::runtime_error("pseudo-equilibrium: zero admissibility scaling");

  Eigen::VectorXd lambda = speeds / pe.theta;
  for (int k = 0; k < nf; ++k) grow(lambda(k), b(k) / pe.theta, cfg.tol);
  auto update = [&] {
    State<Dim> num = State<Dim>::Zero();
    for (int k = 0; k < nf; ++k) num += gamma(k) * (lambda(k) * minus.col(k) - f.col(k));
    return State<Dim>(num / gamma.dot(lambda));
  };
  State<Dim> u = update();
  pe.iterations = 1;
  for (;;) {
    bool moved = false;
    for (int k = 0; k < nf; ++k)
      moved |= grow(lambda(k), max_wave_speed<double, Dim>(u, minus.col(k), normals[k], gas, cfg.estimate) / pe.theta,
                    cfg.tol);
    if (!moved) break;
    if (pe.iterations >= cfg.max_iter) throw std::runtime_error(pseudo_failure("local", pe.iterations, lambda));
    u = update();
    ++pe.iterations;
  }
  pe.u_star = u;
  pe.lambda = lambda;
  return pe;
}

template <int Dim>
double flux_balance_residual(const PseudoEquilibrium<Dim>& pe, const StateBlock<Dim>& minus,
                             const std::vector<Vec<Dim>>& normals, const Eigen::VectorXd& s,
                             const GasModel<double>& gas) {
  State<Dim> sum = State<Dim>::Zero();
  double umax = 0.0;
  for (int k = 0; k < minus.cols(); ++k) {
    sum += s(k) * rusanov_flux<double, Dim>(pe.u_star, minus.col(k), normals[k], pe.lambda(k), gas, false);
    umax = std::max(umax, minus.col(k).norm());
  }
  return sum.norm() / (s.sum() * pe.lambda.maxCoeff() * umax);
}

template <int Dim>
double wave_speed_domination(const PseudoEquilibrium<Dim>& pe, const StateBlock<Dim>& minus,
                             const std::vector<Vec<Dim>>& normals, const GasModel<double>& gas,
                             WaveSpeedEstimate estimate) {
  double ratio = kInf;
  for (int k = 0; k < minus.cols(); ++k)
    ratio = std::min(ratio, pe.lambda(k) / max_wave_speed<double, Dim>(pe.u_star, minus.col(k), normals[k], gas, estimate));
  return ratio;
}

double element_step_factor(const Eigen::VectorXd& s, const Eigen::VectorXd& beta, const Eigen::VectorXd& lambda,
                           const Eigen::VectorXd& speed) {
  double factor = 0.0;
  for (int k = 0; k < s.size(); ++k) {
    const double l = lambda.size() ? std::max(lambda(k), speed(k)) : speed(k);
    factor = std::max(factor, s(k) / beta(k) * l);
  }
  return factor;
}

template <int Dim>
StateBlock<Dim> candidate_updates(const StateBlock<Dim>& minus, const StateBlock<Dim>& flux,
                                  const PseudoEquilibrium<Dim>& pe, const std::vector<Vec<Dim>>& normals,
                                  const Eigen::VectorXd& s, const Eigen::VectorXd& beta, double dt,
                                  const GasModel<double>& gas, int element) {
  StateBlock<Dim> U(Dim + 2, minus.cols());
  for (int k = 0; k < minus.cols(); ++k) {
    const State<Dim> hstar = rusanov_flux<double, Dim>(pe.u_star, minus.col(k), normals[k], pe.lambda(k), gas, false);
    U.col(k) = minus.col(k) - (dt * s(k) / beta(k)) * (flux.col(k) - hstar);
    if (!is_admissible<double, Dim>(U.col(k)))
      throw IdpViolation("IDP violation: inadmissible candidate state " + describe<Dim>(U.col(k)) +
                             (element >= 0 ? " in element " + std::to_string(element) : std::string()),
                         element);
  }
  return U;
}

template <int Dim>
Bounds compute_bounds(const StateBlock<Dim>& volume_states, const StateBlock<Dim>& candidates) {
  Bounds m{kInf, kInf};
  for (const auto* block : {&volume_states, &candidates}) {
    for (int i = 0; i < block->cols(); ++i) {
      const State<Dim> u = block->col(i);
      m.rho = std::min(m.rho, u(0));
      m.rho_e = std::min(m.rho_e, internal_energy_density<double, Dim>(u));
    }
  }
  return m;
}

template <int Dim>
double limiter_theta(const StateBlock<Dim>& points, const State<Dim>& avg, const Bounds& bounds) {
  double theta = 0.0;
  const double rho_avg = avg(0);
  for (int i = 0; i < points.cols(); ++i) {
    const State<Dim> u = points.col(i);
    if (u(0) < bounds.rho) {
      const double gap = rho_avg - u(0);
      theta = std::max(theta, gap > 0.0 ? std::min(1.0, (bounds.rho - u(0)) / gap) : 1.0);
    }
    auto ok = [&](double t) {
      return internal_energy_density<double, Dim>(State<Dim>((1.0 - t) * u + t * avg)) >= bounds.rho_e;
    };
    if (theta < 1.0 && !ok(theta)) {
      double lo = theta, hi = 1.0;
      if (!ok(hi)) return 1.0;
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? hi : lo) = mid;
      }
      theta = hi;
    }
  }
  return theta;
}

template <int Dim>
double bound_slack(const StateBlock<Dim>& points, const Bounds& bounds) {
  double slack = kInf;
  for (int i = 0; i < points.cols(); ++i) {
    const State<Dim> u = points.col(i);
    slack = std::min(slack, (u(0) - bounds.rho) / std::max(1.0, std::abs(bounds.rho)));
    slack = std::min(slack, (internal_energy_density<double, Dim>(u) - bounds.rho_e) /
                                std::max(1.0, std::abs(bounds.rho_e)));
  }
  return slack;
}

double smoothness_indicator(const Eigen::VectorXd& modes, const std::vector<int>& top_modes) {
  const double total = modes.squaredNorm();
  double top = 0.0;
  for (int j : top_modes) top += modes(j) * modes(j);
  if (!(total > 0.0) || top == 0.0) return -kInf;
  return std::log10(top / total);
}

#define IDPDG_INSTANTIATE(D)                                                                                   \
  template double admissibility_theta<D>(const State<D>&, const State<D>&, const Floors&);                    \
  template Eigen::VectorXd interface_wave_speeds<D>(const StateBlock<D>&, const StateBlock<D>&,               \
                                                    const std::vector<Vec<D>>&, const GasModel<double>&,      \
                                                    WaveSpeedEstimate);                                        \
  template PseudoEquilibrium<D> pseudo_equilibrium_global<D>(const StateBlock<D>&, const Eigen::VectorXd&,    \
                                                             const std::vector<Vec<D>>&,                       \
                                                             const Eigen::VectorXd&, const GasModel<double>&,  \
                                                             const PseudoSettings&);                           \
  template PseudoEquilibrium<D> pseudo_equilibrium_local<D>(const StateBlock<D>&, const Eigen::VectorXd&,     \
                                                            const std::vector<Vec<D>>&,                        \
                                                            const Eigen::VectorXd&, const GasModel<double>&,   \
                                                            const PseudoSettings&);                            \
  template double flux_balance_residual<D>(const PseudoEquilibrium<D>&, const StateBlock<D>&,                 \
                                           const std::vector<Vec<D>>&, const Eigen::VectorXd&,                \
                                           const GasModel<double>&);                                           \
  template double wave_speed_domination<D>(const PseudoEquilibrium<D>&, const StateBlock<D>&,                 \
                                           const std::vector<Vec<D>>&, const GasModel<double>&,               \
                                           WaveSpeedEstimate);                                                 \
  template StateBlock<D> candidate_updates<D>(const StateBlock<D>&, const StateBlock<D>&,                     \
                                              const PseudoEquilibrium<D>&, const std::vector<Vec<D>>&,        \
                                              const Eigen::VectorXd&, const Eigen::VectorXd&, double,         \
                                              const GasModel<double>&, int);                                   \
  template Bounds compute_bounds<D>(const StateBlock<D>&, const StateBlock<D>&);                              \
  template double limiter_theta<D>(const StateBlock<D>&, const State<D>&, const Bounds&);                     \
  template double bound_slack<D>(const StateBlock<D>&, const Bounds&);

IDPDG_INSTANTIATE(1)
IDPDG_INSTANTIATE(2)

}  // namespace idpdg
