#include "idpdg/output.hpp"

#include <charconv>
#include <limits>

namespace idpdg {

namespace {

// Shortest representation that reads back to the same double.
std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_profile_csv(std::ostream& os, const SchemeOperator<1>& op, const Field<1>& U, int samples) {
  const auto& gas = op.settings().gas;
  os << "x,rho,u,p\n";
  for (int e = 0; e < op.num_elements(); ++e) {
    for (int i = 0; i < samples; ++i) {
      const Vec<1> xi(-1.0 + 2.0 * i / (samples - 1));
      const Vec<1> x = map_point(op.mesh(), e, xi);
      const auto w = to_primitive<double, 1>(op.evaluate(U, e, xi), gas);
      os << num(x(0)) << ',' << num(w.rho) << ',' << num(w.velocity(0)) << ',' << num(w.pressure) << '\n';
    }
  }
}

template <int Dim>
double l1_density_error(const SchemeOperator<Dim>& op, const Field<Dim>& U,
                        const std::function<State<Dim>(const Vec<Dim>&)>& exact) {
  const TensorRule<Dim> rule = tensor_rule<Dim>(gauss_legendre(12));
  double err = 0.0;
  for (int e = 0; e < op.num_elements(); ++e) {
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const Vec<Dim> xi = Eigen::Map<const Vec<Dim>>(rule.points[q].data());
      const double J = map_jacobian(op.mesh(), e, xi).determinant();
      const double rho = op.evaluate(U, e, xi)(0);
      err += rule.weights[q] * J * std::abs(rho - exact(map_point(op.mesh(), e, xi))(0));
    }
  }
  return err;
}

void write_vtk(std::ostream& os, const SchemeOperator<2>& op, const Field<2>& U, int sub, const std::string& title) {
  const auto& gas = op.settings().gas;
  const int ne = op.num_elements();
  const int n = sub + 1;
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << ne * n * n << " double\n";
  std::vector<PrimitiveState<double, 2>> w;
  w.reserve(ne * n * n);
  for (int e = 0; e < ne; ++e) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const Vec<2> xi(-1.0 + 2.0 * i / sub, -1.0 + 2.0 * j / sub);
        const Vec<2> x = map_point(op.mesh(), e, xi);
        os << num(x(0)) << ' ' << num(x(1)) << " 0\n";
        w.push_back(to_primitive<double, 2>(op.evaluate(U, e, xi), gas));
      }
    }
  }
  const int cells = ne * sub * sub;
  os << "CELLS " << cells << ' ' << 5 * cells << '\n';
  for (int e = 0; e < ne; ++e) {
    const int base = e * n * n;
    for (int j = 0; j < sub; ++j)
      for (int i = 0; i < sub; ++i) {
        const int a = base + j * n + i;
        os << "4 " << a << ' ' << a + 1 << ' ' << a + 1 + n << ' ' << a + n << '\n';
      }
  }
  os << "CELL_TYPES " << cells << '\n';
  for (int c = 0; c < cells; ++c) os << "9\n";
  os << "POINT_DATA " << w.size() << "\nSCALARS rho double 1\nLOOKUP_TABLE default\n";
  for (const auto& s : w) os << num(s.rho) << '\n';
  os << "VECTORS velocity double\n";
  for (const auto& s : w) os << num(s.velocity(0)) << ' ' << num(s.velocity(1)) << " 0\n";
  os << "SCALARS p double 1\nLOOKUP_TABLE default\n";
  for (const auto& s : w) os << num(s.pressure) << '\n';
}

void write_stats_csv(std::ostream& os, const Diagnostics& diag) {
  os << "step,time,dt,retries,activations,theta_mean,theta_max,iteration_mean\n";
  for (const auto& s : diag.steps)
    os << s.step << ',' << num(s.time) << ',' << num(s.dt) << ',' << s.retries << ',' << s.activations << ','
       << num(s.theta_mean) << ',' << num(s.theta_max) << ',' << num(s.iteration_mean) << '\n';
}

template <int Dim>
DensityRange density_range(const SchemeOperator<Dim>& op, const Field<Dim>& U) {
  DensityRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (int e = 0; e < op.num_elements(); ++e) {
    const Field<Dim> pts = op.check_states(U, e);
    r.min = std::min(r.min, pts.row(0).minCoeff());
    r.max = std::max(r.max, pts.row(0).maxCoeff());
  }
  return r;
}

template double l1_density_error<1>(const SchemeOperator<1>&, const Field<1>&,
                                    const std::function<State<1>(const Vec<1>&)>&);
template double l1_density_error<2>(const SchemeOperator<2>&, const Field<2>&,
                                    const std::function<State<2>(const Vec<2>&)>&);
template DensityRange density_range<1>(const SchemeOperator<1>&, const Field<1>&);
template DensityRange density_range<2>(const SchemeOperator<2>&, const Field<2>&);

}  // namespace idpdg
