#pragma once

// 1D Gauss rules, tensor-product rules on [-1,1]^d, Legendre polynomials and
// Lagrange interpolation on a node set.

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace idpdg {

struct Rule1D {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

Rule1D gauss_legendre(int n);
Rule1D gauss_lobatto(int n);

/// P_n(x) and P_n'(x), standard normalization P_n(1) = 1.
std::pair<double, double> legendre(int n, double x);

/// sqrt((2n+1)/2) P_n, orthonormal on [-1, 1]; value and derivative.
std::pair<double, double> normalized_legendre(int n, double x);

/// Values of the Lagrange polynomials on `nodes` at x.
Eigen::VectorXd lagrange_values(const Eigen::VectorXd& nodes, double x);

/// Derivatives of the Lagrange polynomials on `nodes` at x.
Eigen::VectorXd lagrange_derivatives(const Eigen::VectorXd& nodes, double x);

/// D_ij = l_j'(nodes_i).
Eigen::MatrixXd derivative_matrix(const Eigen::VectorXd& nodes);

/// Tensor-product rule on [-1,1]^Dim; point index i = i_1 + n i_2 (first
/// coordinate fastest). Dim = 0 gives the single-point rule of weight 1.
template <int Dim>
struct TensorRule {
  std::vector<std::array<double, (Dim > 0 ? Dim : 1)>> points;
  std::vector<double> weights;
  int size() const { return static_cast<int>(weights.size()); }
};

template <int Dim>
TensorRule<Dim> tensor_rule(const Rule1D& rule) {
  TensorRule<Dim> t;
  if constexpr (Dim == 0) {
    t.points.push_back({0.0});
    t.weights.push_back(1.0);
  } else {
    const int n = rule.size();
    int total = 1;
    for (int d = 0; d < Dim; ++d) total *= n;
    for (int idx = 0; idx < total; ++idx) {
      std::array<double, Dim> x{};
      double w = 1.0;
      int r = idx;
      for (int d = 0; d < Dim; ++d) {
        x[d] = rule.nodes(r % n);
        w *= rule.weights(r % n);
        r /= n;
      }
      t.points.push_back(x);
      t.weights.push_back(w);
    }
  }
  return t;
}

}  // namespace idpdg
