#pragma once

// Element-orthonormal modal bases and the boundary-inclusive cell-average
// quadrature <u> = sum_i nu_i u(y_i) + sum_k beta_k u^-(x_k).

#include "idpdg/geometry.hpp"

#include <vector>

namespace idpdg {

/// Multi-indices of the tensor Legendre space Q^p, sorted so that modes of
/// the highest one-dimensional degree p come last.
template <int Dim>
std::vector<std::array<int, Dim>> modal_indices(int p);

/// Product of normalized Legendre polynomials and its reference gradient.
template <int Dim>
double reference_mode(const std::array<int, Dim>& idx, const Vec<Dim>& xi, Vec<Dim>* grad = nullptr);

/// Basis of Q^p on one element, orthonormal for sum_i varpi_i f(y_i) g(y_i)
/// with varpi_i = w_i J_i / |kappa|, so phi_0 = 1 and the mass is |kappa| per mode.
/// phi = phi_ref * transform.
template <int Dim>
struct ModalBasis {
  Eigen::MatrixXd transform;        // Np x Np, upper triangular
  Eigen::MatrixXd volume_values;    // Nv x Np
  Eigen::MatrixXd face_values;      // Nf x Np
  std::array<Eigen::MatrixXd, Dim> volume_gradients;  // reference d/dxi_j, Nv x Np

  int size() const { return static_cast<int>(transform.cols()); }
};

template <int Dim>
ModalBasis<Dim> build_modal_basis(const ReferenceElement<Dim>& ref, const ElementGeometry<Dim>& geom);

/// varpi_i = w_i J_i / |kappa|
template <int Dim>
Eigen::VectorXd normalized_volume_weights(const ReferenceElement<Dim>& ref, const ElementGeometry<Dim>& geom);

struct CellAverageRule {
  Eigen::VectorXd nu;     // volume coefficients
  Eigen::VectorXd beta;   // face coefficients
  Eigen::VectorXd alpha;  // representation weights (modal construction only)
  double epsilon{};       // min_k beta_k / s_k
};

/// alpha_i = varpi_i sum_j sum_k s_k phi_j(x_k) phi_j(y_i). Throws
/// "quadrature not product-exact" when the Gram matrix is not the identity.
Eigen::VectorXd compute_alpha(const Eigen::MatrixXd& volume_values, const Eigen::MatrixXd& face_values,
                              const Eigen::VectorXd& varpi, const Eigen::VectorXd& s);

/// eps = min_{alpha_i > 0} varpi_i / alpha_i, nu = varpi - eps alpha, beta = eps s.
CellAverageRule build_cell_average_rule(const Eigen::VectorXd& alpha, const Eigen::VectorXd& varpi,
                                        const Eigen::VectorXd& s);

/// DGSEM split: interior Lobatto nodes keep their weight, each boundary node's
/// weight is shared equally by the faces it lies on.
template <int Dim>
CellAverageRule dgsem_boundary_split(const ReferenceElement<Dim>& ref, const ElementGeometry<Dim>& geom);

}  // namespace idpdg
