#pragma once

// Reference point layouts of the two schemes and per-element metric data:
// Jacobians, contravariant metric vectors, face normals and face weights.

#include "idpdg/mesh.hpp"
#include "idpdg/quadrature.hpp"

#include <vector>

namespace idpdg {

enum class SchemeKind { ModalDG, DGSEM };

std::string to_string(SchemeKind kind);
SchemeKind parse_scheme(const std::string& name);

template <int Dim>
using Mat = Eigen::Matrix<double, Dim, Dim>;

/// Volume and face point layout on [-1,1]^Dim.
/// Modal DG: Gauss (p+2)^Dim volume points, Gauss p+2 points per face.
/// DGSEM: Lobatto (p+1)^Dim nodes; face points are the nodes on each face.
template <int Dim>
struct ReferenceElement {
  SchemeKind scheme{SchemeKind::DGSEM};
  int degree{0};
  Rule1D line;                         // 1D rule the tensor rules derive from
  std::vector<Vec<Dim>> volume_points;
  std::vector<double> volume_weights;
  int points_per_face{1};
  std::vector<Vec<Dim>> face_points;   // face-major: face f owns [f*ppf, (f+1)*ppf)
  std::vector<double> face_weights;
  std::vector<int> face_node;          // DGSEM: volume node collocated with each face point
  Eigen::MatrixXd derivative;          // DGSEM: D_ij = l_j'(zeta_i)

  int num_volume_points() const { return static_cast<int>(volume_points.size()); }
  int num_face_points() const { return static_cast<int>(face_points.size()); }
};

template <int Dim>
ReferenceElement<Dim> make_reference_element(SchemeKind scheme, int degree);

template <int Dim>
struct ElementGeometry {
  double volume{};                       // |kappa| = sum w_i J_i
  std::vector<double> jacobian;          // J at volume points
  std::vector<Vec<Dim>> points;          // physical volume points
  std::vector<Mat<Dim>> metric;          // column j = J grad(xi_j) at volume points
  std::vector<Vec<Dim>> face_points;     // physical face points
  std::vector<Vec<Dim>> normals;         // outward unit normals
  std::vector<double> surface_jacobian;  // J_f
  std::vector<double> face_weight;       // s_k = w_k^f J_f / |kappa|
};

enum class MetricEvaluation {
  Analytic,    // mapping derivatives evaluated at each point
  Collocated,  // derivative matrix applied to nodal coordinates (DGSEM)
};

template <int Dim>
ElementGeometry<Dim> compute_geometry(const Mesh<Dim>& mesh, int e, const ReferenceElement<Dim>& ref,
                                      MetricEvaluation eval);

template <int Dim>
std::vector<ElementGeometry<Dim>> compute_geometry(const Mesh<Dim>& mesh,
                                                   const ReferenceElement<Dim>& ref);

/// || sum_k s_k n_k ||
template <int Dim>
double verify_closure(const ElementGeometry<Dim>& geom);

/// Where the exterior trace of each face point comes from.
struct TracePartner {
  int element{-1};  // -1 on physical boundaries
  int point{-1};    // face-point index inside `element`
  BoundaryTag tag{BoundaryTag::Interior};
};

/// Pairs face points across interior and periodic faces by position
/// (periodic partners are compared after removing the face-centroid shift).
template <int Dim>
std::vector<std::vector<TracePartner>> match_face_points(const Mesh<Dim>& mesh,
                                                          const std::vector<ElementGeometry<Dim>>& geom,
                                                          const ReferenceElement<Dim>& ref);

}  // namespace idpdg
