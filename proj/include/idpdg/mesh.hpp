#pragma once

// Structured-generated, unstructured-stored meshes of segments (1D) and
// quadrilaterals (2D) with polynomial mappings of degree 1 or 2.
//
// Element nodes are a (q+1)^Dim tensor lattice on the reference element
// [-1,1]^Dim, first coordinate fastest. Local face f lies on the coordinate
// plane xi_{f/2} = (f % 2 ? +1 : -1).

#include "idpdg/physics.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace idpdg {

enum class BoundaryTag { Interior, Inflow, Outflow, SlipWall, Symmetry, Periodic };

std::string to_string(BoundaryTag tag);
BoundaryTag parse_boundary_tag(const std::string& name);

struct FaceLink {
  int element{-1};  // neighbour element (interior and periodic faces)
  int face{-1};     // neighbour's local face
  BoundaryTag tag{BoundaryTag::Interior};
};

template <int Dim>
struct Mesh {
  static constexpr int faces_per_element = 2 * Dim;
  int mapping_degree{1};
  std::vector<Vec<Dim>> nodes;
  std::vector<std::vector<int>> elements;
  std::vector<std::array<FaceLink, 2 * Dim>> faces;

  int num_elements() const { return static_cast<int>(elements.size()); }
  int nodes_per_element() const;
};

/// Physical point x(xi) and the Jacobian matrix dx/dxi of element e.
template <int Dim>
Vec<Dim> map_point(const Mesh<Dim>& mesh, int e, const Vec<Dim>& xi);
template <int Dim>
Eigen::Matrix<double, Dim, Dim> map_jacobian(const Mesh<Dim>& mesh, int e, const Vec<Dim>& xi);

/// Reference coordinates of the mapping nodes of one element, tensor order.
template <int Dim>
std::vector<Vec<Dim>> reference_lattice(int degree);

/// Node ids of the end points (1D) or end vertices (2D) of a local face.
template <int Dim>
std::vector<int> face_corner_nodes(const Mesh<Dim>& mesh, int e, int f);

/// Pairs up interior faces by shared corner nodes. Faces already marked as
/// boundary or periodic are left alone; every other face must find a partner.
template <int Dim>
void connect_faces(Mesh<Dim>& mesh);

/// Throws std::runtime_error listing elements whose Jacobian determinant is
/// not strictly positive at a (q+2)^Dim Gauss sampling.
template <int Dim>
void check_jacobians(const Mesh<Dim>& mesh);

Mesh<1> build_segment_mesh(double a, double b, int n, BoundaryTag left = BoundaryTag::Outflow,
                           BoundaryTag right = BoundaryTag::Outflow);

struct QuadMeshSpec {
  int nx{1}, ny{1};
  Vec<2> lower{0.0, 0.0};
  Vec<2> upper{1.0, 1.0};
  double distortion{0.0};  // amplitude of the sin(2 pi s) sin(2 pi t) node shift
  double rotation{0.0};    // rigid rotation about the origin, radians
  int mapping_degree{1};
  std::array<BoundaryTag, 4> tags{BoundaryTag::Outflow, BoundaryTag::Outflow,
                                  BoundaryTag::Outflow, BoundaryTag::Outflow};  // left right bottom top
};

Mesh<2> build_quad_mesh(const QuadMeshSpec& spec);

/// Channel over a 30 degree wedge whose foot is at x = 0:
/// bottom y = 0 for x < 0 and y = x tan 30 for x >= 0, top y = height.
struct RampMeshSpec {
  int nx{166}, ny{50};
  double x_min{-0.5};
  double x_max{2.5};
  double height{2.0};
  double angle_degrees{30.0};
  int mapping_degree{1};
};

Mesh<2> build_ramp_mesh(const RampMeshSpec& spec);

/// Line-oriented text format with MESH / NODES / ELEMS / BOUNDARY sections.
template <int Dim>
void write_mesh(std::ostream& os, const Mesh<Dim>& mesh);
template <int Dim>
Mesh<Dim> read_mesh(std::istream& is);

}  // namespace idpdg
