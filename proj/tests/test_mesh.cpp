#include "idpdg/geometry.hpp"

#include <doctest.h>

#include <sstream>

using namespace idpdg;

namespace {

Mesh<2> quad(int n, double distortion, int q, double rotation = 0.0) {
  QuadMeshSpec spec;
  spec.nx = spec.ny = n;
  spec.distortion = distortion;
  spec.mapping_degree = q;
  spec.rotation = rotation;
  return build_quad_mesh(spec);
}

}  // namespace

TEST_CASE("segment mesh") {
  const Mesh<1> m = build_segment_mesh(0.0, 1.0, 4);
  REQUIRE(m.num_elements() == 4);
  for (int e = 0; e < 4; ++e) {
    const double a = map_point<1>(m, e, Vec<1>(-1.0))(0), b = map_point<1>(m, e, Vec<1>(1.0))(0);
    CHECK(b - a == doctest::Approx(0.25).epsilon(1e-15));
  }
  CHECK(m.faces[0][0].tag == BoundaryTag::Outflow);
  CHECK(m.faces[1][0].element == 0);
  CHECK(m.faces[1][0].face == 1);

  const auto ref = make_reference_element<1>(SchemeKind::DGSEM, 3);
  const auto g = compute_geometry<1>(m, 2, ref, MetricEvaluation::Analytic);
  CHECK(g.face_weight[0] * g.normals[0](0) + g.face_weight[1] * g.normals[1](0) == 0.0);

  const Mesh<1> sod = build_segment_mesh(-0.5, 0.5, 100);
  CHECK(std::abs(map_point<1>(sod, 49, Vec<1>(1.0))(0)) < 1e-15);
}

TEST_CASE("undistorted quad mesh has constant jacobians") {
  const Mesh<2> m = quad(2, 0.0, 1);
  REQUIRE(m.num_elements() == 4);
  const auto ref = make_reference_element<2>(SchemeKind::DGSEM, 3);
  for (int e = 0; e < 4; ++e) {
    const auto g = compute_geometry<2>(m, e, ref, MetricEvaluation::Collocated);
    for (double J : g.jacobian) CHECK(J == doctest::Approx(1.0 / 16).epsilon(1e-14));
    CHECK(g.volume == doctest::Approx(0.25).epsilon(1e-14));
  }
}

TEST_CASE("reference square: unit jacobians and face weights") {
  QuadMeshSpec spec;
  spec.lower = Vec<2>(-1.0, -1.0);
  spec.upper = Vec<2>(1.0, 1.0);
  const Mesh<2> m = build_quad_mesh(spec);
  const auto ref = make_reference_element<2>(SchemeKind::DGSEM, 3);
  const auto g = compute_geometry<2>(m, 0, ref, MetricEvaluation::Collocated);
  for (double J : g.jacobian) CHECK(J == doctest::Approx(1.0).epsilon(1e-14));
  for (double Jf : g.surface_jacobian) CHECK(Jf == doctest::Approx(1.0).epsilon(1e-14));
  for (int k = 0; k < ref.num_face_points(); ++k)
    CHECK(g.face_weight[k] == doctest::Approx(ref.face_weights[k] / 4.0).epsilon(1e-14));
}

TEST_CASE("closure on distorted and rotated meshes") {
  for (SchemeKind scheme : {SchemeKind::DGSEM, SchemeKind::ModalDG}) {
    for (int q : {1, 2}) {
      const Mesh<2> m = quad(4, 0.1, q);
      CHECK_NOTHROW(check_jacobians<2>(m));
      const auto ref = make_reference_element<2>(scheme, 3);
      for (const auto& g : compute_geometry<2>(m, ref)) CHECK(verify_closure<2>(g) < 1e-12);
    }
    const auto ref = make_reference_element<2>(scheme, 2);
    const auto affine = compute_geometry<2>(quad(2, 0.0, 1, 0.7), ref);
    for (const auto& g : affine) CHECK(verify_closure<2>(g) < 1e-14);
  }
}

TEST_CASE("normals rotate with the mesh") {
  const auto ref = make_reference_element<2>(SchemeKind::DGSEM, 2);
  const double a = 0.7;
  const auto g0 = compute_geometry<2>(quad(1, 0.0, 1), 0, ref, MetricEvaluation::Collocated);
  const auto g1 = compute_geometry<2>(quad(1, 0.0, 1, a), 0, ref, MetricEvaluation::Collocated);
  Mat<2> R;
  R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  for (std::size_t k = 0; k < g0.normals.size(); ++k) CHECK((R * g0.normals[k] - g1.normals[k]).norm() < 1e-14);
  CHECK(g1.volume == doctest::Approx(g0.volume).epsilon(1e-14));
}

TEST_CASE("closure check detects a corrupted normal") {
  const auto ref = make_reference_element<2>(SchemeKind::DGSEM, 3);
  auto g = compute_geometry<2>(quad(2, 0.1, 2), 0, ref, MetricEvaluation::Collocated);
  g.normals[3] = -g.normals[3];
  CHECK(verify_closure<2>(g) > 0.5 * g.face_weight[3]);
}

TEST_CASE("element areas of straight quads are exact") {
  // trapezoids of the ramp mesh are straight-sided
  RampMeshSpec spec;
  spec.nx = 12;
  spec.ny = 4;
  const Mesh<2> m = build_ramp_mesh(spec);
  const auto ref = make_reference_element<2>(SchemeKind::DGSEM, 2);
  const auto geom = compute_geometry<2>(m, ref);
  for (int e = 0; e < m.num_elements(); ++e) {
    const auto c = face_corner_nodes<2>(m, e, 0);
    const auto d = face_corner_nodes<2>(m, e, 1);
    // shoelace over the corners in counterclockwise order
    const Vec<2> p[4] = {m.nodes[c[0]], m.nodes[d[0]], m.nodes[d[1]], m.nodes[c[1]]};
    double area = 0.0;
    for (int i = 0; i < 4; ++i) area += p[i](0) * p[(i + 1) % 4](1) - p[(i + 1) % 4](0) * p[i](1);
    CHECK(geom[e].volume == doctest::Approx(0.5 * area).epsilon(1e-12));
  }
}

TEST_CASE("interior faces agree on points and normals") {
  const Mesh<2> m = quad(3, 0.1, 2);
  for (SchemeKind scheme : {SchemeKind::DGSEM, SchemeKind::ModalDG}) {
    const auto ref = make_reference_element<2>(scheme, 3);
    const auto geom = compute_geometry<2>(m, ref);
    const auto partners = match_face_points<2>(m, geom, ref);
    int matched = 0;
    for (int e = 0; e < m.num_elements(); ++e) {
      for (int k = 0; k < ref.num_face_points(); ++k) {
        const TracePartner& tp = partners[e][k];
        if (tp.element < 0) continue;
        ++matched;
        CHECK((geom[e].face_points[k] - geom[tp.element].face_points[tp.point]).norm() < 1e-12);
        CHECK((geom[e].normals[k] + geom[tp.element].normals[tp.point]).norm() < 1e-12);
      }
    }
    CHECK(matched == 2 * 2 * 3 * ref.points_per_face * 2);
  }
}

TEST_CASE("ramp mesh boundary tags") {
  RampMeshSpec spec;
  spec.nx = 30;
  spec.ny = 10;
  const Mesh<2> m = build_ramp_mesh(spec);
  for (int e = 0; e < m.num_elements(); ++e) {
    const int i = e % spec.nx, j = e / spec.nx;
    const Vec<2> c = map_point<2>(m, e, Vec<2>::Zero());
    if (i == 0) CHECK(m.faces[e][0].tag == BoundaryTag::Inflow);
    if (i == spec.nx - 1) CHECK(m.faces[e][1].tag == BoundaryTag::Outflow);
    if (j == spec.ny - 1) CHECK(m.faces[e][3].tag == BoundaryTag::Symmetry);
    if (j == 0) CHECK(m.faces[e][2].tag == (c(0) < 0.0 ? BoundaryTag::Outflow : BoundaryTag::SlipWall));
  }
  // wedge foot at x = 0 on an element boundary, wall at 30 degrees
  const Vec<2> far = map_point<2>(m, spec.nx - 1, Vec<2>(1.0, -1.0));
  CHECK(far(1) == doctest::Approx(far(0) * std::tan(M_PI / 6)).epsilon(1e-12));
  CHECK_NOTHROW(check_jacobians<2>(m));
}

TEST_CASE("inverted elements are reported") {
  Mesh<2> m = quad(2, 0.0, 1);
  std::swap(m.elements[1][0], m.elements[1][1]);
  CHECK_THROWS_WITH_AS(check_jacobians<2>(m), doctest::Contains("1"), std::runtime_error);
}

TEST_CASE("mesh text format round trip") {
  for (int q : {1, 2}) {
    QuadMeshSpec spec;
    spec.nx = 3;
    spec.ny = 2;
    spec.distortion = 0.05;
    spec.mapping_degree = q;
    spec.tags = {BoundaryTag::Periodic, BoundaryTag::Periodic, BoundaryTag::SlipWall, BoundaryTag::Inflow};
    const Mesh<2> m = build_quad_mesh(spec);
    std::ostringstream a;
    write_mesh<2>(a, m);
    std::istringstream in(a.str());
    const Mesh<2> back = read_mesh<2>(in);
    std::ostringstream b;
    write_mesh<2>(b, back);
    CHECK(a.str() == b.str());
    REQUIRE(back.num_elements() == m.num_elements());
    for (int e = 0; e < m.num_elements(); ++e)
      for (int f = 0; f < 4; ++f) {
        CHECK(back.faces[e][f].tag == m.faces[e][f].tag);
        CHECK(back.faces[e][f].element == m.faces[e][f].element);
      }
  }
  const Mesh<1> seg = build_segment_mesh(0.0, 2.0, 5, BoundaryTag::Periodic, BoundaryTag::Periodic);
  std::ostringstream a;
  write_mesh<1>(a, seg);
  std::istringstream in(a.str());
  std::ostringstream b;
  write_mesh<1>(b, read_mesh<1>(in));
  CHECK(a.str() == b.str());
}

TEST_CASE("malformed mesh text is rejected") {
  std::istringstream in("MESH 2 1\nNODES 1\n0 0\nELEMS 1\n0 1 2\n");
  CHECK_THROWS(read_mesh<2>(in));
}
