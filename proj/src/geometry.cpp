#include "idpdg/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace idpdg {

std::string to_string(SchemeKind kind) { return kind == SchemeKind::ModalDG ? "modal_dg" : "dgsem"; }

SchemeKind parse_scheme(const std::string& name) {
  if (name == "modal_dg") return SchemeKind::ModalDG;
  if (name == "dgsem") return SchemeKind::DGSEM;
  throw std::invalid_argument("unknown scheme '" + name + "' (expected modal_dg or dgsem)");
}

namespace {

template <int Dim>
Mat<Dim> contravariant(const Mat<Dim>& A) {
  if constexpr (Dim == 1) {
    return Mat<1>::Identity();
  } else {
    Mat<2> M;
    M << A(1, 1), -A(1, 0), -A(0, 1), A(0, 0);
    return M;
  }
}

}  // namespace

template <int Dim>
ReferenceElement<Dim> make_reference_element(SchemeKind scheme, int p) {
  if (p < 1) throw std::invalid_argument("polynomial degree must be at least 1");
  ReferenceElement<Dim> ref;
  ref.scheme = scheme;
  ref.degree = p;
  ref.line = scheme == SchemeKind::ModalDG ? gauss_legendre(p + 2) : gauss_lobatto(p + 1);
  const int n = ref.line.size();
  const auto vol = tensor_rule<Dim>(ref.line);
  for (int i = 0; i < vol.size(); ++i) {
    Vec<Dim> x;
    for (int d = 0; d < Dim; ++d) x(d) = vol.points[i][d];
    ref.volume_points.push_back(x);
    ref.volume_weights.push_back(vol.weights[i]);
  }
  ref.points_per_face = Dim == 1 ? 1 : n;
  for (int f = 0; f < 2 * Dim; ++f) {
    const int dir = f / 2;
    const double side = (f % 2) ? 1.0 : -1.0;
    for (int i = 0; i < ref.points_per_face; ++i) {
      Vec<Dim> x;
      x(dir) = side;
      double w = 1.0;
      if constexpr (Dim == 2) {
        x(1 - dir) = ref.line.nodes(i);
        w = ref.line.weights(i);
      }
      ref.face_points.push_back(x);
      ref.face_weights.push_back(w);
      if (scheme == SchemeKind::DGSEM) {
        std::array<int, 2> idx{0, 0};
        idx[dir] = (f % 2) ? n - 1 : 0;
        if constexpr (Dim == 2) idx[1 - dir] = i;
        ref.face_node.push_back(Dim == 1 ? idx[0] : idx[0] + n * idx[1]);
      }
    }
  }
  if (scheme == SchemeKind::DGSEM) ref.derivative = derivative_matrix(ref.line.nodes);
  return ref;
}

template <int Dim>
ElementGeometry<Dim> compute_geometry(const Mesh<Dim>& mesh, int e, const ReferenceElement<Dim>& ref,
                                      MetricEvaluation eval) {
  ElementGeometry<Dim> g;
  const int nv = ref.num_volume_points();
  std::vector<Mat<Dim>> jac(nv);
  g.points.resize(nv);
  for (int i = 0; i < nv; ++i) g.points[i] = map_point(mesh, e, ref.volume_points[i]);
  if (eval == MetricEvaluation::Analytic) {
    for (int i = 0; i < nv; ++i) jac[i] = map_jacobian(mesh, e, ref.volume_points[i]);
  } else {
    if (ref.scheme != SchemeKind::DGSEM) throw std::invalid_argument("collocated metrics need the DGSEM layout");
    const int n = ref.line.size();
    const auto& D = ref.derivative;
    for (int i = 0; i < nv; ++i) {
      jac[i].setZero();
      const int a = i % n;
      const int b = Dim == 2 ? i / n : 0;
      for (int l = 0; l < n; ++l) {
        jac[i].col(0) += D(a, l) * g.points[l + n * b];
        if constexpr (Dim == 2) jac[i].col(1) += D(b, l) * g.points[a + n * l];
      }
    }
  }
  g.jacobian.resize(nv);
  g.metric.resize(nv);
  g.volume = 0.0;
  for (int i = 0; i < nv; ++i) {
    g.jacobian[i] = jac[i].determinant();
    if (!(g.jacobian[i] > 0.0))
      throw std::runtime_error("nonpositive Jacobian in element " + std::to_string(e));
    g.metric[i] = contravariant<Dim>(jac[i]);
    g.volume += ref.volume_weights[i] * g.jacobian[i];
  }

  const int nf = ref.num_face_points();
  g.face_points.resize(nf);
  g.normals.resize(nf);
  g.surface_jacobian.resize(nf);
  g.face_weight.resize(nf);
  for (int k = 0; k < nf; ++k) {
    const int f = k / ref.points_per_face;
    const int dir = f / 2;
    const double side = (f % 2) ? 1.0 : -1.0;
    Mat<Dim> M;
    if (eval == MetricEvaluation::Collocated) {
      const int node = ref.face_node[k];
      M = g.metric[node];
      g.face_points[k] = g.points[node];
    } else {
      M = contravariant<Dim>(map_jacobian(mesh, e, ref.face_points[k]));
      g.face_points[k] = map_point(mesh, e, ref.face_points[k]);
    }
    const Vec<Dim> v = side * M.col(dir);
    g.surface_jacobian[k] = v.norm();
    g.normals[k] = v / g.surface_jacobian[k];
    g.face_weight[k] = ref.face_weights[k] * g.surface_jacobian[k] / g.volume;
  }
  return g;
}

template <int Dim>
std::vector<ElementGeometry<Dim>> compute_geometry(const Mesh<Dim>& mesh, const ReferenceElement<Dim>& ref) {
  const auto eval = ref.scheme == SchemeKind::DGSEM ? MetricEvaluation::Collocated : MetricEvaluation::Analytic;
  std::vector<ElementGeometry<Dim>> out(mesh.num_elements());
#pragma omp parallel for schedule(static)
  for (int e = 0; e < mesh.num_elements(); ++e) out[e] = compute_geometry(mesh, e, ref, eval);
  return out;
}

template <int Dim>
double verify_closure(const ElementGeometry<Dim>& g) {
  Vec<Dim> sum = Vec<Dim>::Zero();
  for (std::size_t k = 0; k < g.normals.size(); ++k) sum += g.face_weight[k] * g.normals[k];
  return sum.norm();
}

template <int Dim>
std::vector<std::vector<TracePartner>> match_face_points(const Mesh<Dim>& mesh,
                                                          const std::vector<ElementGeometry<Dim>>& geom,
                                                          const ReferenceElement<Dim>& ref) {
  const int ppf = ref.points_per_face;
  auto centroid = [&](int e, int f) {
    Vec<Dim> c = Vec<Dim>::Zero();
    for (int i = 0; i < ppf; ++i) c += geom[e].face_points[f * ppf + i];
    return Vec<Dim>(c / ppf);
  };
  std::vector<std::vector<TracePartner>> out(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    out[e].resize(ref.num_face_points());
    const double h = std::pow(geom[e].volume, 1.0 / Dim);
    for (int f = 0; f < 2 * Dim; ++f) {
      const auto& link = mesh.faces[e][f];
      for (int i = 0; i < ppf; ++i) out[e][f * ppf + i] = TracePartner{-1, -1, link.tag};
      if (link.element < 0) continue;
      const Vec<Dim> shift = centroid(link.element, link.face) - centroid(e, f);
      for (int i = 0; i < ppf; ++i) {
        const Vec<Dim> x = geom[e].face_points[f * ppf + i] + shift;
        double best = std::numeric_limits<double>::infinity();
        int best_j = -1;
        for (int j = 0; j < ppf; ++j) {
          const double d = (geom[link.element].face_points[link.face * ppf + j] - x).norm();
          if (d < best) {
            best = d;
            best_j = j;
          }
        }
        if (best > 1e-8 * h)
          throw std::runtime_error("face point " + std::to_string(i) + " of face " + std::to_string(f) +
                                   " in element " + std::to_string(e) + " has no partner");
        out[e][f * ppf + i] = TracePartner{link.element, link.face * ppf + best_j, link.tag};
      }
    }
  }
  return out;
}

template ReferenceElement<1> make_reference_element<1>(SchemeKind, int);
template ReferenceElement<2> make_reference_element<2>(SchemeKind, int);
template ElementGeometry<1> compute_geometry<1>(const Mesh<1>&, int, const ReferenceElement<1>&, MetricEvaluation);
template ElementGeometry<2> compute_geometry<2>(const Mesh<2>&, int, const ReferenceElement<2>&, MetricEvaluation);
template std::vector<ElementGeometry<1>> compute_geometry<1>(const Mesh<1>&, const ReferenceElement<1>&);
template std::vector<ElementGeometry<2>> compute_geometry<2>(const Mesh<2>&, const ReferenceElement<2>&);
template double verify_closure<1>(const ElementGeometry<1>&);
template double verify_closure<2>(const ElementGeometry<2>&);
template std::vector<std::vector<TracePartner>> match_face_points<1>(const Mesh<1>&, const std::vector<ElementGeometry<1>>&, const ReferenceElement<1>&);
template std::vector<std::vector<TracePartner>> match_face_points<2>(const Mesh<2>&, const std::vector<ElementGeometry<2>>&, const ReferenceElement<2>&);

}  // namespace idpdg
