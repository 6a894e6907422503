#include "idpdg/mesh.hpp"

#include "idpdg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace idpdg {

namespace {

const std::array<const char*, 6> kTagNames{"Interior", "Inflow", "Outflow",
                                           "SlipWall", "Symmetry", "Periodic"};

Eigen::VectorXd mapping_nodes(int q) { return Eigen::VectorXd::LinSpaced(q + 1, -1.0, 1.0); }

}  // namespace

std::string to_string(BoundaryTag tag) { return kTagNames[static_cast<int>(tag)]; }

BoundaryTag parse_boundary_tag(const std::string& name) {
  for (std::size_t i = 0; i < kTagNames.size(); ++i) {
    if (name == kTagNames[i]) return static_cast<BoundaryTag>(i);
  }
  throw std::invalid_argument("unknown boundary tag '" + name + "'");
}

template <int Dim>
int Mesh<Dim>::nodes_per_element() const {
  int n = 1;
  for (int d = 0; d < Dim; ++d) n *= mapping_degree + 1;
  return n;
}

template <int Dim>
std::vector<Vec<Dim>> reference_lattice(int degree) {
  const auto r = mapping_nodes(degree);
  std::vector<Vec<Dim>> pts;
  const int n = degree + 1;
  int total = 1;
  for (int d = 0; d < Dim; ++d) total *= n;
  for (int idx = 0; idx < total; ++idx) {
    Vec<Dim> x;
    int rem = idx;
    for (int d = 0; d < Dim; ++d) {
      x(d) = r(rem % n);
      rem /= n;
    }
    pts.push_back(x);
  }
  return pts;
}

template <int Dim>
Vec<Dim> map_point(const Mesh<Dim>& mesh, int e, const Vec<Dim>& xi) {
  const int q = mesh.mapping_degree;
  const auto r = mapping_nodes(q);
  std::array<Eigen::VectorXd, Dim> l;
  for (int d = 0; d < Dim; ++d) l[d] = lagrange_values(r, xi(d));
  Vec<Dim> x = Vec<Dim>::Zero();
  const auto& ids = mesh.elements[e];
  for (std::size_t a = 0; a < ids.size(); ++a) {
    double w = 1.0;
    int rem = static_cast<int>(a);
    for (int d = 0; d < Dim; ++d) {
      w *= l[d](rem % (q + 1));
      rem /= q + 1;
    }
    x += w * mesh.nodes[ids[a]];
  }
  return x;
}

template <int Dim>
Eigen::Matrix<double, Dim, Dim> map_jacobian(const Mesh<Dim>& mesh, int e, const Vec<Dim>& xi) {
  const int q = mesh.mapping_degree;
  const auto r = mapping_nodes(q);
  std::array<Eigen::VectorXd, Dim> l, dl;
  for (int d = 0; d < Dim; ++d) {
    l[d] = lagrange_values(r, xi(d));
    dl[d] = lagrange_derivatives(r, xi(d));
  }
  Eigen::Matrix<double, Dim, Dim> jac = Eigen::Matrix<double, Dim, Dim>::Zero();
  const auto& ids = mesh.elements[e];
  for (std::size_t a = 0; a < ids.size(); ++a) {
    std::array<int, Dim> idx;
    int rem = static_cast<int>(a);
    for (int d = 0; d < Dim; ++d) {
      idx[d] = rem % (q + 1);
      rem /= q + 1;
    }
    for (int j = 0; j < Dim; ++j) {
      double w = 1.0;
      for (int d = 0; d < Dim; ++d) w *= (d == j ? dl[d](idx[d]) : l[d](idx[d]));
      jac.col(j) += w * mesh.nodes[ids[a]];
    }
  }
  return jac;
}

template <int Dim>
std::vector<int> face_corner_nodes(const Mesh<Dim>& mesh, int e, int f) {
  const int q = mesh.mapping_degree;
  const auto& ids = mesh.elements[e];
  const int dir = f / 2;
  const int fixed = (f % 2) ? q : 0;
  if constexpr (Dim == 1) {
    return {ids[fixed]};
  } else {
    const int other = 1 - dir;
    std::vector<int> out;
    for (int end : {0, q}) {
      std::array<int, 2> idx{};
      idx[dir] = fixed;
      idx[other] = end;
      out.push_back(ids[idx[0] + (q + 1) * idx[1]]);
    }
    return out;
  }
}

template <int Dim>
void connect_faces(Mesh<Dim>& mesh) {
  const int ne = mesh.num_elements();
  mesh.faces.resize(ne);
  std::map<std::vector<int>, std::pair<int, int>> open;
  for (int e = 0; e < ne; ++e) {
    for (int f = 0; f < 2 * Dim; ++f) {
      auto& link = mesh.faces[e][f];
      if (link.tag != BoundaryTag::Interior || link.element >= 0) continue;
      auto key = face_corner_nodes(mesh, e, f);
      std::sort(key.begin(), key.end());
      auto it = open.find(key);
      if (it == open.end()) {
        open.emplace(key, std::make_pair(e, f));
      } else {
        const auto [e2, f2] = it->second;
        link = FaceLink{e2, f2, BoundaryTag::Interior};
        mesh.faces[e2][f2] = FaceLink{e, f, BoundaryTag::Interior};
        open.erase(it);
      }
    }
  }
  if (!open.empty()) {
    const auto [e, f] = open.begin()->second;
    throw std::runtime_error("unmatched face " + std::to_string(f) + " of element " +
                             std::to_string(e) + " (" + std::to_string(open.size()) +
                             " open faces)");
  }
}

template <int Dim>
void check_jacobians(const Mesh<Dim>& mesh) {
  const auto g = gauss_legendre(mesh.mapping_degree + 2);
  const auto rule = tensor_rule<Dim>(g);
  std::vector<int> bad;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (const auto& pt : rule.points) {
      Vec<Dim> xi;
      for (int d = 0; d < Dim; ++d) xi(d) = pt[d];
      if (!(map_jacobian(mesh, e, xi).determinant() > 0.0)) {
        bad.push_back(e);
        break;
      }
    }
  }
  if (!bad.empty()) {
    std::string msg = "inverted elements:";
    for (std::size_t i = 0; i < bad.size() && i < 20; ++i) msg += " " + std::to_string(bad[i]);
    if (bad.size() > 20) msg += " ...";
    throw std::runtime_error(msg);
  }
}

Mesh<1> build_segment_mesh(double a, double b, int n, BoundaryTag left, BoundaryTag right) {
  if (n < 1) throw std::invalid_argument("segment mesh needs at least one element");
  if (!(a < b)) throw std::invalid_argument("segment mesh needs a < b");
  if ((left == BoundaryTag::Periodic) != (right == BoundaryTag::Periodic))
    throw std::invalid_argument("periodic segment needs both ends periodic");
  Mesh<1> m;
  m.mapping_degree = 1;
  for (int i = 0; i <= n; ++i) {
    Vec<1> x;
    x(0) = (i == n) ? b : a + (b - a) * i / n;
    m.nodes.push_back(x);
  }
  for (int i = 0; i < n; ++i) m.elements.push_back({i, i + 1});
  m.faces.resize(n);
  if (left == BoundaryTag::Periodic) {
    m.faces[0][0] = FaceLink{n - 1, 1, BoundaryTag::Periodic};
    m.faces[n - 1][1] = FaceLink{0, 0, BoundaryTag::Periodic};
  } else {
    m.faces[0][0].tag = left;
    m.faces[n - 1][1].tag = right;
  }
  connect_faces(m);
  return m;
}

namespace {

// Assembles a structured (q nx + 1) x (q ny + 1) lattice into elements and
// boundary tags; `point(i, j)` gives the physical lattice position.
template <typename PointFn>
Mesh<2> lattice_mesh(int nx, int ny, int q, PointFn point,
                     const std::array<BoundaryTag, 4>& tags) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("quad mesh needs nx, ny >= 1");
  if (q != 1 && q != 2) throw std::invalid_argument("mapping degree must be 1 or 2");
  const bool px = tags[0] == BoundaryTag::Periodic || tags[1] == BoundaryTag::Periodic;
  const bool py = tags[2] == BoundaryTag::Periodic || tags[3] == BoundaryTag::Periodic;
  if (px && (tags[0] != tags[1])) throw std::invalid_argument("periodic x needs both sides periodic");
  if (py && (tags[2] != tags[3])) throw std::invalid_argument("periodic y needs both sides periodic");

  Mesh<2> m;
  m.mapping_degree = q;
  const int NX = q * nx + 1, NY = q * ny + 1;
  for (int j = 0; j < NY; ++j)
    for (int i = 0; i < NX; ++i) m.nodes.push_back(point(i, j));
  auto elem = [nx](int i, int j) { return i + nx * j; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      std::vector<int> ids;
      for (int b = 0; b <= q; ++b)
        for (int a = 0; a <= q; ++a) ids.push_back((q * i + a) + NX * (q * j + b));
      m.elements.push_back(ids);
    }
  }
  m.faces.resize(nx * ny);
  for (int j = 0; j < ny; ++j) {
    if (px) {
      m.faces[elem(0, j)][0] = FaceLink{elem(nx - 1, j), 1, BoundaryTag::Periodic};
      m.faces[elem(nx - 1, j)][1] = FaceLink{elem(0, j), 0, BoundaryTag::Periodic};
    } else {
      m.faces[elem(0, j)][0].tag = tags[0];
      m.faces[elem(nx - 1, j)][1].tag = tags[1];
    }
  }
  for (int i = 0; i < nx; ++i) {
    if (py) {
      m.faces[elem(i, 0)][2] = FaceLink{elem(i, ny - 1), 3, BoundaryTag::Periodic};
      m.faces[elem(i, ny - 1)][3] = FaceLink{elem(i, 0), 2, BoundaryTag::Periodic};
    } else {
      m.faces[elem(i, 0)][2].tag = tags[2];
      m.faces[elem(i, ny - 1)][3].tag = tags[3];
    }
  }
  return m;
}

}  // namespace

Mesh<2> build_quad_mesh(const QuadMeshSpec& spec) {
  const int q = spec.mapping_degree;
  const Vec<2> L = spec.upper - spec.lower;
  if (!(L(0) > 0 && L(1) > 0)) throw std::invalid_argument("quad mesh needs upper > lower");
  const double c = std::cos(spec.rotation), s = std::sin(spec.rotation);
  auto point = [&](int i, int j) {
    const double u = double(i) / (q * spec.nx), v = double(j) / (q * spec.ny);
    const double delta =
        spec.distortion * std::sin(2 * std::numbers::pi * u) * std::sin(2 * std::numbers::pi * v);
    const Vec<2> p(spec.lower(0) + L(0) * (u + delta), spec.lower(1) + L(1) * (v + delta));
    return Vec<2>(c * p(0) - s * p(1), s * p(0) + c * p(1));
  };
  auto m = lattice_mesh(spec.nx, spec.ny, q, point, spec.tags);
  connect_faces(m);
  check_jacobians(m);
  return m;
}

Mesh<2> build_ramp_mesh(const RampMeshSpec& spec) {
  const int q = spec.mapping_degree;
  if (!(spec.x_min < 0.0 && spec.x_max > 0.0)) throw std::invalid_argument("ramp needs x_min < 0 < x_max");
  int n_left = static_cast<int>(std::lround(spec.nx * (-spec.x_min) / (spec.x_max - spec.x_min)));
  n_left = std::clamp(n_left, 1, spec.nx - 1);
  const int n_right = spec.nx - n_left;
  const double slope = std::tan(spec.angle_degrees * std::numbers::pi / 180.0);
  if (!(spec.height > spec.x_max * slope)) throw std::invalid_argument("ramp top must clear the wedge");
  auto point = [&](int i, int j) {
    const int split = q * n_left;
    const double x = i <= split ? spec.x_min * (1.0 - double(i) / split)
                                : spec.x_max * double(i - split) / (q * n_right);
    const double bottom = x > 0.0 ? x * slope : 0.0;
    const double t = double(j) / (q * spec.ny);
    return Vec<2>(x, bottom + t * (spec.height - bottom));
  };
  auto m = lattice_mesh(spec.nx, spec.ny, q, point,
                        {BoundaryTag::Inflow, BoundaryTag::Outflow, BoundaryTag::Outflow,
                         BoundaryTag::Symmetry});
  for (int i = n_left; i < spec.nx; ++i) m.faces[i][2].tag = BoundaryTag::SlipWall;
  connect_faces(m);
  check_jacobians(m);
  return m;
}

template struct Mesh<1>;
template struct Mesh<2>;
template std::vector<Vec<1>> reference_lattice<1>(int);
template std::vector<Vec<2>> reference_lattice<2>(int);
template Vec<1> map_point<1>(const Mesh<1>&, int, const Vec<1>&);
template Vec<2> map_point<2>(const Mesh<2>&, int, const Vec<2>&);
template Eigen::Matrix<double, 1, 1> map_jacobian<1>(const Mesh<1>&, int, const Vec<1>&);
template Eigen::Matrix<double, 2, 2> map_jacobian<2>(const Mesh<2>&, int, const Vec<2>&);
template std::vector<int> face_corner_nodes<1>(const Mesh<1>&, int, int);
template std::vector<int> face_corner_nodes<2>(const Mesh<2>&, int, int);
template void connect_faces<1>(Mesh<1>&);
template void connect_faces<2>(Mesh<2>&);
template void check_jacobians<1>(const Mesh<1>&);
template void check_jacobians<2>(const Mesh<2>&);

}  // namespace idpdg
