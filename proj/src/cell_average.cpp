#include "idpdg/cell_average.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <limits>
#include <stdexcept>

namespace idpdg {

template <int Dim>
std::vector<std::array<int, Dim>> modal_indices(int p) {
  std::vector<std::array<int, Dim>> idx;
  int total = 1;
  for (int d = 0; d < Dim; ++d) total *= p + 1;
  for (int i = 0; i < total; ++i) {
    std::array<int, Dim> a;
    int rem = i;
    for (int d = 0; d < Dim; ++d) {
      a[d] = rem % (p + 1);
      rem /= p + 1;
    }
    idx.push_back(a);
  }
  auto key = [](const std::array<int, Dim>& a) {
    int grade = 0, sum = 0;
    for (int v : a) {
      grade = std::max(grade, v);
      sum += v;
    }
    return std::make_pair(grade, sum);
  };
  std::stable_sort(idx.begin(), idx.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  return idx;
}

template <int Dim>
double reference_mode(const std::array<int, Dim>& idx, const Vec<Dim>& xi, Vec<Dim>* grad) {
  std::array<double, Dim> v, dv;
  for (int d = 0; d < Dim; ++d) std::tie(v[d], dv[d]) = normalized_legendre(idx[d], xi(d));
  double value = 1.0;
  for (int d = 0; d < Dim; ++d) value *= v[d];
  if (grad) {
    for (int j = 0; j < Dim; ++j) {
      double g = 1.0;
      for (int d = 0; d < Dim; ++d) g *= (d == j ? dv[d] : v[d]);
      (*grad)(j) = g;
    }
  }
  return value;
}

template <int Dim>
Eigen::VectorXd normalized_volume_weights(const ReferenceElement<Dim>& ref, const ElementGeometry<Dim>& geom) {
  const int nv = ref.num_volume_points();
  Eigen::VectorXd w(nv);
  for (int i = 0; i < nv; ++i) w(i) = ref.volume_weights[i] * geom.jacobian[i] / geom.volume;
  return w;
}

template <int Dim>
ModalBasis<Dim> build_modal_basis(const ReferenceElement<Dim>& ref, const ElementGeometry<Dim>& geom) {
  const auto idx = modal_indices<Dim>(ref.degree);
  const int np = static_cast<int>(idx.size());
  const int nv = ref.num_volume_points();
  const int nf = ref.num_face_points();
  Eigen::MatrixXd vol(nv, np), face(nf, np);
  std::array<Eigen::MatrixXd, Dim> grad;
  for (auto& g : grad) g.resize(nv, np);
  for (int j = 0; j < np; ++j) {
    for (int i = 0; i < nv; ++i) {
      Vec<Dim> g;
      vol(i, j) = reference_mode<Dim>(idx[j], ref.volume_points[i], &g);
      for (int d = 0; d < Dim; ++d) grad[d](i, j) = g(d);
    }
    for (int k = 0; k < nf; ++k) face(k, j) = reference_mode<Dim>(idx[j], ref.face_points[k]);
  }

  // Modified Gram-Schmidt, two passes, in the varpi-weighted inner product.
  const Eigen::VectorXd w = normalized_volume_weights(ref, geom);
  Eigen::MatrixXd C = Eigen::MatrixXd::Identity(np, np);
  Eigen::MatrixXd V = vol;
  for (int j = 0; j < np; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < j; ++i) {
        const double r = (V.col(i).array() * w.array() * V.col(j).array()).sum();
        V.col(j) -= r * V.col(i);
        C.col(j) -= r * C.col(i);
      }
    }
    const double norm = std::sqrt((V.col(j).array().square() * w.array()).sum());
    V.col(j) /= norm;
    C.col(j) /= norm;
  }
  ModalBasis<Dim> b;
  b.transform = C;
  b.volume_values = vol * C;
  b.face_values = face * C;
  for (int d = 0; d < Dim; ++d) b.volume_gradients[d] = grad[d] * C;
  return b;
}

Eigen::VectorXd compute_alpha(const Eigen::MatrixXd& volume_values, const Eigen::MatrixXd& face_values,
                              const Eigen::VectorXd& varpi, const Eigen::VectorXd& s) {
  const Eigen::MatrixXd gram = volume_values.transpose() * varpi.asDiagonal() * volume_values;
  const double dev = (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (!(dev <= 1e-10)) throw std::runtime_error("quadrature not product-exact");
  return varpi.cwiseProduct(volume_values * (face_values.transpose() * s));
}

CellAverageRule build_cell_average_rule(const Eigen::VectorXd& alpha, const Eigen::VectorXd& varpi,
                                        const Eigen::VectorXd& s) {
  if ((s.array() <= 0.0).any()) throw std::invalid_argument("face weights must be positive");
  double eps = std::numeric_limits<double>::infinity();
  int arg = -1;
  for (int i = 0; i < alpha.size(); ++i) {
    if (alpha(i) > 0.0 && varpi(i) / alpha(i) < eps) {
      eps = varpi(i) / alpha(i);
      arg = i;
    }
  }
  if (arg < 0) throw std::logic_error("no positive representation weight");
  CellAverageRule rule;
  rule.alpha = alpha;
  rule.epsilon = eps;
  rule.nu = varpi - eps * alpha;
  rule.nu(arg) = 0.0;
  for (int i = 0; i < rule.nu.size(); ++i) {
    if (rule.nu(i) < -1e-14) throw std::logic_error("negative volume coefficient in cell-average rule");
    rule.nu(i) = std::max(rule.nu(i), 0.0);
  }
  rule.beta = eps * s;
  return rule;
}

template <int Dim>
CellAverageRule dgsem_boundary_split(const ReferenceElement<Dim>& ref, const ElementGeometry<Dim>& geom) {
  if (ref.scheme != SchemeKind::DGSEM) throw std::invalid_argument("boundary split needs the Lobatto layout");
  const Eigen::VectorXd varpi = normalized_volume_weights(ref, geom);
  std::vector<int> count(ref.num_volume_points(), 0);
  for (int node : ref.face_node) ++count[node];
  CellAverageRule rule;
  rule.nu = varpi;
  for (int i = 0; i < rule.nu.size(); ++i)
    if (count[i] > 0) rule.nu(i) = 0.0;
  const int nf = ref.num_face_points();
  rule.beta.resize(nf);
  rule.epsilon = std::numeric_limits<double>::infinity();
  for (int k = 0; k < nf; ++k) {
    const int node = ref.face_node[k];
    rule.beta(k) = varpi(node) / count[node];
    rule.epsilon = std::min(rule.epsilon, rule.beta(k) / geom.face_weight[k]);
  }
  return rule;
}

template std::vector<std::array<int, 1>> modal_indices<1>(int);
template std::vector<std::array<int, 2>> modal_indices<2>(int);
template double reference_mode<1>(const std::array<int, 1>&, const Vec<1>&, Vec<1>*);
template double reference_mode<2>(const std::array<int, 2>&, const Vec<2>&, Vec<2>*);
template Eigen::VectorXd normalized_volume_weights<1>(const ReferenceElement<1>&, const ElementGeometry<1>&);
template Eigen::VectorXd normalized_volume_weights<2>(const ReferenceElement<2>&, const ElementGeometry<2>&);
template ModalBasis<1> build_modal_basis<1>(const ReferenceElement<1>&, const ElementGeometry<1>&);
template ModalBasis<2> build_modal_basis<2>(const ReferenceElement<2>&, const ElementGeometry<2>&);
template CellAverageRule dgsem_boundary_split<1>(const ReferenceElement<1>&, const ElementGeometry<1>&);
template CellAverageRule dgsem_boundary_split<2>(const ReferenceElement<2>&, const ElementGeometry<2>&);

}  // namespace idpdg
