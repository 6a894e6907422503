#include "idpdg/discretization.hpp"

#include <stdexcept>

namespace idpdg {

namespace {

template <int Dim>
void require_admissible_in(const State<Dim>& u, int e) {
  if (!is_admissible<double, Dim>(u)) require_admissible<double, Dim>(u, e);
}

}  // namespace

template <int Dim>
SchemeOperator<Dim>::SchemeOperator(const Mesh<Dim>& mesh, const SchemeSettings& settings,
                                    BoundaryData<Dim> boundary)
    : mesh_(mesh), settings_(settings), boundary_(std::move(boundary)) {
  if (mesh_.mapping_degree > settings_.degree)
    throw std::invalid_argument("polynomial degree must be at least the mapping degree");
  ref_ = make_reference_element<Dim>(settings_.scheme, settings_.degree);
  geom_ = compute_geometry(mesh_, ref_);
  partners_ = match_face_points(mesh_, geom_, ref_);
  const int ne = mesh_.num_elements();
  rules_.resize(ne);
  const auto idx = modal_indices<Dim>(settings_.degree);
  if (settings_.scheme == SchemeKind::ModalDG) {
    dofs_ = static_cast<int>(idx.size());
    bases_.resize(ne);
    weighted_gradients_.resize(ne);
    weighted_face_values_.resize(ne);
#pragma omp parallel for schedule(static)
    for (int e = 0; e < ne; ++e) {
      const auto& g = geom_[e];
      bases_[e] = build_modal_basis(ref_, g);
      const Eigen::VectorXd varpi = normalized_volume_weights(ref_, g);
      const Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(g.face_weight.data(), g.face_weight.size());
      const Eigen::VectorXd alpha = compute_alpha(bases_[e].volume_values, bases_[e].face_values, varpi, s);
      rules_[e] = build_cell_average_rule(alpha, varpi, s);
      const Eigen::VectorXd w =
          Eigen::Map<const Eigen::VectorXd>(ref_.volume_weights.data(), ref_.volume_weights.size());
      for (int j = 0; j < Dim; ++j) weighted_gradients_[e][j] = w.asDiagonal() * bases_[e].volume_gradients[j];
      Eigen::VectorXd wf(ref_.num_face_points());
      for (int k = 0; k < wf.size(); ++k) wf(k) = ref_.face_weights[k] * g.surface_jacobian[k];
      weighted_face_values_[e] = wf.asDiagonal() * bases_[e].face_values;
    }
  } else {
    dofs_ = ref_.num_volume_points();
    for (int e = 0; e < ne; ++e) rules_[e] = dgsem_boundary_split(ref_, geom_[e]);
    Eigen::MatrixXd V(dofs_, dofs_);
    for (int i = 0; i < dofs_; ++i)
      for (int j = 0; j < dofs_; ++j) V(i, j) = reference_mode<Dim>(idx[j], ref_.volume_points[i]);
    nodal_to_modal_ = V.inverse();
  }
}

template <int Dim>
Field<Dim> SchemeOperator<Dim>::project(const std::function<State<Dim>(const Vec<Dim>&)>& u0) const {
  const int ne = num_elements();
  Field<Dim> U(Dim + 2, ne * dofs_);
  for (int e = 0; e < ne; ++e) {
    const auto& g = geom_[e];
    Vec<Dim> centre = Vec<Dim>::Zero();
    for (const auto& x : g.points) centre += x;
    centre /= static_cast<double>(g.points.size());
    Field<Dim> values(Dim + 2, g.points.size());
    for (std::size_t i = 0; i < g.points.size(); ++i) {
      values.col(i) = u0(g.points[i]);
      if (ref_.volume_points[i].cwiseAbs().maxCoeff() < 1.0) continue;
      // data that jumps across the element boundary is taken from this side
      const State<Dim> inside = u0(g.points[i] + 1e-10 * (centre - g.points[i]));
      if ((inside - values.col(i)).cwiseAbs().maxCoeff() > 1e-6 * (1.0 + inside.cwiseAbs().maxCoeff()))
        values.col(i) = inside;
    }
    if (settings_.scheme == SchemeKind::ModalDG) {
      const Eigen::VectorXd varpi = normalized_volume_weights(ref_, g);
      U.middleCols(e * dofs_, dofs_) = values * varpi.asDiagonal() * bases_[e].volume_values;
    } else {
      U.middleCols(e * dofs_, dofs_) = values;
    }
  }
  return U;
}

template <int Dim>
Field<Dim> SchemeOperator<Dim>::volume_states(const Field<Dim>& U, int e) const {
  if (settings_.scheme == SchemeKind::DGSEM) return U.middleCols(e * dofs_, dofs_);
  return U.middleCols(e * dofs_, dofs_) * bases_[e].volume_values.transpose();
}

template <int Dim>
Field<Dim> SchemeOperator<Dim>::face_states(const Field<Dim>& U, int e) const {
  const int nf = ref_.num_face_points();
  if (settings_.scheme == SchemeKind::ModalDG)
    return U.middleCols(e * dofs_, dofs_) * bases_[e].face_values.transpose();
  Field<Dim> out(Dim + 2, nf);
  for (int k = 0; k < nf; ++k) out.col(k) = U.col(e * dofs_ + ref_.face_node[k]);
  return out;
}

template <int Dim>
State<Dim> SchemeOperator<Dim>::evaluate(const Field<Dim>& U, int e, const Vec<Dim>& xi) const {
  const auto block = U.middleCols(e * dofs_, dofs_);
  if (settings_.scheme == SchemeKind::ModalDG) {
    const auto idx = modal_indices<Dim>(settings_.degree);
    Eigen::RowVectorXd ref(dofs_);
    for (int j = 0; j < dofs_; ++j) ref(j) = reference_mode<Dim>(idx[j], xi);
    return block * (ref * bases_[e].transform).transpose();
  }
  std::array<Eigen::VectorXd, Dim> l;
  for (int d = 0; d < Dim; ++d) l[d] = lagrange_values(ref_.line.nodes, xi(d));
  const int n = ref_.line.size();
  State<Dim> u = State<Dim>::Zero();
  for (int i = 0; i < dofs_; ++i) {
    double w = 1.0;
    int rem = i;
    for (int d = 0; d < Dim; ++d) {
      w *= l[d](rem % n);
      rem /= n;
    }
    u += w * block.col(i);
  }
  return u;
}

template <int Dim>
State<Dim> SchemeOperator<Dim>::cell_average(const Field<Dim>& U, int e) const {
  const auto& r = rules_[e];
  return volume_states(U, e) * r.nu + face_states(U, e) * r.beta;
}

template <int Dim>
State<Dim> SchemeOperator<Dim>::mean(const Field<Dim>& U, int e) const {
  if (settings_.scheme == SchemeKind::ModalDG) return U.col(e * dofs_);
  return U.middleCols(e * dofs_, dofs_) * normalized_volume_weights(ref_, geom_[e]);
}

template <int Dim>
Field<Dim> SchemeOperator<Dim>::check_states(const Field<Dim>& U, int e) const {
  if (settings_.scheme == SchemeKind::DGSEM) return U.middleCols(e * dofs_, dofs_);
  const int nv = ref_.num_volume_points(), nf = ref_.num_face_points();
  Field<Dim> out(Dim + 2, nv + nf);
  out.leftCols(nv) = volume_states(U, e);
  out.rightCols(nf) = face_states(U, e);
  return out;
}

template <int Dim>
void SchemeOperator<Dim>::apply_scaling(Field<Dim>& U, int e, double theta, const State<Dim>& avg) const {
  auto block = U.middleCols(e * dofs_, dofs_);
  if (settings_.scheme == SchemeKind::ModalDG) {
    block.rightCols(dofs_ - 1) *= (1.0 - theta);
  } else {
    for (int i = 0; i < dofs_; ++i) block.col(i) = (1.0 - theta) * block.col(i) + theta * avg;
  }
}

template <int Dim>
Eigen::VectorXd SchemeOperator<Dim>::density_modes(const Field<Dim>& U, int e) const {
  const Eigen::VectorXd rho = U.row(0).segment(e * dofs_, dofs_).transpose();
  if (settings_.scheme == SchemeKind::ModalDG) return bases_[e].transform * rho;
  return nodal_to_modal_ * rho;
}

template <int Dim>
TraceData<Dim> SchemeOperator<Dim>::traces(const Field<Dim>& U) const {
  const int ne = num_elements();
  const int nf = ref_.num_face_points();
  TraceData<Dim> tr;
  tr.minus.resize(Dim + 2, ne * nf);
  tr.plus.resize(Dim + 2, ne * nf);
  tr.flux.resize(Dim + 2, ne * nf);
  tr.speed.resize(ne * nf);
  for (int e = 0; e < ne; ++e) {
    tr.minus.middleCols(e * nf, nf) = face_states(U, e);
    for (int k = 0; k < nf; ++k) require_admissible_in<Dim>(tr.minus.col(e * nf + k), e);
  }
  const auto& gas = settings_.gas;
  for (int e = 0; e < ne; ++e) {
    const auto& g = geom_[e];
    for (int k = 0; k < nf; ++k) {
      const auto& P = partners_[e][k];
      const int a = e * nf + k;
      const State<Dim> uL = tr.minus.col(a);
      if (P.element >= 0) {
        const int b = P.element * nf + P.point;
        if (b < a) continue;
        const State<Dim> uR = tr.minus.col(b);
        const auto r = interface_flux<double, Dim>(settings_.interface_flux, uL, uR, g.normals[k], gas,
                                                   settings_.wave_speed);
        tr.flux.col(a) = r.flux;
        tr.flux.col(b) = -r.flux;
        tr.speed(a) = tr.speed(b) = r.speed;
        tr.plus.col(a) = uR;
        tr.plus.col(b) = uL;
      } else {
        // outflow copies the element mean rather than the trace: a copied trace
        // gives no upwinding at a subsonic exit and the boundary element can drift
        const State<Dim> inner = P.tag == BoundaryTag::Outflow ? State<Dim>(mean(U, e)) : uL;
        const State<Dim> uR = ghost_state<Dim>(P.tag, inner, g.normals[k], boundary_);
        const auto r = interface_flux<double, Dim>(settings_.interface_flux, uL, uR, g.normals[k], gas,
                                                   settings_.wave_speed);
        tr.flux.col(a) = r.flux;
        tr.speed(a) = r.speed;
        tr.plus.col(a) = uR;
      }
    }
  }
  return tr;
}

template <int Dim>
void SchemeOperator<Dim>::modal_residual(const Field<Dim>& U, const TraceData<Dim>& tr, int e,
                                         Field<Dim>& R) const {
  const auto& g = geom_[e];
  const int nv = ref_.num_volume_points(), nf = ref_.num_face_points();
  const Field<Dim> uv = volume_states(U, e);
  auto Re = R.middleCols(e * dofs_, dofs_);
  Re = tr.flux.middleCols(e * nf, nf) * weighted_face_values_[e];
  Field<Dim> F(Dim + 2, nv);
  for (int i = 0; i < nv; ++i) require_admissible_in<Dim>(uv.col(i), e);
  for (int j = 0; j < Dim; ++j) {
    for (int i = 0; i < nv; ++i)
      F.col(i) = physical_flux<double, Dim>(uv.col(i), g.metric[i].col(j), settings_.gas);
    Re.noalias() -= F * weighted_gradients_[e][j];
  }
}

template <int Dim>
void SchemeOperator<Dim>::dgsem_residual(const Field<Dim>& U, const TraceData<Dim>& tr, int e,
                                         Field<Dim>& R) const {
  const auto& g = geom_[e];
  const auto& D = ref_.derivative;
  const auto& w = ref_.volume_weights;
  const auto& gas = settings_.gas;
  const int n = ref_.line.size();
  const int nf = ref_.num_face_points();
  const auto Ue = U.middleCols(e * dofs_, dofs_);
  auto Re = R.middleCols(e * dofs_, dofs_);
  Re.setZero();
  for (int i = 0; i < dofs_; ++i) require_admissible_in<Dim>(Ue.col(i), e);

  const int lines = Dim == 2 ? n : 1;
  for (int dir = 0; dir < Dim; ++dir) {
    for (int line = 0; line < lines; ++line) {
      auto node = [&](int i) { return dir == 0 ? i + n * line : line + n * i; };
      for (int i = 0; i < n; ++i) {
        const int ki = node(i);
        const State<Dim> ui = Ue.col(ki);
        if (D(i, i) != 0.0) {
          Re.col(ki) += 2.0 * w[ki] * D(i, i) * physical_flux<double, Dim>(ui, g.metric[ki].col(dir), gas);
        }
        for (int l = i + 1; l < n; ++l) {
          const int kl = node(l);
          const Vec<Dim> m = 0.5 * (g.metric[ki].col(dir) + g.metric[kl].col(dir));
          const State<Dim> h = volume_flux<double, Dim>(settings_.volume_flux, ui, Ue.col(kl), m, gas);
          Re.col(ki) += 2.0 * w[ki] * D(i, l) * h;
          Re.col(kl) += 2.0 * w[kl] * D(l, i) * h;
        }
      }
    }
  }
  for (int k = 0; k < nf; ++k) {
    const int node = ref_.face_node[k];
    const State<Dim> fn = physical_flux<double, Dim>(Ue.col(node), g.normals[k], gas);
    Re.col(node) += ref_.face_weights[k] * g.surface_jacobian[k] * (tr.flux.col(e * nf + k) - fn);
  }
}

template <int Dim>
Field<Dim> SchemeOperator<Dim>::residual(const Field<Dim>& U, const TraceData<Dim>& tr) const {
  Field<Dim> R(Dim + 2, U.cols());
  const int ne = num_elements();
  if (settings_.scheme == SchemeKind::ModalDG) {
    for (int e = 0; e < ne; ++e) modal_residual(U, tr, e, R);
  } else {
    for (int e = 0; e < ne; ++e) dgsem_residual(U, tr, e, R);
  }
  return R;
}

template <int Dim>
Eigen::VectorXd SchemeOperator<Dim>::mass(int e) const {
  if (settings_.scheme == SchemeKind::ModalDG) return Eigen::VectorXd::Constant(dofs_, geom_[e].volume);
  Eigen::VectorXd m(dofs_);
  for (int i = 0; i < dofs_; ++i) m(i) = ref_.volume_weights[i] * geom_[e].jacobian[i];
  return m;
}

template <int Dim>
Field<Dim> SchemeOperator<Dim>::time_derivative(const Field<Dim>& U, const TraceData<Dim>& tr) const {
  Field<Dim> R = residual(U, tr);
  for (int e = 0; e < num_elements(); ++e) {
    const Eigen::VectorXd m = mass(e);
    R.middleCols(e * dofs_, dofs_) = -R.middleCols(e * dofs_, dofs_) * m.cwiseInverse().asDiagonal();
  }
  return R;
}

template <int Dim>
State<Dim> SchemeOperator<Dim>::total(const Field<Dim>& U) const {
  State<Dim> sum = State<Dim>::Zero();
  for (int e = 0; e < num_elements(); ++e) sum += geom_[e].volume * mean(U, e);
  return sum;
}

template class SchemeOperator<1>;
template class SchemeOperator<2>;

}  // namespace idpdg
