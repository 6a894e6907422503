#pragma once

// Spatial operators: modal DG on an element-orthonormal basis and the
// split-form DGSEM on Lobatto nodes. Both expose the same trace/flux/residual
// interface so the limiting pipeline is scheme-agnostic.

#include "idpdg/cell_average.hpp"
#include "idpdg/fluxes.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace idpdg {

/// Columns are states; element e owns a contiguous block of columns.
template <int Dim>
using Field = Eigen::Matrix<double, Dim + 2, Eigen::Dynamic>;

template <int Dim>
struct BoundaryData {
  std::optional<State<Dim>> inflow;
};

/// Exterior state for a physical boundary.
template <int Dim>
State<Dim> ghost_state(BoundaryTag tag, const State<Dim>& inner, const Vec<Dim>& n,
                       const BoundaryData<Dim>& data) {
  switch (tag) {
    case BoundaryTag::Inflow:
      if (!data.inflow) throw std::invalid_argument("inflow boundary without inflow state");
      return *data.inflow;
    case BoundaryTag::Outflow:
      return inner;
    case BoundaryTag::SlipWall:
    case BoundaryTag::Symmetry: {
      State<Dim> g = inner;
      const Vec<Dim> m = momentum<double, Dim>(inner);
      g.template segment<Dim>(1) = m - 2.0 * m.dot(n) * n;
      return g;
    }
    case BoundaryTag::Interior:
    case BoundaryTag::Periodic:
      break;
  }
  throw std::logic_error("ghost state requested for a connected face");
}

struct SchemeSettings {
  SchemeKind scheme{SchemeKind::DGSEM};
  int degree{3};
  InterfaceFluxKind interface_flux{InterfaceFluxKind::Suliciu};
  VolumeFluxKind volume_flux{VolumeFluxKind::KennedyGruber};
  WaveSpeedEstimate wave_speed{WaveSpeedEstimate::Default};
  GasModel<double> gas{};
};

/// Face-point data of one operator evaluation, flat over (element, face point).
template <int Dim>
struct TraceData {
  Field<Dim> minus;        // interior traces u^-
  Field<Dim> plus;         // exterior traces u^+
  Field<Dim> flux;         // h(u^-, u^+, n) with the element's outward normal
  Eigen::VectorXd speed;   // signal speed of the interface solver
};

template <int Dim>
class SchemeOperator {
 public:
  SchemeOperator(const Mesh<Dim>& mesh, const SchemeSettings& settings, BoundaryData<Dim> boundary = {});

  const SchemeSettings& settings() const { return settings_; }
  const Mesh<Dim>& mesh() const { return mesh_; }
  const ReferenceElement<Dim>& reference() const { return ref_; }
  const ElementGeometry<Dim>& geometry(int e) const { return geom_[e]; }
  const CellAverageRule& rule(int e) const { return rules_[e]; }
  const ModalBasis<Dim>& basis(int e) const { return bases_[e]; }
  const std::vector<TracePartner>& partners(int e) const { return partners_[e]; }
  const BoundaryData<Dim>& boundary() const { return boundary_; }

  int num_elements() const { return mesh_.num_elements(); }
  int dofs_per_element() const { return dofs_; }
  int face_points_per_element() const { return ref_.num_face_points(); }
  int volume_points_per_element() const { return ref_.num_volume_points(); }

  /// Modal: quadrature L2 projection. DGSEM: nodal interpolation. At nodes on
  /// the element boundary where the data jumps, the value 1e-10 inside the
  /// element is used so interface discontinuities go to the right side.
  Field<Dim> project(const std::function<State<Dim>(const Vec<Dim>&)>& u0) const;

  /// States at the volume points y_i of element e.
  Field<Dim> volume_states(const Field<Dim>& U, int e) const;
  /// Interior traces at the face points x_k of element e.
  Field<Dim> face_states(const Field<Dim>& U, int e) const;
  /// Value at a reference point.
  State<Dim> evaluate(const Field<Dim>& U, int e, const Vec<Dim>& xi) const;

  /// Quadrature cell average sum_i nu_i u(y_i) + sum_k beta_k u^-(x_k).
  State<Dim> cell_average(const Field<Dim>& U, int e) const;
  /// Mean mode (modal) or mass-weighted nodal mean (DGSEM).
  State<Dim> mean(const Field<Dim>& U, int e) const;

  /// Points where the limiter enforces bounds: volume points and face points
  /// (modal), or all nodes (DGSEM).
  Field<Dim> check_states(const Field<Dim>& U, int e) const;

  /// u <- (1 - theta) u + theta avg on element e; leaves the mean unchanged.
  void apply_scaling(Field<Dim>& U, int e, double theta, const State<Dim>& avg) const;

  /// Density coefficients in the reference Legendre basis (modal_indices order).
  Eigen::VectorXd density_modes(const Field<Dim>& U, int e) const;

  /// Traces and interface fluxes; every face pair is solved once.
  TraceData<Dim> traces(const Field<Dim>& U) const;

  /// R of M dU/dt + R = 0 using precomputed traces.
  Field<Dim> residual(const Field<Dim>& U, const TraceData<Dim>& tr) const;

  /// dU/dt = -M^{-1} R.
  Field<Dim> time_derivative(const Field<Dim>& U, const TraceData<Dim>& tr) const;

  /// Mass entries per degree of freedom.
  Eigen::VectorXd mass(int e) const;

  /// sum_e |kappa_e| mean_e
  State<Dim> total(const Field<Dim>& U) const;

 private:
  void modal_residual(const Field<Dim>& U, const TraceData<Dim>& tr, int e, Field<Dim>& R) const;
  void dgsem_residual(const Field<Dim>& U, const TraceData<Dim>& tr, int e, Field<Dim>& R) const;

  Mesh<Dim> mesh_;
  SchemeSettings settings_;
  BoundaryData<Dim> boundary_;
  ReferenceElement<Dim> ref_;
  std::vector<ElementGeometry<Dim>> geom_;
  std::vector<CellAverageRule> rules_;
  std::vector<ModalBasis<Dim>> bases_;
  std::vector<std::vector<TracePartner>> partners_;
  int dofs_{};
  // modal DG tables per element
  std::vector<std::array<Eigen::MatrixXd, Dim>> weighted_gradients_;  // diag(w) dphi/dxi_j
  std::vector<Eigen::MatrixXd> weighted_face_values_;                 // diag(w^f J_f) phi(x_k)
  // DGSEM nodal -> reference Legendre coefficients
  Eigen::MatrixXd nodal_to_modal_;
};

}  // namespace idpdg
