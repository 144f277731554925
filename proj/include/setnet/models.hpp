// Square-lattice tensor-network models built from group sums: isometric
// tensors, restricted (partially summed) tensors, gauging, plaquette
// projectors, torus ground sectors, and the exact norm/overlap evaluators
// that exploit the group structure.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "setnet/extension.hpp"
#include "setnet/rep.hpp"
#include "setnet/tensor.hpp"

namespace setnet {

// Rank-5 site tensor with legs (phys, up, right, down, left).  The physical
// leg is the raw product of four sublegs of dimension D (no compression).
// Leg typing convention: a virtual group operator acts on the up/right legs
// by right multiplication (column indices) and on the down/left legs by
// inverse left multiplication (row indices); physical operators act from the
// left on each subleg.  Invariance means
//   A = A . (u ⊗ u on up,right | u^{-1} from the left on down,left).
struct SetPepsModel {
  DenseTensor tensor;
  MatrixRep virtual_rep;         // full virtual group (E for restricted models)
  std::vector<int> local_group;  // invariance subgroup, indices into virtual_rep.group
  std::optional<ExtensionModel> extension;
  std::map<int, Mat> section_ops;  // q -> v_q (populated when symmetry data exists)
  double prefactor = 1.0;          // group-sum prefactor carried inside `tensor`
  int phys_sub = 0;                // physical subleg dimension (|E|; fixed under gauging)

  GroupPtr virtual_group() const { return virtual_rep.group; }
  int virtual_dim() const { return virtual_rep.dim(); }
  int phys_subdim() const { return phys_sub; }
  bool gauged() const { return virtual_dim() != phys_sub; }
  bool restricted() const {
    return static_cast<int>(local_group.size()) < virtual_group()->order();
  }
};

// A = (1/|G|) sum_g L_g ⊗ L_g ⊗ L_g^† ⊗ L_g^†; the tensor is the group
// projector reshaped (rank |G|^3 inside a |G|^4 physical space).  |G| <= 8.
SetPepsModel g_isometric_tensor(GroupPtr g);

// Partial group sum over the normal subgroup G of E with the 1/|E| prefactor;
// virtual dimension |E|.  section_ops holds v_q = L_{eps_q}.  |E| <= 16.
SetPepsModel restricted_tensor(const ExtensionModel& ext);

// Promote the global symmetry of `model` to a virtual invariance:
//   B = sum_q U_q A ⊗ |q,q)(q,q|
// with kets on the up/right Q-factors and bras on the down/left Q-factors.
// The result is invariant under the combined operators u_g v_k ⊗ R_k, which
// realize the extension group of (phi, omega).  Throws MissingSymmetryData
// when section_ops is empty.
SetPepsModel gauge_tensor(const SetPepsModel& model);

// Physical on-site operator U_q = v_q ⊗ v_q ⊗ v_q ⊗ v_q acting on the four
// physical sublegs; pulls through to a virtual v_q^{-1} loop around the site,
// so the product over any closed lattice is an exact symmetry.
Mat physical_symmetry_op(const SetPepsModel& model, int q);

// Isometry onto the image of the site map (rank |E|^4/|G|: one basis vector
// per diagonal G-orbit of leg quadruples); used to materialize torus states
// at compressed physical dimension.  Gram matrices are unchanged.
Mat physical_compressor(const SetPepsModel& model);

// <psi|Pi_patch|psi>/<psi|psi> on a 2-row, `width`-column torus where psi
// carries L_g on the row-0 -> row-1 bonds of `string_cols` and Pi_patch is
// the patch projector covering columns (patch_col, patch_col+1).  Exact
// finite group sums; requires width >= 3 and adjacent patch columns.
double patch_string_expectation(const SetPepsModel& model, int g,
                                const std::vector<int>& string_cols,
                                int patch_col, int width);

// Orthogonal projector onto the image of the open 2x2 patch map, stored
// implicitly through the generating patch (8 virtual boundary legs in -> 4
// site physical legs out).  Dense application materializes physical vectors
// and is gated by the contraction budget; the group-sum paths (calibration,
// mid-string values) work at any size.
class PlaquetteProjector {
 public:
  explicit PlaquetteProjector(const SetPepsModel& model,
                              const ContractionBudget& budget = ContractionBudget::from_env());

  int boundary_dim() const;    // D^8
  int patch_phys_dim() const;  // (D^4)^4

  // Boundary legs in index order: up0 up1 right0 right1 down0 down1 left0
  // left1 (clockwise from the top-left site).  Gamma maps a boundary vector
  // to the 4-site physical vector.
  Eigen::VectorXcd patch_map(const Eigen::VectorXcd& boundary) const;
  Eigen::VectorXcd patch_adjoint(const Eigen::VectorXcd& phys) const;

  // Projector onto the boundary subgroup sum (1/|G|) sum_b (b-loop) acting on
  // boundary vectors; Gamma^† Gamma = calibration() * this projector.
  Eigen::VectorXcd boundary_projector(const Eigen::VectorXcd& boundary) const;
  double calibration() const { return calibration_; }

  // Pi applied to a 4-site physical vector via Gamma (Gamma^†Gamma)^+ Gamma^†.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& phys) const;

  // <psi|Pi|psi>/<psi|psi> for the long-string state carrying L_g through the
  // patch on a 2-row torus, evaluated by exact group sums (any size).  The
  // value is 1 for g in the local group and 0 otherwise.
  double mid_string_value(int g) const;

 private:
  const SetPepsModel* model_;
  ContractionBudget budget_;
  double calibration_ = 0.0;
};

PlaquetteProjector plaquette_projector(const SetPepsModel& model);

// Ground sector of the torus model: basis labeled by commuting-pair classes
// (g,h) modulo simultaneous conjugation, with the minimally entangled
// combinations indexed by (flux class, normalizer irrep).
struct GroundSector {
  GroupPtr group;
  int lh = 0, lv = 0;
  std::vector<PairClass> basis;
  struct MesState {
    int flux_rep;  // class representative g
    int irrep;     // irrep of the normalizer N_g
    // coefficients over basis states Psi(g, n), n in N_g
    std::vector<std::pair<std::pair<int, int>, cd>> coeffs;
  };
  std::vector<MesState> mes;
};

// Builds the pair-class basis and MES coefficients.  For |G| <= 3 on the 2x2
// torus the explicit state vectors (compressed physical basis) are
// constructed and checked for linear independence.
GroundSector ground_space(const SetPepsModel& model, int lh, int lv);

// Explicit torus state vector with wrapping operators L_g (horizontal) and
// L_h (vertical) on the cut bonds.  Sites in row-major order; compressed
// physical basis when `compressed`.
Eigen::VectorXcd torus_state(const SetPepsModel& model, int lh, int lv, int g, int h,
                             bool compressed = true);

// Permutation of the ground basis induced by the on-site symmetry operator of
// q: Psi(g,h) -> Psi(phi_q(g), phi_q(h)).  Requires symmetry data.
std::vector<int> symmetry_on_ground_space(const SetPepsModel& model,
                                          const GroundSector& sector, int q);

// Exact contracted norm^2 of the torus network via the fused double layer
// (per-site group variables, bond deltas); equals |G|^{lh lv + 1} for the
// isometric tensor.
double torus_norm_sq(const SetPepsModel& model, int lh, int lv);

// Same quantity by direct dense contraction of the double-layer network
// (cross-check path; memory gated).
double torus_norm_sq_dense(const SetPepsModel& model, int lh, int lv,
                           const ContractionBudget& budget = ContractionBudget::from_env());

// <psi | prod_sites U_q | psi> / <psi|psi> on the torus for a restricted
// model: 1 for every q (the global symmetry), computed by group sums.
cd torus_symmetry_fidelity(const SetPepsModel& model, int lh, int lv, int q);

// Same with U_q applied only on `sites` (indices into row-major order).
cd torus_partial_symmetry_overlap(const SetPepsModel& model, int lh, int lv, int q,
                                  const std::vector<int>& sites);

// Model manifest (group/extension descriptors, section, normalization) and a
// stable 64-bit FNV-1a hash of its canonical JSON dump, for golden tests.
nlohmann::json model_manifest(const SetPepsModel& model);
uint64_t manifest_hash(const nlohmann::json& manifest);

}  // namespace setnet
