// Anyon excitations on the group-sum models: virtual insertion operators
// (fluxes, charges, dyons), braiding expectations, domain-wall crossings,
// condensation/confinement diagnostics, and the loop order parameters that
// detect symmetry fractionalization, each with an analytic (group-sum) and a
// dense-contraction backend.
#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "setnet/boundary.hpp"
#include "setnet/extension.hpp"
#include "setnet/models.hpp"

namespace setnet {

enum class Backend { Analytic, Oracle };

// Excitation label: fluxes are conjugacy classes of the local group, charges
// are irreps (flux_class 0, the identity class), dyons pair a class with an
// irrep of the normalizer of its representative.
struct AnyonLabel {
  enum class Kind { Flux, Charge, Dyon };
  Kind kind = Kind::Charge;
  int flux_class = 0;  // index into conjugacy_classes(local group)
  int irrep = 0;       // row of the normalizer's character table (trivial = 0)

  bool is_vacuum() const { return flux_class == 0 && irrep == 0; }
  bool operator==(const AnyonLabel& o) const {
    return kind == o.kind && flux_class == o.flux_class && irrep == o.irrep;
  }
};

// Normalizer of a class representative together with its own group table and
// character table; `elements` maps subgroup indices to parent indices.
struct NormalizerData {
  int rep = 0;
  std::vector<int> elements;
  GroupPtr as_group;
  CharacterTable chars;
};
NormalizerData normalizer_data(const GroupPtr& g, int class_rep);

std::string anyon_name(const GroupPtr& g, const AnyonLabel& label);

// A virtual operator placed on lattice bonds: a sum of product terms, one
// matrix per bond.  group_elem/exponent are kept when the matrix is a
// (power of a) regular-representation element, which the analytic backend
// and the deformation moves rely on.
struct VirtualInsertion {
  struct Bond {
    int row = 0, col = 0;
    bool vertical = false;
    bool operator==(const Bond& o) const {
      return row == o.row && col == o.col && vertical == o.vertical;
    }
  };
  struct Piece {
    Bond bond;
    Mat op;
    std::optional<int> group_elem;
    int exponent = +1;
  };
  struct Term {
    cd coeff{1.0, 0.0};
    std::vector<Piece> pieces;
  };
  std::vector<Term> terms;
};

// Charge-pair operator for plain models,
//   Pi_sigma = sum_{g,h} chi_sigma(h^{-1} g) |g><g| ⊗ |h><h|,
// expanded into d_sigma^2 factor pairs; single-bond diagonal operator
//   C_sigma^t = sum_{g in G} chi_sigma(t g) sum_q |g eps_q><g eps_q|
// for restricted models.  Throws UnknownIrrep.
VirtualInsertion charge_operator(const SetPepsModel& model, int sigma, int t = 0);

// Matrix of the single charge factor C_{sigma,(a,b)} = sum_g pi_sigma(g)_{ab}
// |g><g| in the model's virtual basis (diagonal).
Mat charge_factor(const SetPepsModel& model, int sigma, int a, int b);

// String of L_g^{m_i} along a connected bond path; exponents follow the
// orientation convention (up/right legs +1, down/left -1 as traversed).
// Throws PathDisconnected.
VirtualInsertion flux_string(const SetPepsModel& model, int g,
                             const std::vector<VirtualInsertion::Bond>& path);

// Dyon end D^w_alpha = sum_{n in N_h} chi_alpha(w n) sum_j |n k_j><n k_j|
// with smallest-index right-coset representatives k_j, attached to an L_h
// tail.  Representative-independence is asserted by resampling.  Throws
// InvalidNormalizerData when w is outside the normalizer or alpha invalid.
VirtualInsertion dyon_operator(const SetPepsModel& model, int flux_rep, int alpha, int w);

// chi_alpha(h)/d_alpha for the dyon ([h], alpha).
cd topological_spin(const GroupPtr& g, int flux_rep, int alpha);

// Normalized amplitude for braiding flux g around one end of a charge pair:
// chi_sigma(g)/d_sigma.  The oracle backend contracts the double-layer
// network directly (|G| <= 4 recommended).
cd braid_charge_flux(const SetPepsModel& model, int sigma, int g,
                     Backend backend = Backend::Analytic);

// Braiding a flux around the full charge-anticharge pair; equals the
// no-braid normalization (value 1) for every g.
cd braid_composite_pair(const SetPepsModel& model, int sigma, int g);

// Label map under an automorphism phi of the local group:
// ([g], alpha) -> ([phi(g)], label of pi_alpha o phi^{-1} on N_{phi(g)}).
AnyonLabel permute_anyon(const GroupPtr& g, const std::vector<int>& phi,
                         const AnyonLabel& label);

// Same map realized by the model's symmetry data for q in Q; requires
// section_ops / extension.  Throws MissingSymmetryData.
AnyonLabel domain_wall_cross(const SetPepsModel& model, const AnyonLabel& label, int q);

// Operator-level verification of the wall-crossing circuit: synchronization
// maps applied to explicit bond operators for every unknown environment
// element; returns true when the crossed flux string equals the phi_q(g)
// string exactly.
bool domain_wall_circuit_check(const SetPepsModel& model, int g, int q);

// Overlap <psi | psi with closed contractible L_g loop> / <psi|psi> on the
// torus; equals 1 for g in the local group.
cd closed_loop_overlap(const SetPepsModel& model, int g, int lh, int lv);

// Per-plaquette projector expectations along a straight open string of
// length ell (elements g) on a two-row torus; `excited_count` counts values
// below 1/2.  Confined strings (g outside the local group) excite every
// traversed plaquette plus one end; deformable strings only the two ends.
struct ConfinementScan {
  int ell = 0;
  std::vector<double> plaquette_values;
  int excited_count = 0;
};
ConfinementScan confinement_scan(const SetPepsModel& model, int g, int ell);

// ---- order parameters ----

// Loop protocol: a row of active sites carrying a physical permutation and a
// per-site symmetry word, a ket charge pair to their right, and a displaced
// bra charge pair.
struct OrderParameterProtocol {
  std::string name;
  ExtensionModel ext;
  int sigma = 0;                   // irrep of G
  std::vector<int> active_sites;   // consecutive site indices
  std::vector<int> permutation;    // images of active_sites under pi
  std::vector<int> symmetry_word;  // q per active site
  int bra_displacement = 1;
};

OrderParameterProtocol protocol_from_json(const nlohmann::json& j);
nlohmann::json protocol_json(const OrderParameterProtocol& p);

// The analytic backend compiles a protocol to boundary-loop expressions: the
// numerator carries the section symbols and the charge pair (one expression
// per factor-pair index), the denominator is the same loop with the sections
// dropped and the charge insertions neutralized, which keeps it a positive
// collapse volume for every irrep.
struct CompiledProtocol {
  std::vector<BoundaryLoopExpr> numerator;
  std::vector<BoundaryLoopExpr> denominator;
  LoopContext ctx;
};
CompiledProtocol compile_protocol(const OrderParameterProtocol& p);  // ProtocolMismatch

// Normalized loop value.  The analytic backend evaluates the compiled
// expression with character/column-map fast paths; the oracle backend
// re-contracts the collapsed loop network from scratch with explicit
// regular-representation matrices and brute-force boundary group sums
// (|E| <= 8).  The 2D-to-loop collapse itself is exact at the fixed point
// and is covered by the pulling-through property suite.
cd order_parameter(const OrderParameterProtocol& p, Backend backend = Backend::Analytic);

// Root-of-unity classification of measured values (tolerance 1e-6); `den`
// divides max_order when classified, value ≈ exp(2 pi i num/den).
struct SnappedValue {
  bool classified = false;
  int num = 0;
  int den = 1;
  cd raw{0.0, 0.0};
  std::string str() const;
};
SnappedValue snap_root_of_unity(cd value, int max_order, double tol = 1e-6);

// Signature separating the fractionalization classes of a case-study pair:
// loop values for each invariant word plus the commutator word where the
// case uses one.  pair_spec picks the descriptor set ("Z2,Z2", "Z2,Z2xZ2",
// "Zp,Zp", "Z4,Z2", "Q8,Z2"); throws UnsupportedPair otherwise.
struct SfSignature {
  std::string pair_name;
  std::string extension_name;
  std::vector<LambdaDescriptor> descriptors;
  std::vector<SnappedValue> values;
  std::optional<SnappedValue> commutator;
};
SfSignature sf_signature(const ExtensionModel& ext, const std::string& pair_spec);
SfSignature sf_signature(const ExtensionModel& ext,
                         const std::vector<LambdaDescriptor>& descriptors,
                         std::string pair_name = "custom");

// Which anyons of the E model condense or confine on the restricted
// background, and how E-charges split into G-charges.
struct CondensationReport {
  struct Splitting {
    int parent_irrep;                        // irrep of E
    std::vector<std::pair<int, int>> parts;  // (irrep of G, multiplicity)
  };
  std::vector<int> condensed_charges;  // E-irreps whose character restricts trivially
  bool composite_witness = false;      // set when only the reducible kernel-G witness condenses
  std::vector<int> confined_fluxes;    // E-classes not contained in G
  std::vector<Splitting> splittings;
};
CondensationReport condensation_report(const ExtensionModel& ext);

// Perturbation hook: applies exp(i eps H) with a seeded random Hermitian H
// to every physical site.  Only continuity at eps -> 0 is promised.
SetPepsModel perturb_model(const SetPepsModel& model, double eps, uint64_t seed);

}  // namespace setnet
