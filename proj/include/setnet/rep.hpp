// Representation theory over a fixed basis: regular representations,
// character tables (closed forms for presets, numeric class-matrix method
// otherwise), restriction to normal subgroups, decomposition, and projective
// factor-system checks.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "setnet/group.hpp"

namespace setnet {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

// A unitary matrix representation: one matrix per group element.
struct MatrixRep {
  GroupPtr group;
  std::vector<Mat> mats;
  int dim() const { return mats.empty() ? 0 : static_cast<int>(mats[0].rows()); }
  const Mat& operator()(int g) const { return mats[g]; }
};

// Left regular representation in the group-element basis: L_g |h> = |gh>.
MatrixRep regular_rep(const FiniteGroup& g);
// Right multiplication by the inverse: R_k |q> = |q k^{-1}>; commutes with L.
MatrixRep right_regular_rep(const FiniteGroup& g);

struct CharacterTable {
  GroupPtr group;
  std::vector<std::vector<int>> classes;  // from conjugacy_classes()
  std::vector<int> class_of;              // element -> class id
  std::vector<int> degrees;               // irrep dimensions
  Mat chi;                                // chi(irrep, class)
  bool exact = false;                     // closed-form (true) vs numeric

  int num_irreps() const { return static_cast<int>(degrees.size()); }
  cd value(int irrep, int element) const { return chi(irrep, class_of[element]); }
};

// Closed forms for Cyclic/Dihedral/Quaternion presets and products/quotients
// built from them; Burnside-Dixon class-matrix eigenvectors otherwise
// (throws NumericalDegeneracy if separation fails after retries).
CharacterTable character_table(const FiniteGroup& g);

// Explicit irreducible matrices, index-aligned with character_table(g).
// Available for the closed-form presets (cyclic, dihedral, quaternion, and
// direct products / central quotients of those); Unsupported otherwise.
std::vector<MatrixRep> irrep_matrices(const FiniteGroup& g);

// Multiplicity of each irrep in `rep` from character inner products.
// Entries are rounded to integers; NonIntegralMultiplicity if any is farther
// than 1e-6 from an integer.
std::vector<int> decompose_rep(const MatrixRep& rep, const CharacterTable& table);

// Restriction of irrep `nu` of g to the normal subgroup given by `sub`
// (element list).  Returns (subgroup irrep id, multiplicity) pairs and checks
// the Clifford constraints: restricted constituents form one orbit, equal
// dimensions and multiplicities.  Throws NotNormal if `sub` is not normal.
struct CliffordRestriction {
  GroupPtr subgroup;                         // table of the subgroup
  std::vector<int> sub_elements;             // subgroup element -> parent element
  std::vector<std::pair<int, int>> parts;    // (irrep of subgroup, multiplicity)
  bool trivial_restriction = false;          // restricts to multiples of trivial
};
CliffordRestriction clifford_restrict(const FiniteGroup& g, const std::vector<int>& sub,
                                      const CharacterTable& parent_table, int nu);

// Build the subgroup as its own FiniteGroup (index i = sub[i], identity first).
std::pair<GroupPtr, std::vector<int>> subgroup_as_group(const FiniteGroup& g,
                                                        std::vector<int> sub);

// Verify V is a projective representation of q: V_k V_q = rho(k,q) V_{kq} with
// |rho| = 1.  Returns the factor system; throws NotProjective if the products
// are not proportional to V_{kq} within tol.
Eigen::MatrixXcd verify_projective(const FiniteGroup& q, const std::vector<Mat>& v,
                                   double tol = 1e-9);

// chi(irrep, element) helper for the common "character of an element" use.
cd character_value(const CharacterTable& t, int irrep, int element);

}  // namespace setnet
