// 1D toolkit: injective/normal MPS, injectivity and primitivity indices,
// gauge extraction between tensors describing the same state, and the
// block-permutation action of symmetries on restricted (subgroup-summed)
// MPS tensors.
#pragma once

#include <string>
#include <vector>

#include "setnet/group.hpp"
#include "setnet/rep.hpp"
#include "setnet/tensor.hpp"

namespace setnet {

// Site tensor A^i, i = 1..d, each D x D.
struct MpsTensor {
  int d = 0, D = 0;
  std::vector<Mat> A;
};

// Completely positive trace-preserving map given by Kraus operators; the
// constructor-checker enforces sum A_i^† A_i = 1 within 1e-9.
struct QuantumChannel {
  std::vector<Mat> kraus;
  int dim() const { return kraus.empty() ? 0 : static_cast<int>(kraus[0].rows()); }
};
QuantumChannel make_channel(std::vector<Mat> kraus);  // validates trace preservation

// Virtual-space block decomposition and the action of a symmetry on it.
struct BlockStructure {
  std::vector<std::string> labels;  // one per block (irrep-derived)
  std::vector<int> dims;
  Mat basis;  // unitary; consecutive column groups of size dims[i] span block i
};
struct BlockAction {
  std::vector<int> permutation;      // block i is mapped onto block permutation[i]
  std::vector<Mat> block_unitaries;  // unitary carried by block i within its image
};

// Smallest L <= cap with the length-L word map of full rank D^2; informally,
// words A^{i_1}..A^{i_L} span all D x D matrices.  `normal` is false when the
// cap is reached (block-structured tensors never become injective).
struct InjectivityResult {
  bool normal = false;
  int index = 0;
};
InjectivityResult injectivity_index(const MpsTensor& a, int cap);

// Smallest n <= cap such that T^n maps every pure state to a full-rank
// state: the kernel of the n-fold Choi matrix contains no product vector.
// The kernel test is exact when the kernel is empty or spanned by matrix
// units (which covers channels lifted from classical maps); otherwise a
// rank-one-distance minimization over the kernel is used and reported.
struct PrimitivityResult {
  bool primitive = false;
  int index = 0;
  bool heuristic_kernel = false;  // minimization path was needed at some step
};
PrimitivityResult primitivity_index(const QuantumChannel& t, int cap);

// Kraus lift of a column-stochastic-like nonnegative matrix M:
// one Kraus operator sqrt(M_ji) |j><i| per positive entry, normalized to a
// trace-preserving channel.  Primitivity index equals the classical index of
// M (smallest n with M^n entrywise positive).
QuantumChannel lifted_classical_channel(const Eigen::MatrixXd& m);

// Directed-cycle-plus-chord adjacency on D vertices (i -> i+1 mod D and
// D-1 -> 1) whose classical index attains D^2 - 2D + 2.
Eigen::MatrixXd classical_worst_case_matrix(int d);

// True iff the two length-L translation-invariant states are parallel within
// 1e-9 after normalization.  Throws DimensionMismatch on unequal d; L >= 3.
bool same_state(const MpsTensor& a, const MpsTensor& b, int l);

// Gauge Z with B^i = Z^{-1} A^i Z, unique up to a scalar, found through the
// physical-to-virtual isomorphism evaluated on matrix units and a least
// squares inversion.  Throws NotInjective (either input fails injectivity at
// L <= cap) or NoGaugeFound (states differ).
Mat extract_gauge(const MpsTensor& a, const MpsTensor& b);

// Partial group sum over a normal subgroup N of G in the regular
// representation: physical index (i,j) in G x G,
//   A^{(ij)} = (1/|N|) sum_{n in N} L_n E_ij L_n^†,
// bond dimension |G|.  Throws NotNormal.
MpsTensor restricted_mps(const GroupPtr& g, const std::vector<int>& n_elems);

// Global physical operator of g on the doubled index: S_g = L_g ⊗ conj(L_g).
Mat mps_symmetry_op(const GroupPtr& g, int elem);

// N-isotypic block decomposition of the bond space of restricted_mps(G, N);
// labels are N-irrep ids.
BlockStructure mps_block_structure(const GroupPtr& g, const std::vector<int>& n_elems);

// Induced virtual action of a physical symmetry S on the blocks: a block
// permutation plus per-block unitaries.  Throws NotASymmetry when S does not
// preserve the state.
BlockAction block_symmetry_action(const MpsTensor& a_res, const BlockStructure& blocks,
                                  const Mat& s);

// Serialization via the shared binary+JSON-header tensor format with legs
// (phys, left, right).
void dump_mps(const MpsTensor& a, const std::string& path);
MpsTensor load_mps(const std::string& path);

}  // namespace setnet
