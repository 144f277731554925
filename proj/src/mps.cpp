#include "setnet/mps.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "setnet/error.hpp"

namespace setnet {

namespace {

Mat vec_to_mat(const Eigen::VectorXcd& v, int d) {
  // Column-major unvec, matching Eigen's default storage of Map below.
  Mat m(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) m(i, j) = v(i + j * d);
  return m;
}

Eigen::VectorXcd mat_to_vec(const Mat& m) {
  const int d = static_cast<int>(m.rows());
  Eigen::VectorXcd v(d * d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) v(i + j * d) = m(i, j);
  return v;
}

// Orthonormal basis of the column space, singular values thresholded at
// 1e-9 times the largest.
Mat column_space(const Mat& m) {
  if (m.cols() == 0) return Mat(m.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) return Mat(m.rows(), 0);
  int rank = 0;
  while (rank < s.size() && s(rank) > 1e-9 * s(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

// One step of the word-subspace iteration: span{ops[i] * X : X in basis}.
Mat word_step(const std::vector<Mat>& ops, const Mat& basis, int d) {
  Mat next(d * d, static_cast<int>(ops.size()) * basis.cols());
  int col = 0;
  for (const Mat& op : ops)
    for (int j = 0; j < basis.cols(); ++j) next.col(col++) = mat_to_vec(op * vec_to_mat(basis.col(j), d));
  return column_space(next);
}

void check_square_family(const std::vector<Mat>& a, const char* who) {
  if (a.empty()) throw InvalidInput(std::string(who) + ": empty operator family");
  const int d = static_cast<int>(a[0].rows());
  for (const Mat& m : a)
    if (m.rows() != d || m.cols() != d)
      throw DimensionMismatch(std::string(who) + ": operators must be square and equal-sized");
}

}  // namespace

QuantumChannel make_channel(std::vector<Mat> kraus) {
  check_square_family(kraus, "make_channel");
  const int d = static_cast<int>(kraus[0].rows());
  Mat sum = Mat::Zero(d, d);
  for (const Mat& k : kraus) sum += k.adjoint() * k;
  if ((sum - Mat::Identity(d, d)).norm() > 1e-9)
    throw InvalidInput("make_channel: Kraus operators are not trace preserving");
  QuantumChannel t;
  t.kraus = std::move(kraus);
  return t;
}

InjectivityResult injectivity_index(const MpsTensor& a, int cap) {
  if (cap < 1) throw InvalidInput("injectivity_index: cap must be positive");
  if (a.d <= 0 || a.D <= 0 || static_cast<int>(a.A.size()) != a.d)
    throw InvalidInput("injectivity_index: malformed tensor");
  check_square_family(a.A, "injectivity_index");
  const int dd = a.D * a.D;
  Mat basis(dd, a.d);
  for (int i = 0; i < a.d; ++i) basis.col(i) = mat_to_vec(a.A[static_cast<size_t>(i)]);
  basis = column_space(basis);
  for (int l = 1; l <= cap; ++l) {
    if (basis.cols() == dd) return {true, l};
    if (l < cap) basis = word_step(a.A, basis, a.D);
  }
  return {false, cap};
}

PrimitivityResult primitivity_index(const QuantumChannel& t, int cap) {
  if (cap < 1) throw InvalidInput("primitivity_index: cap must be positive");
  check_square_family(t.kraus, "primitivity_index");
  const int d = t.dim();
  const int dd = d * d;
  std::mt19937_64 rng(0x9e3779b9ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  bool used_heuristic = false;

  Mat basis(dd, static_cast<int>(t.kraus.size()));
  for (size_t i = 0; i < t.kraus.size(); ++i) basis.col(static_cast<int>(i)) = mat_to_vec(t.kraus[i]);
  basis = column_space(basis);

  for (int n = 1; n <= cap; ++n) {
    // T^n(|v><v|) has full rank for every v iff the Hilbert-Schmidt
    // complement of the length-n Kraus-word span contains no rank-one matrix.
    bool rank_one_in_kernel = false;
    if (basis.cols() < dd) {
      // Exact certificate: a matrix unit in the complement.
      for (int i = 0; i < d && !rank_one_in_kernel; ++i)
        for (int j = 0; j < d && !rank_one_in_kernel; ++j) {
          Eigen::VectorXcd u = Eigen::VectorXcd::Zero(dd);
          u(i + j * d) = 1.0;
          if ((basis.adjoint() * u).norm() < 1e-7) rank_one_in_kernel = true;
        }
      if (!rank_one_in_kernel) {
        // Alternating projection between the complement and the rank-one
        // manifold; only reachable for non-classical kernels.
        used_heuristic = true;
        for (int attempt = 0; attempt < 8 && !rank_one_in_kernel; ++attempt) {
          Eigen::VectorXcd x(dd);
          for (int i = 0; i < dd; ++i) x(i) = cd(gauss(rng), gauss(rng));
          for (int it = 0; it < 300; ++it) {
            x -= basis * (basis.adjoint() * x);
            if (x.norm() < 1e-14) break;
            Mat m = vec_to_mat(x, d);
            Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
            Mat r1 = svd.singularValues()(0) * svd.matrixU().col(0) * svd.matrixV().col(0).adjoint();
            x = mat_to_vec(r1);
            x.normalize();
          }
          if (x.norm() > 0.5 && (basis.adjoint() * x).norm() < 1e-7) {
            Mat m = vec_to_mat(x, d);
            Eigen::JacobiSVD<Mat> svd(m);
            if (svd.singularValues().size() < 2 ||
                svd.singularValues()(1) < 1e-7 * svd.singularValues()(0))
              rank_one_in_kernel = true;
          }
        }
      }
    }
    if (!rank_one_in_kernel) return {true, n, used_heuristic};
    if (n < cap) basis = word_step(t.kraus, basis, d);
  }
  return {false, cap, used_heuristic};
}

QuantumChannel lifted_classical_channel(const Eigen::MatrixXd& m) {
  const int d = static_cast<int>(m.rows());
  if (d == 0 || m.cols() != d) throw InvalidInput("lifted_classical_channel: matrix must be square");
  std::vector<Mat> kraus;
  for (int i = 0; i < d; ++i) {
    double colsum = 0.0;
    for (int j = 0; j < d; ++j) {
      if (m(j, i) < 0.0) throw InvalidInput("lifted_classical_channel: negative entry");
      colsum += m(j, i);
    }
    if (colsum <= 0.0) throw InvalidInput("lifted_classical_channel: zero column");
    for (int j = 0; j < d; ++j)
      if (m(j, i) > 0.0) {
        Mat k = Mat::Zero(d, d);
        k(j, i) = std::sqrt(m(j, i) / colsum);
        kraus.push_back(std::move(k));
      }
  }
  return make_channel(std::move(kraus));
}

Eigen::MatrixXd classical_worst_case_matrix(int d) {
  if (d < 2) throw InvalidInput("classical_worst_case_matrix: need D >= 2");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) m((i + 1) % d, i) = 1.0;
  m(1, d - 1) = 1.0;
  return m;
}

namespace {

cd ti_overlap(const MpsTensor& a, const MpsTensor& b, int l) {
  // <psi_B | psi_A> via the mixed transfer operator sum_i A^i (x) conj(B^i).
  const int da = a.D, db = b.D;
  Mat e = Mat::Zero(da * db, da * db);
  for (int i = 0; i < a.d; ++i) {
    const Mat& x = a.A[static_cast<size_t>(i)];
    const Mat& y = b.A[static_cast<size_t>(i)];
    for (int p = 0; p < da; ++p)
      for (int q = 0; q < db; ++q)
        for (int r = 0; r < da; ++r)
          for (int s = 0; s < db; ++s) e(p * db + q, r * db + s) += x(p, r) * std::conj(y(q, s));
  }
  Mat pw = Mat::Identity(da * db, da * db);
  for (int k = 0; k < l; ++k) pw = pw * e;
  return pw.trace();
}

}  // namespace

bool same_state(const MpsTensor& a, const MpsTensor& b, int l) {
  if (a.d != b.d) throw DimensionMismatch("same_state: physical dimensions differ");
  if (l < 3) throw InvalidInput("same_state: need L >= 3");
  const double na = std::real(ti_overlap(a, a, l));
  const double nb = std::real(ti_overlap(b, b, l));
  if (na <= 0.0 || nb <= 0.0) throw InvalidInput("same_state: zero-norm state");
  const double cosine = std::abs(ti_overlap(a, b, l)) / std::sqrt(na * nb);
  return 1.0 - cosine <= 1e-9;
}

Mat extract_gauge(const MpsTensor& a, const MpsTensor& b) {
  if (a.d != b.d || a.D != b.D)
    throw DimensionMismatch("extract_gauge: tensors must share both dimensions");
  const int d = a.d, D = a.D, dd = D * D;
  const int cap = 2 * dd + 2;
  const InjectivityResult ia = injectivity_index(a, cap);
  if (!ia.normal) throw NotInjective("extract_gauge: first tensor is not injective");
  const InjectivityResult ib = injectivity_index(b, cap);
  if (!ib.normal) throw NotInjective("extract_gauge: second tensor is not injective");
  if (!same_state(a, b, 3)) throw NoGaugeFound("extract_gauge: states differ at length 3");

  const int l = std::max(ia.index, ib.index);
  double rows_d = 1.0;
  for (int k = 0; k < l; ++k) rows_d *= d;
  if (rows_d > (1 << 20)) throw MemoryBudgetExceeded("extract_gauge: word matrix too large");
  const long long rows = static_cast<long long>(rows_d);

  // Word maps Gamma: row per length-l physical word, column per virtual
  // matrix-unit coordinate.
  Mat ga(rows, dd), gb(rows, dd);
  std::vector<int> word(static_cast<size_t>(l), 0);
  for (long long w = 0; w < rows; ++w) {
    long long c = w;
    for (int k = 0; k < l; ++k) {
      word[static_cast<size_t>(k)] = static_cast<int>(c % d);
      c /= d;
    }
    Mat pa = Mat::Identity(D, D), pb = Mat::Identity(D, D);
    for (int k = 0; k < l; ++k) {
      pa = pa * a.A[static_cast<size_t>(word[static_cast<size_t>(k)])];
      pb = pb * b.A[static_cast<size_t>(word[static_cast<size_t>(k)])];
    }
    ga.row(w) = mat_to_vec(pa).transpose();
    gb.row(w) = mat_to_vec(pb).transpose();
  }

  // Least-squares inversion of the physical-to-virtual isomorphism:
  // O maps X to the B-virtual matrix with the same physical image.
  Mat o = gb.completeOrthogonalDecomposition().solve(ga);

  // The row pairing is Tr[X A^w], so for a gauge pair with B^i = Z^{-1}A^iZ
  // the recovered map acts as O(X) = V X V^{-1} with V = Z^T.  The realigned
  // matrix R[(k,i),(l,j)] = O[(k,l),(i,j)] = V_{ki} (V^{-1})_{jl} is rank one.
  Mat r(dd, dd);
  for (int k = 0; k < D; ++k)
    for (int i = 0; i < D; ++i)
      for (int lq = 0; lq < D; ++lq)
        for (int j = 0; j < D; ++j) r(k + i * D, lq + j * D) = o(k + lq * D, i + j * D);
  Eigen::JacobiSVD<Mat> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues()(1) > 1e-4 * svd.singularValues()(0))
    throw NoGaugeFound("extract_gauge: transfer map is not a gauge conjugation");
  Eigen::VectorXcd uvec = svd.matrixU().col(0);
  Eigen::VectorXcd wvec = svd.singularValues()(0) * svd.matrixV().col(0).conjugate();
  const Mat v_mat = vec_to_mat(uvec, D);        // V up to scalar
  const Mat vinv_t = vec_to_mat(wvec, D);       // (V^{-1})^T times the rest of it
  Mat z = v_mat.transpose();

  // The two factors must be mutually inverse up to the split of the scalar.
  Eigen::JacobiSVD<Mat> zsvd(z);
  if (zsvd.singularValues()(D - 1) < 1e-8 * zsvd.singularValues()(0))
    throw NoGaugeFound("extract_gauge: singular gauge candidate");
  Mat prod = v_mat * vinv_t.transpose();
  const cd tau = prod.trace() / static_cast<double>(D);
  if ((prod - tau * Mat::Identity(D, D)).norm() > 1e-6 * std::abs(tau) * D)
    throw NoGaugeFound("extract_gauge: realigned factors are not inverse");

  // Polish: the intertwiner space A^i Z = Z B^i is one dimensional for an
  // injective gauge pair; its null vector is the same gauge without the
  // least-squares noise of the realignment route.
  {
    Mat m(d * dd, dd);
    for (int p = 0; p < d; ++p) {
      const Mat& x = a.A[static_cast<size_t>(p)];
      const Mat& y = b.A[static_cast<size_t>(p)];
      for (int rr = 0; rr < D; ++rr)
        for (int cc = 0; cc < D; ++cc)
          for (int i = 0; i < D; ++i)
            for (int j = 0; j < D; ++j)
              m(p * dd + rr + cc * D, i + j * D) =
                  (cc == j ? x(rr, i) : cd(0.0, 0.0)) - (rr == i ? y(j, cc) : cd(0.0, 0.0));
    }
    Eigen::JacobiSVD<Mat> msvd(m, Eigen::ComputeThinV);
    const Mat z_ref = vec_to_mat(msvd.matrixV().col(dd - 1), D);
    const double cosine = std::abs((z.adjoint() * z_ref).trace()) / (z.norm() * z_ref.norm());
    if (cosine < 0.99)
      throw NoGaugeFound("extract_gauge: realigned gauge disagrees with the intertwiner");
    z = z_ref;
  }

  Mat zi = z.inverse();
  for (int i = 0; i < d; ++i) {
    const Mat lhs = zi * a.A[static_cast<size_t>(i)] * z;
    if ((lhs - b.A[static_cast<size_t>(i)]).norm() >
        1e-8 * std::max(1.0, b.A[static_cast<size_t>(i)].norm()))
      throw NoGaugeFound("extract_gauge: candidate fails the conjugation check");
  }

  // Scalar convention: unit determinant, then largest entry real positive.
  const cd det = z.determinant();
  z /= std::pow(det, 1.0 / static_cast<double>(D));
  int bi = 0, bj = 0;
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      if (std::abs(z(i, j)) > std::abs(z(bi, bj))) {
        bi = i;
        bj = j;
      }
  z *= std::conj(z(bi, bj)) / std::abs(z(bi, bj));
  return z;
}

MpsTensor restricted_mps(const GroupPtr& g, const std::vector<int>& n_elems) {
  if (!g) throw InvalidInput("restricted_mps: empty group");
  const int n = g->order();
  if (n > 16) throw TooLarge("restricted_mps: |G| <= 16");
  if (!is_normal_subgroup(*g, n_elems)) throw NotNormal("restricted_mps: subgroup is not normal");
  MpsTensor t;
  t.d = n * n;
  t.D = n;
  t.A.assign(static_cast<size_t>(t.d), Mat::Zero(n, n));
  const double w = 1.0 / static_cast<double>(n_elems.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m : n_elems) t.A[static_cast<size_t>(i * n + j)](g->mul(m, i), g->mul(m, j)) += w;
  return t;
}

Mat mps_symmetry_op(const GroupPtr& g, int elem) {
  if (!g) throw InvalidInput("mps_symmetry_op: empty group");
  const int n = g->order();
  if (elem < 0 || elem >= n) throw InvalidInput("mps_symmetry_op: element out of range");
  Mat s = Mat::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(g->mul(elem, i) * n + g->mul(elem, j), i * n + j) = 1.0;
  return s;
}

BlockStructure mps_block_structure(const GroupPtr& g, const std::vector<int>& n_elems) {
  if (!g) throw InvalidInput("mps_block_structure: empty group");
  if (!is_normal_subgroup(*g, n_elems))
    throw NotNormal("mps_block_structure: subgroup is not normal");
  const int n = g->order();
  auto [sub, to_parent] = subgroup_as_group(*g, n_elems);
  const CharacterTable ct = character_table(*sub);
  const MatrixRep lreg = regular_rep(*g);

  BlockStructure out;
  out.basis = Mat(n, n);
  int col = 0;
  for (int nu = 0; nu < ct.num_irreps(); ++nu) {
    Mat p = Mat::Zero(n, n);
    for (int m = 0; m < sub->order(); ++m)
      p += std::conj(ct.value(nu, m)) * lreg(to_parent[static_cast<size_t>(m)]);
    p *= static_cast<double>(ct.degrees[static_cast<size_t>(nu)]) /
         static_cast<double>(sub->order());
    Eigen::SelfAdjointEigenSolver<Mat> es(p);
    int dim = 0;
    for (int k = 0; k < n; ++k)
      if (es.eigenvalues()(k) > 0.5) {
        out.basis.col(col + dim) = es.eigenvectors().col(k);
        ++dim;
      }
    if (dim > 0) {
      out.labels.push_back("nu" + std::to_string(nu));
      out.dims.push_back(dim);
      col += dim;
    }
  }
  if (col != n) throw NumericalDegeneracy("mps_block_structure: blocks do not fill the space");
  return out;
}

BlockAction block_symmetry_action(const MpsTensor& a_res, const BlockStructure& blocks,
                                  const Mat& s) {
  const int d = a_res.d, D = a_res.D;
  if (s.rows() != d || s.cols() != d)
    throw DimensionMismatch("block_symmetry_action: operator must act on the physical index");
  MpsTensor ap;
  ap.d = d;
  ap.D = D;
  ap.A.assign(static_cast<size_t>(d), Mat::Zero(D, D));
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q)
      if (std::abs(s(p, q)) > 0.0) ap.A[static_cast<size_t>(p)] += s(p, q) * a_res.A[static_cast<size_t>(q)];
  if (!same_state(ap, a_res, 3)) throw NotASymmetry("block_symmetry_action: operator moves the state");

  // Invertible intertwiner Z with S.A = Z^{-1} A Z, from the nullspace of the
  // stacked commutation equations Z (S.A)^p = A^p Z, using
  // vec(Z X) = (X^T kron I) vec(Z) and vec(Y Z) = (I kron Y) vec(Z).
  Mat m(d * D * D, D * D);
  for (int p = 0; p < d; ++p) {
    const Mat& x = ap.A[static_cast<size_t>(p)];
    const Mat& y = a_res.A[static_cast<size_t>(p)];
    for (int r = 0; r < D; ++r)
      for (int c = 0; c < D; ++c)
        for (int i = 0; i < D; ++i)
          for (int j = 0; j < D; ++j)
            m(p * D * D + r + c * D, i + j * D) =
                (r == i ? x(j, c) : cd(0.0, 0.0)) - (c == j ? y(r, i) : cd(0.0, 0.0));
  }
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  std::vector<int> null_cols;
  for (int k = 0; k < sv.size(); ++k)
    if (sv(k) < 1e-9 * std::max(1.0, static_cast<double>(sv(0)))) null_cols.push_back(k);
  if (null_cols.empty()) throw NotASymmetry("block_symmetry_action: no intertwiner");

  std::mt19937_64 rng(0xb10cULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat z;
  bool ok = false;
  for (int attempt = 0; attempt < 16 && !ok; ++attempt) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(D * D);
    for (int k : null_cols) x += cd(gauss(rng), gauss(rng)) * svd.matrixV().col(k);
    z = vec_to_mat(x, D);
    Eigen::JacobiSVD<Mat> zs(z);
    if (zs.singularValues()(D - 1) > 1e-6 * zs.singularValues()(0)) ok = true;
  }
  if (!ok) throw NotASymmetry("block_symmetry_action: no invertible intertwiner");

  const int nb = static_cast<int>(blocks.dims.size());
  BlockAction act;
  act.permutation.assign(static_cast<size_t>(nb), -1);
  act.block_unitaries.resize(static_cast<size_t>(nb));
  int off_i = 0;
  std::vector<int> offsets(static_cast<size_t>(nb), 0);
  for (int i = 1; i < nb; ++i)
    offsets[static_cast<size_t>(i)] =
        offsets[static_cast<size_t>(i - 1)] + blocks.dims[static_cast<size_t>(i - 1)];
  for (int i = 0; i < nb; ++i) {
    const int di = blocks.dims[static_cast<size_t>(i)];
    const Mat ui = blocks.basis.middleCols(offsets[static_cast<size_t>(i)], di);
    const Mat y = z * ui;
    int best = -1;
    double best_w = -1.0, total = 0.0;
    for (int j = 0; j < nb; ++j) {
      const Mat uj =
          blocks.basis.middleCols(offsets[static_cast<size_t>(j)], blocks.dims[static_cast<size_t>(j)]);
      const double w = (uj.adjoint() * y).squaredNorm();
      total += w;
      if (w > best_w) {
        best_w = w;
        best = j;
      }
    }
    if (best_w < (1.0 - 1e-8) * total)
      throw NumericalDegeneracy("block_symmetry_action: intertwiner smears blocks");
    if (blocks.dims[static_cast<size_t>(best)] != di)
      throw NumericalDegeneracy("block_symmetry_action: block dimension mismatch");
    act.permutation[static_cast<size_t>(i)] = best;
    const Mat uj = blocks.basis.middleCols(offsets[static_cast<size_t>(best)], di);
    Eigen::JacobiSVD<Mat> bs(Mat(uj.adjoint() * y), Eigen::ComputeThinU | Eigen::ComputeThinV);
    act.block_unitaries[static_cast<size_t>(i)] = bs.matrixU() * bs.matrixV().adjoint();
  }
  std::set<int> seen(act.permutation.begin(), act.permutation.end());
  if (static_cast<int>(seen.size()) != nb)
    throw NumericalDegeneracy("block_symmetry_action: action is not a block permutation");
  (void)off_i;
  return act;
}

void dump_mps(const MpsTensor& a, const std::string& path) {
  DenseTensor t = DenseTensor::zeros({{"phys", a.d}, {"left", a.D}, {"right", a.D}});
  for (int p = 0; p < a.d; ++p)
    for (int l = 0; l < a.D; ++l)
      for (int r = 0; r < a.D; ++r) t.at({p, l, r}) = a.A[static_cast<size_t>(p)](l, r);
  dump_tensor(t, path);
}

MpsTensor load_mps(const std::string& path) {
  const DenseTensor t = load_tensor(path);
  if (t.legs.size() != 3 || t.legs[0].name != "phys" || t.legs[1].name != "left" ||
      t.legs[2].name != "right" || t.legs[1].dim != t.legs[2].dim)
    throw InvalidInput("load_mps: expected legs (phys, left, right)");
  MpsTensor a;
  a.d = t.legs[0].dim;
  a.D = t.legs[1].dim;
  a.A.assign(static_cast<size_t>(a.d), Mat::Zero(a.D, a.D));
  for (int p = 0; p < a.d; ++p)
    for (int l = 0; l < a.D; ++l)
      for (int r = 0; r < a.D; ++r) a.A[static_cast<size_t>(p)](l, r) = t.at({p, l, r});
  return a;
}

}  // namespace setnet
