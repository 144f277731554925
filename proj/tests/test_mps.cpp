#include "setnet/mps.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <vector>

#include "doctest.h"
#include "setnet/error.hpp"
#include "setnet/group.hpp"
#include "setnet/rep.hpp"

using namespace setnet;

namespace {

std::mt19937_64 rng_for(uint64_t seed) { return std::mt19937_64(0x315c5ULL ^ seed); }

Mat random_mat(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cd(g(rng), g(rng));
  return m;
}

MpsTensor random_mps(std::mt19937_64& rng, int d, int D) {
  MpsTensor t;
  t.d = d;
  t.D = D;
  for (int i = 0; i < d; ++i) t.A.push_back(random_mat(rng, D, D));
  return t;
}

MpsTensor ghz_tensor() {
  MpsTensor t;
  t.d = 2;
  t.D = 2;
  t.A.assign(2, Mat::Zero(2, 2));
  t.A[0](0, 0) = 1.0;
  t.A[1](1, 1) = 1.0;
  return t;
}

// The shipped two-level example: A^0 = |0><0|, A^1 = sigma_x.
MpsTensor shipped_example() {
  MpsTensor t;
  t.d = 2;
  t.D = 2;
  t.A.assign(2, Mat::Zero(2, 2));
  t.A[0](0, 0) = 1.0;
  t.A[1](0, 1) = 1.0;
  t.A[1](1, 0) = 1.0;
  return t;
}

// Independent word-map rank: materialize all d^L words and count singular
// values above 1e-9 of the largest.
int word_rank(const MpsTensor& t, int l) {
  long long rows = 1;
  for (int k = 0; k < l; ++k) rows *= t.d;
  Mat gamma(rows, t.D * t.D);
  for (long long w = 0; w < rows; ++w) {
    long long c = w;
    Mat prod = Mat::Identity(t.D, t.D);
    for (int k = 0; k < l; ++k) {
      prod = prod * t.A[static_cast<size_t>(c % t.d)];
      c /= t.d;
    }
    for (int i = 0; i < t.D; ++i)
      for (int j = 0; j < t.D; ++j) gamma(w, i + j * t.D) = prod(i, j);
  }
  Eigen::JacobiSVD<Mat> svd(gamma);
  int r = 0;
  while (r < svd.singularValues().size() &&
         svd.singularValues()(r) > 1e-9 * svd.singularValues()(0))
    ++r;
  return r;
}

QuantumChannel random_channel(std::mt19937_64& rng, int d, int k) {
  Mat block = random_mat(rng, d * k, d);
  Eigen::HouseholderQR<Mat> qr(block);
  Mat q = qr.householderQ() * Mat::Identity(d * k, d);
  std::vector<Mat> kraus;
  for (int s = 0; s < k; ++s) kraus.push_back(q.middleRows(s * d, d));
  return make_channel(std::move(kraus));
}

// Classical primitivity index by integer matrix powers (entrywise positive).
int classical_index(const Eigen::MatrixXd& m, int cap) {
  const int d = static_cast<int>(m.rows());
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(d, d);
  for (int n = 1; n <= cap; ++n) {
    p = p * m;
    bool pos = true;
    for (int i = 0; i < d && pos; ++i)
      for (int j = 0; j < d && pos; ++j)
        if (p(i, j) <= 0.0) pos = false;
    if (pos) return n;
  }
  return -1;
}

double gauge_angle(const Mat& a, const Mat& b) {
  const double cosine = std::abs((a.adjoint() * b).trace()) / (a.norm() * b.norm());
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - std::min(1.0, cosine))));
}

}  // namespace

TEST_CASE("channel constructor enforces trace preservation") {
  std::vector<Mat> bad = {Mat::Identity(2, 2), Mat::Identity(2, 2)};
  CHECK_THROWS_AS(make_channel(bad), InvalidInput);
  std::vector<Mat> good = {std::sqrt(0.5) * Mat::Identity(2, 2),
                           std::sqrt(0.5) * Mat::Identity(2, 2)};
  CHECK_NOTHROW(make_channel(good));
}

TEST_CASE("injectivity index of generic and structured tensors") {
  auto rng = rng_for(1);
  // d >= D^2: already the one-site word map is generically full rank.
  const MpsTensor gen = random_mps(rng, 5, 2);
  const InjectivityResult r1 = injectivity_index(gen, 8);
  CHECK(r1.normal);
  CHECK(r1.index == 1);

  const InjectivityResult ghz = injectivity_index(ghz_tensor(), 12);
  CHECK_FALSE(ghz.normal);

  const InjectivityResult ex = injectivity_index(shipped_example(), 8);
  CHECK(ex.normal);
  CHECK(ex.index == 2);
  // Independent rank oracle: full rank exactly at the returned index.
  CHECK(word_rank(shipped_example(), 1) == 2);
  CHECK(word_rank(shipped_example(), 2) == 4);

  const MpsTensor gen3 = random_mps(rng, 2, 3);
  const InjectivityResult r3 = injectivity_index(gen3, 20);
  CHECK(r3.normal);
  CHECK(word_rank(gen3, r3.index) == 9);
  if (r3.index > 1) CHECK(word_rank(gen3, r3.index - 1) < 9);
}

TEST_CASE("primitivity of depolarizing and identity channels") {
  const int d = 2;
  std::vector<Mat> units;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Mat e = Mat::Zero(d, d);
      e(i, j) = 1.0 / std::sqrt(static_cast<double>(d));
      units.push_back(e);
    }
  const PrimitivityResult dep = primitivity_index(make_channel(units), 6);
  CHECK(dep.primitive);
  CHECK(dep.index == 1);

  const PrimitivityResult idc = primitivity_index(make_channel({Mat::Identity(2, 2)}), 6);
  CHECK_FALSE(idc.primitive);
}

TEST_CASE("lifted classical worst case attains the quadratic index") {
  const Eigen::MatrixXd w3 = classical_worst_case_matrix(3);
  // Independent oracle: first entrywise-positive power of the adjacency.
  CHECK(classical_index(w3, 12) == 5);
  const PrimitivityResult r = primitivity_index(lifted_classical_channel(w3), 12);
  CHECK(r.primitive);
  CHECK(r.index == 5);
  CHECK_FALSE(r.heuristic_kernel);

  const Eigen::MatrixXd w4 = classical_worst_case_matrix(4);
  CHECK(classical_index(w4, 20) == 10);
  const PrimitivityResult r4 = primitivity_index(lifted_classical_channel(w4), 20);
  CHECK(r4.primitive);
  CHECK(r4.index == 10);
}

TEST_CASE("lifted classical channels reproduce the classical index") {
  auto rng = rng_for(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 3);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) m((i + 1) % d, i) = 1.0;
    m(0, 0) = 1.0;  // self loop keeps the cycle aperiodic
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (u(rng) < 0.3) m(i, j) += u(rng);
    const int cap = 2 * (d - 1) * (d - 1) + 2;
    const int ci = classical_index(m, cap);
    REQUIRE(ci > 0);
    const PrimitivityResult r = primitivity_index(lifted_classical_channel(m), cap);
    CHECK(r.primitive);
    CHECK(r.index == ci);
  }
}

TEST_CASE("random primitive channels respect the quadratic bound") {
  auto rng = rng_for(3);
  for (int d = 2; d <= 4; ++d) {
    for (int trial = 0; trial < 4; ++trial) {
      const QuantumChannel t = random_channel(rng, d, 3);
      const int bound = 2 * (d - 1) * (d - 1);
      const PrimitivityResult r = primitivity_index(t, bound + 2);
      if (r.primitive) CHECK(r.index <= bound);
    }
  }
}

TEST_CASE("same state detects gauge copies phases and strangers") {
  auto rng = rng_for(4);
  const MpsTensor a = random_mps(rng, 3, 2);
  Mat z = Mat::Identity(2, 2) + 0.4 * random_mat(rng, 2, 2);
  MpsTensor b = a;
  for (auto& m : b.A) m = z.inverse() * m * z;
  CHECK(same_state(a, b, 3));
  CHECK(same_state(a, b, 5));

  MpsTensor c = a;
  const cd omega = std::exp(cd(0.0, 2.0 * M_PI / 4.0));
  for (auto& m : c.A) m *= omega;
  CHECK(same_state(a, c, 4));  // omega^4 = 1 restores the global phase

  const MpsTensor d = random_mps(rng, 3, 2);
  CHECK_FALSE(same_state(a, d, 4));

  MpsTensor e = random_mps(rng, 4, 2);
  CHECK_THROWS_AS(same_state(a, e, 3), DimensionMismatch);
  CHECK_THROWS_AS(same_state(a, b, 2), InvalidInput);
}

TEST_CASE("gauge extraction round trips") {
  auto rng = rng_for(5);
  const MpsTensor a0 = random_mps(rng, 3, 2);
  const Mat z_id = extract_gauge(a0, a0);
  CHECK(gauge_angle(z_id, Mat::Identity(2, 2)) < 1e-7);

  for (int trial = 0; trial < 25; ++trial) {
    const int D = (trial % 2 == 0) ? 2 : 3;
    const int d = (D == 2) ? 3 : 4;
    const MpsTensor a = random_mps(rng, d, D);
    if (!injectivity_index(a, 2 * D * D + 2).normal) continue;
    Mat z0 = Mat::Identity(D, D) + 0.5 * random_mat(rng, D, D);
    MpsTensor b = a;
    for (auto& m : b.A) m = z0.inverse() * m * z0;
    const Mat z = extract_gauge(a, b);
    CHECK(gauge_angle(z, z0) < 1e-7);
    // Contract check: B^i = Z^{-1} A^i Z.
    for (int i = 0; i < d; ++i)
      CHECK((z.inverse() * a.A[static_cast<size_t>(i)] * z - b.A[static_cast<size_t>(i)]).norm() <
            1e-7);
  }

  CHECK_THROWS_AS(extract_gauge(ghz_tensor(), ghz_tensor()), NotInjective);
  const MpsTensor x = random_mps(rng, 3, 2);
  const MpsTensor y = random_mps(rng, 3, 2);
  CHECK_THROWS_AS(extract_gauge(x, y), NoGaugeFound);
}

TEST_CASE("restricted mps structure and invariance") {
  const GroupPtr d3 = FiniteGroup::dihedral(3);
  const std::vector<int> z3 = {0, 1, 2};
  const MpsTensor a = restricted_mps(d3, z3);
  CHECK(a.d == 36);
  CHECK(a.D == 6);
  // Hand value: A^{(0,0)} = (1/3)(E_00 + E_11 + E_22).
  for (int i = 0; i < 6; ++i)
    CHECK(std::abs(a.A[0](i, i) - (i < 3 ? cd(1.0 / 3.0, 0.0) : cd(0.0, 0.0))) < 1e-12);

  // Global operators S_g leave the state invariant for every g.
  for (int g = 0; g < 6; ++g) {
    const Mat s = mps_symmetry_op(d3, g);
    MpsTensor ap = a;
    for (auto& m : ap.A) m.setZero();
    for (int p = 0; p < a.d; ++p)
      for (int q = 0; q < a.d; ++q)
        if (std::abs(s(p, q)) > 0.0) ap.A[static_cast<size_t>(p)] += s(p, q) * a.A[static_cast<size_t>(q)];
    CHECK(same_state(ap, a, 3));
  }

  // N = G gives the isometric tensor: A^{(ij)} = (1/|G|) sum_n |ni><nj|.
  const GroupPtr z4 = FiniteGroup::cyclic(4);
  const MpsTensor iso = restricted_mps(z4, {0, 1, 2, 3});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int n = 0; n < 4; ++n)
        CHECK(std::abs(iso.A[static_cast<size_t>(i * 4 + j)](z4->mul(n, i), z4->mul(n, j)) -
                       cd(0.25, 0.0)) < 1e-12);

  CHECK_THROWS_AS(restricted_mps(d3, std::vector<int>{0, 3}), NotNormal);
  CHECK_THROWS_AS(restricted_mps(FiniteGroup::dihedral(10), std::vector<int>{0, 1}), TooLarge);
}

TEST_CASE("block structure of the rotation-restricted dihedral chain") {
  const GroupPtr d3 = FiniteGroup::dihedral(3);
  const std::vector<int> z3 = {0, 1, 2};
  const BlockStructure bs = mps_block_structure(d3, z3);
  REQUIRE(bs.labels.size() == 3);
  CHECK(bs.labels[0] == "nu0");
  CHECK(bs.dims == std::vector<int>{2, 2, 2});
  CHECK((bs.basis.adjoint() * bs.basis - Mat::Identity(6, 6)).norm() < 1e-9);

  // Every restricted matrix is block diagonal in this basis.
  const MpsTensor a = restricted_mps(d3, z3);
  int off_i = 0;
  for (size_t bi = 0; bi < bs.dims.size(); ++bi) {
    int off_j = 0;
    for (size_t bj = 0; bj < bs.dims.size(); ++bj) {
      if (bi != bj) {
        for (const Mat& m : a.A) {
          const Mat blk = bs.basis.middleCols(off_i, bs.dims[bi]).adjoint() * m *
                          bs.basis.middleCols(off_j, bs.dims[bj]);
          CHECK(blk.norm() < 1e-9);
        }
      }
      off_j += bs.dims[bj];
    }
    off_i += bs.dims[bi];
  }

  const BlockStructure full = mps_block_structure(FiniteGroup::cyclic(3), {0, 1, 2});
  CHECK(full.dims == std::vector<int>{1, 1, 1});
}

TEST_CASE("block symmetry action: rotations fix blocks, reflections swap the conjugate pair") {
  const GroupPtr d3 = FiniteGroup::dihedral(3);
  const std::vector<int> z3 = {0, 1, 2};
  const MpsTensor a = restricted_mps(d3, z3);
  const BlockStructure bs = mps_block_structure(d3, z3);

  for (int g = 0; g < 3; ++g) {
    const BlockAction act = block_symmetry_action(a, bs, mps_symmetry_op(d3, g));
    CHECK(act.permutation == std::vector<int>{0, 1, 2});
  }
  for (int g = 3; g < 6; ++g) {
    const BlockAction act = block_symmetry_action(a, bs, mps_symmetry_op(d3, g));
    CHECK(act.permutation == std::vector<int>{0, 2, 1});
    for (const Mat& u : act.block_unitaries)
      CHECK((u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).norm() < 1e-8);
  }

  // Representation property on the induced permutations.
  for (int g : {1, 3}) {
    for (int h : {2, 4}) {
      const auto pg = block_symmetry_action(a, bs, mps_symmetry_op(d3, g)).permutation;
      const auto ph = block_symmetry_action(a, bs, mps_symmetry_op(d3, h)).permutation;
      const auto pgh = block_symmetry_action(a, bs, mps_symmetry_op(d3, d3->mul(g, h))).permutation;
      for (size_t i = 0; i < pgh.size(); ++i)
        CHECK(pgh[i] == pg[static_cast<size_t>(ph[i])]);
    }
  }

  CHECK_THROWS_AS(block_symmetry_action(a, bs, Mat(Mat::Identity(36, 36) * cd(0.0, 1.0) +
                                                   Mat::Identity(36, 36))),
                  NotASymmetry);
}

TEST_CASE("pentagonal chain reflection acts as two disjoint transpositions") {
  const GroupPtr d5 = FiniteGroup::dihedral(5);
  const std::vector<int> z5 = {0, 1, 2, 3, 4};
  const MpsTensor a = restricted_mps(d5, z5);
  const BlockStructure bs = mps_block_structure(d5, z5);
  REQUIRE(bs.dims == std::vector<int>{2, 2, 2, 2, 2});
  const BlockAction act = block_symmetry_action(a, bs, mps_symmetry_op(d5, 5));
  // nu_m pairs with nu_{-m}: 1<->4 and 2<->3, the trivial block fixed.
  CHECK(act.permutation == std::vector<int>{0, 4, 3, 2, 1});
}

TEST_CASE("mps serialization round trip") {
  auto rng = rng_for(6);
  const MpsTensor a = random_mps(rng, 3, 2);
  const std::string path = "mps_roundtrip.bin";
  dump_mps(a, path);
  const MpsTensor b = load_mps(path);
  REQUIRE(b.d == a.d);
  REQUIRE(b.D == a.D);
  for (int i = 0; i < a.d; ++i)
    CHECK((a.A[static_cast<size_t>(i)] - b.A[static_cast<size_t>(i)]).norm() < 1e-12);
  std::remove(path.c_str());
}
