#include <cmath>

#include "doctest.h"
#include "setnet/group.hpp"
#include "setnet/rep.hpp"

using namespace setnet;

namespace {

void check_homomorphism(const FiniteGroup& g, const MatrixRep& rep) {
  for (int a = 0; a < g.order(); ++a)
    for (int b = 0; b < g.order(); ++b)
      CHECK((rep(a) * rep(b) - rep(g.mul(a, b))).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

void check_orthogonality(const CharacterTable& t) {
  const auto& g = *t.group;
  for (int r = 0; r < t.num_irreps(); ++r)
    for (int s = 0; s < t.num_irreps(); ++s) {
      cd acc{0.0, 0.0};
      for (int e = 0; e < g.order(); ++e) acc += std::conj(t.value(r, e)) * t.value(s, e);
      acc /= static_cast<double>(g.order());
      CHECK(std::abs(acc - cd{r == s ? 1.0 : 0.0, 0.0}) < 1e-8);
    }
}

}  // namespace

TEST_CASE("regular representations") {
  auto d3 = FiniteGroup::dihedral(3);
  auto L = regular_rep(*d3);
  auto R = right_regular_rep(*d3);
  check_homomorphism(*d3, L);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      CHECK((R(a) * R(b) - R(d3->mul(a, b))).norm() == doctest::Approx(0.0));
      CHECK((L(a) * R(b) - R(b) * L(a)).norm() == doctest::Approx(0.0));
    }
  // L_g |h> = |gh>
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(6);
  e1(1) = 1.0;
  Eigen::VectorXcd img = L(3) * e1;
  CHECK(std::abs(img(d3->mul(3, 1)) - cd{1.0, 0.0}) < 1e-14);
}

TEST_CASE("cyclic character table follows the root-of-unity convention") {
  auto z4 = FiniteGroup::cyclic(4);
  auto t = character_table(*z4);
  CHECK(t.exact);
  REQUIRE(t.num_irreps() == 4);
  // chi_k(j) = i^{kj}; irrep 1 sends the generator to i.
  CHECK(std::abs(t.value(1, 1) - cd{0.0, 1.0}) < 1e-12);
  CHECK(std::abs(t.value(2, 1) - cd{-1.0, 0.0}) < 1e-12);
  CHECK(std::abs(t.value(3, 3) - cd{0.0, 1.0}) < 1e-12);
  check_orthogonality(t);
}

TEST_CASE("dihedral and quaternion character tables") {
  auto d3 = FiniteGroup::dihedral(3);
  auto td = character_table(*d3);
  CHECK(td.exact);
  REQUIRE(td.degrees == std::vector<int>{1, 1, 2});
  CHECK(std::abs(td.value(2, 1) - cd{-1.0, 0.0}) < 1e-12);  // rotation in the 2-dim irrep
  CHECK(std::abs(td.value(2, 3)) < 1e-12);                   // reflections traceless
  CHECK(std::abs(td.value(1, 3) - cd{-1.0, 0.0}) < 1e-12);
  check_orthogonality(td);

  auto q8 = FiniteGroup::quaternion8();
  auto tq = character_table(*q8);
  CHECK(tq.exact);
  REQUIRE(tq.degrees == std::vector<int>{1, 1, 1, 1, 2});
  CHECK(std::abs(tq.value(4, 1) - cd{-2.0, 0.0}) < 1e-12);  // -1 in the 2-dim irrep
  CHECK(std::abs(tq.value(4, 2)) < 1e-12);
  check_orthogonality(tq);
}

TEST_CASE("product and quotient character tables") {
  auto p = group_from_descriptor("preset: Z2xQ8");
  auto tp = character_table(*p);
  CHECK(tp.exact);
  CHECK(tp.num_irreps() == 10);
  check_orthogonality(tp);

  auto q = group_from_descriptor("preset: Z4xQ8/Z2");
  auto tq = character_table(*q);
  CHECK(tq.exact);
  int dim_sq = 0;
  for (int d : tq.degrees) dim_sq += d * d;
  CHECK(dim_sq == 16);
  check_orthogonality(tq);
}

TEST_CASE("table groups reuse exact tables through isomorphisms") {
  // A quaternion group handed over as a bare table still gets an exact table.
  auto raw = group_from_descriptor(group_descriptor(*FiniteGroup::quaternion8()));
  auto q8_as_table = std::make_shared<FiniteGroup>(raw->table());
  CHECK(q8_as_table->kind() == GroupKind::Table);
  auto t = character_table(*q8_as_table);
  CHECK(t.exact);
  CHECK(t.degrees == std::vector<int>{1, 1, 1, 1, 2});
}

TEST_CASE("abelian table groups get exact tables with cyclic indexing") {
  auto q8 = FiniteGroup::quaternion8();
  auto [sub, to_parent] = subgroup_as_group(*q8, {0, 1, 2, 3});  // {1,-1,i,-i}
  CHECK(sub->order() == 4);
  auto t = character_table(*sub);
  CHECK(t.exact);
  // i sits at subgroup index 2 and generates; irrep 1 must send it to i.
  CHECK(to_parent[2] == 2);
  CHECK(std::abs(t.value(1, 2) - cd{0.0, 1.0}) < 1e-12);
  check_orthogonality(t);
}

TEST_CASE("numeric fallback on the alternating group") {
  // (Z2xZ2) : Z3 with the 3-cycle permuting the involutions is A4: not
  // isomorphic to any closed-form preset, so the class-matrix method runs.
  auto v4 = FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2));
  auto z3 = FiniteGroup::cyclic(3);
  std::vector<std::vector<int>> act = {{0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}};
  auto a4 = FiniteGroup::semidirect_product(v4, z3, act);
  REQUIRE(a4->order() == 12);
  REQUIRE(conjugacy_classes(*a4).size() == 4);

  auto t = character_table(*a4);
  CHECK_FALSE(t.exact);
  std::vector<int> degs = t.degrees;
  std::sort(degs.begin(), degs.end());
  CHECK(degs == std::vector<int>{1, 1, 1, 3});
  check_orthogonality(t);

  auto mult = decompose_rep(regular_rep(*a4), t);
  CHECK(mult == t.degrees);
}

TEST_CASE("irreducible matrices are homomorphisms matching their characters") {
  for (const char* d : {"preset: Z3", "preset: D3", "preset: D4", "preset: Q8",
                        "preset: Z2xQ8"}) {
    auto g = group_from_descriptor(d);
    auto reps = irrep_matrices(*g);
    auto t = character_table(*g);
    REQUIRE(static_cast<int>(reps.size()) == t.num_irreps());
    for (int r = 0; r < t.num_irreps(); ++r) {
      check_homomorphism(*g, reps[static_cast<size_t>(r)]);
      CHECK(reps[static_cast<size_t>(r)].dim() == t.degrees[static_cast<size_t>(r)]);
      for (int e = 0; e < g->order(); ++e)
        CHECK(std::abs(reps[static_cast<size_t>(r)](e).trace() - t.value(r, e)) < 1e-10);
    }
  }
  auto z3 = FiniteGroup::cyclic(3);
  auto a4_like = std::make_shared<FiniteGroup>(
      FiniteGroup::semidirect_product(
          FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)), z3,
          {{0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}})
          ->table());
  CHECK_THROWS_AS(irrep_matrices(*a4_like), Unsupported);
}

TEST_CASE("regular representation decomposes with dimension multiplicities") {
  for (const char* d : {"preset: Z4", "preset: D3", "preset: Q8"}) {
    auto g = group_from_descriptor(d);
    auto t = character_table(*g);
    CHECK(decompose_rep(regular_rep(*g), t) == t.degrees);
  }
}

TEST_CASE("clifford restriction to a normal subgroup") {
  auto d3 = FiniteGroup::dihedral(3);
  auto t = character_table(*d3);

  auto triv = clifford_restrict(*d3, {0, 1, 2}, t, 0);
  CHECK(triv.trivial_restriction);

  auto sgn = clifford_restrict(*d3, {0, 1, 2}, t, 1);
  CHECK(sgn.trivial_restriction);  // the reflection sign dies on rotations

  auto two = clifford_restrict(*d3, {0, 1, 2}, t, 2);
  CHECK_FALSE(two.trivial_restriction);
  REQUIRE(two.parts.size() == 2);  // splits into the two nontrivial Z3 characters
  CHECK(two.parts[0].second == 1);
  CHECK(two.parts[1].second == 1);

  CHECK_THROWS_AS(clifford_restrict(*d3, {0, 3}, t, 0), NotNormal);
}

TEST_CASE("projective factor systems") {
  auto v4 = group_from_descriptor("preset: Z2xZ2");
  Mat I2 = Mat::Identity(2, 2);
  Mat sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, cd{0, -1}, cd{0, 1}, 0;
  sz << 1, 0, 0, -1;
  const cd im{0.0, 1.0};
  // Elements (0,0),(0,1),(1,0),(1,1) -> 1, i sz, -i sy, -i sx.
  std::vector<Mat> v = {I2, im * sz, -im * sy, -im * sx};
  Mat rho = verify_projective(*v4, v);
  // The factor system is nontrivial: the two generators anticommute.
  CHECK(std::abs(rho(1, 2) + rho(2, 1)) < 1e-12);
  CHECK(std::abs(std::abs(rho(1, 2)) - 1.0) < 1e-12);

  std::vector<Mat> bad = {I2, I2 + sx, sx, sz};
  CHECK_THROWS_AS(verify_projective(*v4, bad), NotProjective);
}
