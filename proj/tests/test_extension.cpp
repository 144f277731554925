#include "doctest.h"
#include "setnet/extension.hpp"
#include "setnet/group.hpp"

using namespace setnet;

TEST_CASE("cocycle checks") {
  auto z2 = FiniteGroup::cyclic(2);
  auto t = trivial_twist(z2, z2);
  auto w = Cocycle::trivial(2);
  auto rep = check_cocycle(t, w);
  CHECK(rep.valid);
  CHECK(rep.normalized);

  w.at(0, 1) = 1;  // breaks normalization
  CHECK_FALSE(check_cocycle(t, w).normalized);
}

TEST_CASE("second cohomology of Z2 with Z2 coefficients") {
  auto z2 = FiniteGroup::cyclic(2);
  auto h2 = enumerate_h2(trivial_twist(z2, z2));
  CHECK(h2.num_cocycles == 2);
  REQUIRE(h2.class_reps.size() == 2);

  auto split = build_extension(trivial_twist(z2, z2), h2.class_reps[0]);
  CHECK(isomorphism_class_name(*split.E) == "Z2xZ2");
  auto twisted = build_extension(trivial_twist(z2, z2), h2.class_reps[1]);
  CHECK(isomorphism_class_name(*twisted.E) == "Z4");
}

TEST_CASE("second cohomology of the Klein group and relabelling") {
  auto q = group_from_descriptor("preset: Z2xZ2");
  auto g = FiniteGroup::cyclic(2);
  auto t = trivial_twist(q, g);
  auto h2 = enumerate_h2(t);
  REQUIRE(h2.class_reps.size() == 8);
  auto orbits = reduce_by_relabelling(t, h2.class_reps);
  CHECK(orbits.size() == 4);

  // Extension types across the eight classes: Z2^3 once, Q8 once, and the
  // dihedral / Z4xZ2 types three times each.
  std::map<std::string, int> names;
  for (const auto& w : h2.class_reps) ++names[isomorphism_class_name(*build_extension(t, w).E)];
  CHECK(names["Z2xZ2xZ2"] == 1);
  CHECK(names["Q8"] == 1);
  CHECK(names["D8"] == 3);
  CHECK(names["Z4xZ2"] == 3);
}

TEST_CASE("twisted cohomology with inversion action") {
  auto z2 = FiniteGroup::cyclic(2);
  auto z4 = FiniteGroup::cyclic(4);
  auto t = inversion_twist(z2, z4);
  auto h2 = enumerate_h2(t);
  CHECK(h2.num_cocycles == 2);
  REQUIRE(h2.class_reps.size() == 2);

  auto a = build_extension(t, h2.class_reps[0]);
  auto b = build_extension(t, h2.class_reps[1]);
  CHECK(isomorphism_class_name(*a.E) == "D8");
  CHECK(isomorphism_class_name(*b.E) == "Q8");
  CHECK(b.omega.at(1, 1) == 2);
}

TEST_CASE("cyclic prime cohomology counts") {
  for (int p : {2, 3, 5}) {
    auto zp = FiniteGroup::cyclic(p);
    auto t = trivial_twist(zp, zp);
    auto h2 = enumerate_h2(t);
    CHECK(static_cast<int>(h2.class_reps.size()) == p);
    auto orbits = reduce_by_relabelling(t, h2.class_reps);
    CHECK(orbits.size() == 2);  // split vs cyclic of order p^2
    long long total = 0;
    for (auto s : h2.class_sizes) total += s;
    CHECK(total == h2.num_cocycles);
  }
}

TEST_CASE("search budget guards the enumeration") {
  auto q = group_from_descriptor("preset: Z2xZ2");
  CHECK_THROWS_AS(enumerate_h2(trivial_twist(q, FiniteGroup::cyclic(2)), 3),
                  SearchBudgetExceeded);
}

TEST_CASE("building from an invalid cocycle fails") {
  auto q = group_from_descriptor("preset: Z2xZ2");
  auto t = trivial_twist(q, FiniteGroup::cyclic(2));
  Cocycle w = Cocycle::trivial(4);
  w.at(1, 2) = 1;  // violates the cocycle condition
  auto rep = check_cocycle(t, w);
  REQUIRE_FALSE(rep.valid);
  CHECK_FALSE(rep.violations.empty());
  CHECK_THROWS_AS(build_extension(t, w), CocycleInvalid);
}

TEST_CASE("extension element bookkeeping") {
  auto z2 = FiniteGroup::cyclic(2);
  auto t = inversion_twist(z2, FiniteGroup::cyclic(4));
  Cocycle w = Cocycle::trivial(2);
  w.at(1, 1) = 2;
  auto ext = build_extension(t, w);  // Q8 in disguise
  CHECK(ext.E->order() == 8);
  CHECK(ext.eps(0) == 0);
  for (int e = 0; e < 8; ++e) {
    const int rebuilt = ext.E->mul(ext.embed_g[ext.g_part[e]], ext.eps(ext.coset_of[e]));
    CHECK(rebuilt == e);
  }
  for (int g = 0; g < 4; ++g) CHECK(ext.in_g(ext.embed_g[g]));
}

TEST_CASE("presenting a subgroup as an extension") {
  auto d3 = FiniteGroup::dihedral(3);
  auto ext = extension_from_subgroup(d3, {0, 1, 2});
  CHECK(ext.Q->order() == 2);
  CHECK(ext.G->order() == 3);
  // Conjugation by the reflection section inverts the rotations.
  CHECK(ext.twist.phi[1][1] == 2);
  CHECK(ext.omega.at(1, 1) == 0);  // reflections square to the identity

  CHECK_THROWS_AS(extension_from_subgroup(d3, {0, 3}), NotNormal);
}

TEST_CASE("twist and cocycle round trip") {
  auto z2 = FiniteGroup::cyclic(2);
  auto t = inversion_twist(z2, FiniteGroup::cyclic(4));
  for (int val : {0, 2}) {
    Cocycle w = Cocycle::trivial(2);
    w.at(1, 1) = val;
    auto ext = build_extension(t, w);
    auto back = extract_phi_omega(ext);
    CHECK(back.round_trip_checked);
    CHECK(back.omega.at(1, 1) == val);
    CHECK(back.twist.phi == t.phi);
  }
}

TEST_CASE("gauge invariant lambda words") {
  auto z2 = FiniteGroup::cyclic(2);
  auto z4 = FiniteGroup::cyclic(4);

  SUBCASE("squared section distinguishes the two inversion extensions") {
    auto t = inversion_twist(z2, z4);
    for (int val : {0, 2}) {
      Cocycle w = Cocycle::trivial(2);
      w.at(1, 1) = val;
      auto ext = build_extension(t, w);
      auto lam = invariant_lambda(ext, LambdaDescriptor::power(1, 2));
      REQUIRE(lam.single());
      CHECK(lam.element() == val);
    }
  }

  SUBCASE("a section dependent word is rejected") {
    auto ext = build_extension(trivial_twist(z2, z4), Cocycle::trivial(2));
    CHECK_THROWS_AS(invariant_lambda(ext, LambdaDescriptor::power(1, 2)), NotGaugeInvariant);
  }

  SUBCASE("words must land in the subgroup") {
    auto ext = build_extension(trivial_twist(z4, z2), Cocycle::trivial(4));
    CHECK_THROWS_AS(invariant_lambda(ext, LambdaDescriptor::power(1, 3)), InvalidInput);
    CHECK_THROWS_AS(invariant_lambda(ext, LambdaDescriptor::averaged_square(1)), InvalidInput);
  }

  SUBCASE("commutator words on a central extension") {
    auto q = group_from_descriptor("preset: Z2xZ2");
    auto t = trivial_twist(q, z2);
    auto h2 = enumerate_h2(t);
    std::map<std::string, std::vector<int>> comms;
    for (const auto& w : h2.class_reps) {
      auto ext = build_extension(t, w);
      auto lam = invariant_lambda(ext, LambdaDescriptor::commutator(1, 2));
      REQUIRE(lam.single());
      comms[isomorphism_class_name(*ext.E)].push_back(lam.element());
    }
    // Abelian extensions commute; the dihedral and quaternion ones do not.
    for (int v : comms["Z2xZ2xZ2"]) CHECK(v == 0);
    for (int v : comms["Z4xZ2"]) CHECK(v == 0);
    for (int v : comms["Q8"]) CHECK(v == 1);
  }

  SUBCASE("averaged squares separate the two order sixteen extensions") {
    auto q8 = FiniteGroup::quaternion8();
    auto z2q8 = FiniteGroup::direct_product(z2, q8);
    std::vector<int> sub;
    for (int b = 0; b < 8; ++b) sub.push_back(b);  // the (0, q) block
    auto ext1 = extension_from_subgroup(z2q8, sub);
    auto lam1 = invariant_lambda(ext1, LambdaDescriptor::averaged_square(1));
    CHECK(lam1.counts.at(0) == 2);  // squares hitting +1
    CHECK(lam1.counts.at(1) == 6);  // squares hitting -1

    auto p = FiniteGroup::direct_product(z4, q8);
    auto e2 = FiniteGroup::central_quotient(p, {0, 2 * 8 + 1});
    // Image of the Q8 factor inside the quotient.
    std::vector<int> parent_to_new(32, -1);
    for (int i = 0; i < 16; ++i) {
      parent_to_new[e2->quotient_reps()[i]] = i;
      parent_to_new[p->mul(e2->quotient_reps()[i], 17)] = i;
    }
    std::vector<int> q8_image;
    for (int b = 0; b < 8; ++b) q8_image.push_back(parent_to_new[b]);
    std::sort(q8_image.begin(), q8_image.end());
    auto ext2 = extension_from_subgroup(e2, q8_image);
    auto lam2 = invariant_lambda(ext2, LambdaDescriptor::averaged_square(1));
    // Here six squares land on the identity and two on the central involution.
    long long at_identity = 0, elsewhere = 0;
    for (const auto& [g, c] : lam2.counts) {
      if (g == 0) at_identity = c;
      else elsewhere += c;
    }
    CHECK(at_identity == 6);
    CHECK(elsewhere == 2);
  }
}
