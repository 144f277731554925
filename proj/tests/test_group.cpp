#include "doctest.h"
#include "setnet/group.hpp"

using namespace setnet;

TEST_CASE("cyclic group basics") {
  auto z4 = FiniteGroup::cyclic(4);
  CHECK(z4->order() == 4);
  CHECK(z4->mul(1, 3) == 0);
  CHECK(z4->inverse(3) == 1);
  CHECK(z4->element_order(1) == 4);
  CHECK(z4->element_order(2) == 2);
  CHECK(z4->power(1, -1) == 3);
  CHECK(z4->power(3, 5) == 3);
  CHECK(z4->is_abelian());
}

TEST_CASE("dihedral conjugacy classes") {
  auto d3 = FiniteGroup::dihedral(3);
  CHECK(d3->order() == 6);
  CHECK_FALSE(d3->is_abelian());
  auto cls = conjugacy_classes(*d3);
  REQUIRE(cls.size() == 3);
  CHECK(cls[0].size() == 1);  // identity
  CHECK(cls[1].size() == 2);  // rotations
  CHECK(cls[2].size() == 3);  // reflections
  CHECK(cls[0][0] == 0);
}

TEST_CASE("quaternion structure") {
  auto q8 = FiniteGroup::quaternion8();
  // Order 1,-1,i,-i,j,-j,k,-k.
  CHECK(q8->element_order(1) == 2);   // -1
  CHECK(q8->element_order(2) == 4);   // i
  CHECK(q8->mul(2, 4) == 6);          // i j = k
  CHECK(q8->mul(4, 2) == 7);          // j i = -k
  CHECK(q8->mul(2, 2) == 1);          // i^2 = -1
  CHECK(conjugacy_classes(*q8).size() == 5);
  CHECK(center(*q8) == std::vector<int>{0, 1});
  CHECK(centralizer(*q8, 2) == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("direct products and central quotients") {
  auto p = FiniteGroup::direct_product(FiniteGroup::cyclic(4), FiniteGroup::quaternion8());
  CHECK(p->order() == 32);
  CHECK(center(*p).size() == 8);  // Z4 x {1,-1}

  // (2, -1) generates a central Z2; the quotient has order 16.
  const int z = 2 * 8 + 1;
  auto q = FiniteGroup::central_quotient(p, {0, z});
  CHECK(q->order() == 16);
  CHECK_FALSE(q->is_abelian());
}

TEST_CASE("pair class counts match ground space dimensions") {
  CHECK(pair_conjugacy_classes(*FiniteGroup::cyclic(2)).size() == 4);
  CHECK(pair_conjugacy_classes(*FiniteGroup::cyclic(3)).size() == 9);
  CHECK(pair_conjugacy_classes(*FiniteGroup::dihedral(3)).size() == 8);
}

TEST_CASE("pair classes are commuting orbits") {
  auto d3 = FiniteGroup::dihedral(3);
  auto pairs = pair_conjugacy_classes(*d3);
  size_t total = 0;
  for (const auto& pc : pairs) {
    total += pc.members.size();
    for (auto [g, h] : pc.members) CHECK(d3->mul(g, h) == d3->mul(h, g));
    CHECK(pc.members.front() == std::make_pair(pc.g, pc.h));
  }
  size_t commuting = 0;
  for (int g = 0; g < 6; ++g)
    for (int h = 0; h < 6; ++h)
      if (d3->mul(g, h) == d3->mul(h, g)) ++commuting;
  CHECK(total == commuting);
}

TEST_CASE("automorphism counts") {
  CHECK(automorphism_group(*FiniteGroup::cyclic(2)).size() == 1);
  CHECK(automorphism_group(*FiniteGroup::cyclic(5)).size() == 4);
  auto v4 = FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2));
  CHECK(automorphism_group(*v4).size() == 6);
  CHECK(automorphism_group(*FiniteGroup::quaternion8()).size() == 24);
}

TEST_CASE("descriptor parsing") {
  CHECK(group_from_descriptor("preset: Z5")->order() == 5);
  CHECK(group_from_descriptor("preset: Q8")->order() == 8);
  CHECK(group_from_descriptor("preset: Z2xZ2xZ2")->order() == 8);
  CHECK(group_from_descriptor("preset: Z4xQ8/Z2")->order() == 16);

  auto d4 = group_from_descriptor("preset: Z4:Z2");
  CHECK(d4->order() == 8);
  CHECK(isomorphic(*d4, *FiniteGroup::dihedral(4)));
  CHECK_FALSE(isomorphic(*d4, *FiniteGroup::quaternion8()));

  auto z2 = group_from_descriptor("table: 0 1 1 0");
  CHECK(z2->order() == 2);

  CHECK_THROWS_AS(group_from_descriptor("preset: F13"), UnknownPreset);
  CHECK_THROWS_AS(group_from_descriptor("Z4"), InvalidInput);
  CHECK_THROWS_AS(group_from_descriptor("table: 0 1 1 1"), MalformedTable);
  CHECK_THROWS_AS(group_from_descriptor("table: 1 0 0 1"), MalformedTable);
}

TEST_CASE("descriptor round trips") {
  for (const char* d : {"preset: Z4", "preset: D3", "preset: Q8", "preset: Z2xQ8",
                        "preset: Z4:Z2", "preset: Z4xQ8/Z2"}) {
    auto g = group_from_descriptor(d);
    auto h = group_from_descriptor(group_descriptor(*g));
    CHECK(g->table() == h->table());
  }
}

TEST_CASE("subgroup helpers") {
  auto q8 = FiniteGroup::quaternion8();
  auto sub = generated_subgroup(*q8, {2});
  CHECK(sub == std::vector<int>{0, 1, 2, 3});
  CHECK(is_subgroup(*q8, sub));
  CHECK(is_normal_subgroup(*q8, sub));

  auto d3 = FiniteGroup::dihedral(3);
  CHECK(is_subgroup(*d3, {0, 3}));
  CHECK_FALSE(is_normal_subgroup(*d3, {0, 3}));
  CHECK(is_normal_subgroup(*d3, {0, 1, 2}));
}

TEST_CASE("isomorphism class names") {
  CHECK(isomorphism_class_name(*FiniteGroup::cyclic(4)) == "Z4");
  CHECK(isomorphism_class_name(*group_from_descriptor("preset: Z2xZ2")) == "Z2xZ2");
  CHECK(isomorphism_class_name(*FiniteGroup::dihedral(4)) == "D8");
  CHECK(isomorphism_class_name(*FiniteGroup::quaternion8()) == "Q8");
}
