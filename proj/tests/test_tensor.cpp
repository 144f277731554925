#include <cstdio>
#include <random>

#include "doctest.h"
#include "setnet/tensor.hpp"

using namespace setnet;
using cplx = std::complex<double>;

namespace {

DenseTensor random_tensor(std::vector<Leg> legs, unsigned seed) {
  DenseTensor t = DenseTensor::zeros(std::move(legs));
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& x : t.data) x = cplx{u(rng), u(rng)};
  return t;
}

}  // namespace

TEST_CASE("indexing and zeros") {
  auto t = DenseTensor::zeros({{"a", 2}, {"b", 3}});
  CHECK(t.size() == 6);
  CHECK(t.leg_index("b") == 1);
  CHECK(t.leg_index("c") == -1);
  CHECK(t.leg_dim("a") == 2);
  t.at({1, 2}) = cplx{5.0, 0.0};
  CHECK(t.data[5] == cplx{5.0, 0.0});
}

TEST_CASE("transpose and rename") {
  auto t = random_tensor({{"a", 2}, {"b", 3}, {"c", 4}}, 11);
  auto p = t.transposed({"c", "a", "b"});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 4; ++k) CHECK(p.at({k, i, j}) == t.at({i, j, k}));
  auto r = t.renamed("b", "z");
  CHECK(r.leg_index("z") == 1);
  CHECK(r.data == t.data);
}

TEST_CASE("self trace") {
  auto t = random_tensor({{"a", 3}, {"b", 2}, {"a", 3}}, 7);
  auto s = t.self_traced();
  REQUIRE(s.legs.size() == 1);
  CHECK(s.legs[0].name == "b");
  for (int b = 0; b < 2; ++b) {
    cplx acc{0.0, 0.0};
    for (int a = 0; a < 3; ++a) acc += t.at({a, b, a});
    CHECK(std::abs(s.at({b}) - acc) < 1e-14);
  }
}

TEST_CASE("pairwise contraction against explicit sums") {
  auto a = random_tensor({{"i", 2}, {"s", 3}, {"j", 2}}, 1);
  auto b = random_tensor({{"s", 3}, {"k", 4}}, 2);
  auto c = contract_pair(a, b);
  REQUIRE(c.legs.size() == 3);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 4; ++k) {
        cplx acc{0.0, 0.0};
        for (int s = 0; s < 3; ++s) acc += a.at({i, s, j}) * b.at({s, k});
        CHECK(std::abs(c.transposed({"i", "j", "k"}).at({i, j, k}) - acc) < 1e-12);
      }
  auto bad = random_tensor({{"s", 2}}, 3);
  CHECK_THROWS_AS(contract_pair(a, bad), DimensionMismatch);
}

TEST_CASE("greedy network contraction") {
  auto a = random_tensor({{"x", 2}, {"y", 3}}, 4);
  auto b = random_tensor({{"y", 3}, {"z", 2}}, 5);
  auto c = random_tensor({{"z", 2}, {"x", 2}}, 6);
  auto result = contract({a, b, c});
  REQUIRE(result.legs.empty());
  cplx acc{0.0, 0.0};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 3; ++y)
      for (int z = 0; z < 2; ++z) acc += a.at({x, y}) * b.at({y, z}) * c.at({z, x});
  CHECK(std::abs(result.data[0] - acc) < 1e-12);

  auto also_x = random_tensor({{"x", 2}}, 8);
  CHECK_THROWS_AS(contract({a, c, also_x}), DimensionMismatch);
}

TEST_CASE("plan contraction with explicit bonds") {
  auto a = random_tensor({{"p", 2}, {"r", 3}}, 9);
  auto b = random_tensor({{"p", 2}, {"l", 3}}, 10);
  ContractionPlan plan;
  plan.nodes = {a, b};
  plan.bonds = {{{0, "r"}, {1, "l"}}};
  plan.open = {{1, "p"}, {0, "p"}};
  auto r = contract(plan);
  REQUIRE(r.legs.size() == 2);
  for (int q = 0; q < 2; ++q)
    for (int p = 0; p < 2; ++p) {
      cplx acc{0.0, 0.0};
      for (int s = 0; s < 3; ++s) acc += a.at({p, s}) * b.at({q, s});
      CHECK(std::abs(r.at({q, p}) - acc) < 1e-12);
    }

  ContractionPlan broken = plan;
  broken.bonds[0].b.leg = "nope";
  CHECK_THROWS_AS(contract(broken), DimensionMismatch);
}

TEST_CASE("budget enforcement") {
  auto a = random_tensor({{"i", 8}, {"s", 8}}, 12);
  auto b = random_tensor({{"s", 8}, {"j", 8}}, 13);
  ContractionBudget tight;
  tight.bytes = 128;  // way below the 8x8 result
  CHECK_THROWS_AS(contract_pair(a, b, tight), MemoryBudgetExceeded);
}

TEST_CASE("leg operators") {
  auto t = random_tensor({{"a", 2}, {"b", 2}}, 14);
  // op = [[0, 1], [1, 0]] swaps the b index.
  std::vector<cplx> op = {cplx{0, 0}, cplx{1, 0}, cplx{1, 0}, cplx{0, 0}};
  auto s = apply_leg_operator(t, "b", op);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) CHECK(s.at({a, b}) == t.at({a, 1 - b}));
}

TEST_CASE("dump and load round trip") {
  auto t = random_tensor({{"phys", 2}, {"left", 3}, {"right", 3}}, 15);
  const std::string path = "tensor_roundtrip.bin";
  dump_tensor(t, path);
  auto u = load_tensor(path);
  CHECK(u.legs == t.legs);
  CHECK(u.data == t.data);
  std::remove(path.c_str());

  const std::string junk = "tensor_junk.bin";
  FILE* f = std::fopen(junk.c_str(), "wb");
  std::fputs("NOTATENSOR", f);
  std::fclose(f);
  CHECK_THROWS_AS(load_tensor(junk), MalformedTable);
  std::remove(junk.c_str());
}
