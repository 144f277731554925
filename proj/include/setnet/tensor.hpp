// Dense tensors with named legs, pairwise/greedy network contraction under a
// memory budget, and a little-endian binary dump format with a JSON header.
#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "setnet/error.hpp"

namespace setnet {

struct Leg {
  std::string name;
  int dim = 0;
  bool operator==(const Leg& o) const { return name == o.name && dim == o.dim; }
};

// Row-major dense tensor; index order follows `legs`.
struct DenseTensor {
  std::vector<Leg> legs;
  std::vector<std::complex<double>> data;

  static DenseTensor zeros(std::vector<Leg> legs);
  size_t size() const { return data.size(); }
  int leg_index(const std::string& name) const;  // -1 if absent
  int leg_dim(const std::string& name) const;

  std::complex<double>& at(const std::vector<int>& idx);
  std::complex<double> at(const std::vector<int>& idx) const;

  DenseTensor renamed(const std::string& from, const std::string& to) const;
  DenseTensor transposed(const std::vector<std::string>& order) const;
  // Contract legs of equal name within this tensor (partial trace).
  DenseTensor self_traced() const;
};

// Explicit contraction plan: node tensors, a bond list pairing legs across
// nodes, and the open legs of the result in output order.  Bonded legs must
// agree in dimension; a leg may appear in at most one bond.
struct ContractionPlan {
  struct LegRef {
    int node = 0;
    std::string leg;
  };
  struct Bond {
    LegRef a, b;
  };
  std::vector<DenseTensor> nodes;
  std::vector<Bond> bonds;
  std::vector<LegRef> open;  // output leg order
};

// Memory accounting for contractions.  Budget in bytes; the default is 2 GiB
// or the SETNET_BUDGET_MB environment variable when set.
struct ContractionBudget {
  size_t bytes = 2ull << 30;
  static ContractionBudget from_env();
};

// Contract all legs with matching names between a and b; throws
// DimensionMismatch if same-named legs disagree in dimension.
DenseTensor contract_pair(const DenseTensor& a, const DenseTensor& b,
                          const ContractionBudget& budget = ContractionBudget::from_env());

// Greedy network contraction: repeatedly contracts the pair whose result is
// smallest.  Legs sharing a name across more than two tensors are an error;
// repeated names inside one tensor are traced first.
DenseTensor contract(std::vector<DenseTensor> network,
                     const ContractionBudget& budget = ContractionBudget::from_env());

// Plan-driven contraction.  Bonds are contracted with a greedy cost-ordered
// schedule; the result's legs follow plan.open.
DenseTensor contract(const ContractionPlan& plan,
                     const ContractionBudget& budget = ContractionBudget::from_env());

// Apply a square matrix to one leg (op acts on the leg index: new_i =
// sum_j op(i,j) old_j), preserving leg order.  `op` is row-major dim x dim.
DenseTensor apply_leg_operator(const DenseTensor& t, const std::string& leg,
                               const std::vector<std::complex<double>>& op);

// Binary serialization: 8-byte magic "SNTENS01", uint32 header length, JSON
// header {"legs":[{"name":..,"dim":..},..]}, then dim-product complex doubles
// (real, imag) little-endian.
void dump_tensor(const DenseTensor& t, const std::string& path);
DenseTensor load_tensor(const std::string& path);

}  // namespace setnet
