// Finite groups as dense Cayley tables, plus the preset constructions and
// the structural queries (classes, centralizers, automorphisms) the rest of
// the library builds on.  Elements are indices 0..n-1 with identity 0.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "setnet/error.hpp"

namespace setnet {

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

// How a group was built.  Kept so representation theory can pick exact
// closed-form character tables instead of falling back to the numeric method.
enum class GroupKind {
  Table,          // explicit Cayley table, no extra structure known
  Cyclic,         // Z_n
  Dihedral,       // order 2n, elements s^a r^i
  Quaternion,     // Q8: 1,-1,i,-i,j,-j,k,-k
  DirectProduct,  // factors_[0] x factors_[1]
  Semidirect,     // factors_[0] x| factors_[1] (normal factor first)
  CentralQuotient // factors_[0] / central kernel
};

class FiniteGroup {
 public:
  // Throws MalformedTable unless `table` is a group table with identity 0.
  explicit FiniteGroup(std::vector<int> table, std::string name = "table");

  int order() const { return n_; }
  int mul(int a, int b) const { return table_[static_cast<size_t>(a) * n_ + b]; }
  int inverse(int a) const { return inv_[a]; }
  int conj(int g, int h) const { return mul(mul(g, h), inverse(g)); }  // g h g^-1
  int element_order(int a) const;
  int power(int a, long long k) const;  // a^k, k may be negative
  bool is_abelian() const;

  const std::string& name() const { return name_; }
  const std::vector<int>& table() const { return table_; }

  GroupKind kind() const { return kind_; }
  const std::vector<int>& params() const { return params_; }
  const std::vector<GroupPtr>& factors() const { return factors_; }
  // CentralQuotient only: kernel elements / chosen coset representatives in
  // the parent group's indexing.
  const std::vector<int>& quotient_kernel() const { return quot_kernel_; }
  const std::vector<int>& quotient_reps() const { return quot_reps_; }

  // ---- presets ----
  static GroupPtr cyclic(int n);
  static GroupPtr dihedral(int n);  // order 2n, n >= 1
  static GroupPtr quaternion8();
  static GroupPtr direct_product(GroupPtr a, GroupPtr b);
  // Semidirect product N x| H; act[h] is the automorphism of N used when
  // commuting h past N: (n1,h1)(n2,h2) = (n1 * act[h1](n2), h1 h2).
  static GroupPtr semidirect_product(GroupPtr normal, GroupPtr quot,
                                     const std::vector<std::vector<int>>& act);
  // Quotient by a central subgroup (given by its elements; must be closed and
  // central).  Element i of the result is the coset of quotient_reps()[i].
  static GroupPtr central_quotient(GroupPtr g, const std::vector<int>& kernel);

  // Canonical element names for presets ("r2", "sr", "-k", "(a,b)", ...);
  // plain "g5" for table groups.
  std::string element_name(int a) const;

 private:
  FiniteGroup() = default;
  void finish_table_checks();

  int n_ = 0;
  std::vector<int> table_;
  std::vector<int> inv_;
  std::string name_;
  GroupKind kind_ = GroupKind::Table;
  std::vector<int> params_;
  std::vector<GroupPtr> factors_;
  std::vector<int> quot_kernel_;
  std::vector<int> quot_reps_;
};

// ---- descriptors ----
// Text form used by files and the CLI:
//   "preset: Z4", "preset: D3", "preset: Q8", "preset: Z2xZ2xZ2",
//   "preset: Z2xQ8", "preset: Z3:Z2(inv)" (semidirect, inverting action),
//   "preset: Z4xQ8/Z2" (central quotient identifying (2,-1) with identity),
//   or "table: 0 1 1 0" (row-major).
GroupPtr group_from_descriptor(const std::string& text);
std::string group_descriptor(const FiniteGroup& g);

// ---- structure ----
// Conjugacy classes, each sorted ascending; classes ordered by smallest member
// (so the class of the identity comes first).
std::vector<std::vector<int>> conjugacy_classes(const FiniteGroup& g);
std::vector<int> class_index_map(const FiniteGroup& g);  // element -> class id

std::vector<int> centralizer(const FiniteGroup& g, int h);
std::vector<int> center(const FiniteGroup& g);
// Subgroup generated by the given elements.
std::vector<int> generated_subgroup(const FiniteGroup& g, std::vector<int> gens);
bool is_subgroup(const FiniteGroup& g, const std::vector<int>& elems);
bool is_normal_subgroup(const FiniteGroup& g, const std::vector<int>& elems);

// Orbits of commuting pairs (g,h), gh = hg, under simultaneous conjugation.
struct PairClass {
  int g, h;                                   // smallest representative
  std::vector<std::pair<int, int>> members;   // full orbit, sorted
};
std::vector<PairClass> pair_conjugacy_classes(const FiniteGroup& g);

// All automorphisms as image tables aut[g].  Brute force; guarded for order
// <= 64 (Unsupported beyond).
std::vector<std::vector<int>> automorphism_group(const FiniteGroup& g);
bool is_automorphism(const FiniteGroup& g, const std::vector<int>& phi);

// Isomorphism testing (brute force over generator images).  If iso != nullptr
// and the groups are isomorphic, *iso[a] is the image of a.
bool isomorphic(const FiniteGroup& a, const FiniteGroup& b,
                std::vector<int>* iso = nullptr);

// Human name of the isomorphism class for small orders ("Z4", "Z2xZ2", "D8",
// "Q8", "Z4xZ2", ...); order-based dihedral naming.  Falls back to
// "order<k>" when unrecognized.
std::string isomorphism_class_name(const FiniteGroup& g);

}  // namespace setnet
