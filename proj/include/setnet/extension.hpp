// Group extensions 1 -> G -> E -> Q -> 1: twisted 2-cocycles, second
// cohomology enumeration (abelian G), relabelling reduction, explicit
// extension construction, and the gauge-invariant words used by the
// order-parameter protocols.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "setnet/group.hpp"

namespace setnet {

// phi: Q -> Aut(G), phi[q] an image table on G.  phi[0] must be the identity.
struct TwistAction {
  GroupPtr Q, G;
  std::vector<std::vector<int>> phi;
  int apply(int q, int g) const { return phi[q][g]; }
};
TwistAction trivial_twist(GroupPtr Q, GroupPtr G);
// For |Q| = 2 with the nontrivial element acting by inversion (needs abelian G).
TwistAction inversion_twist(GroupPtr Q, GroupPtr G);

// Normalized 2-cochain w: Q x Q -> G, w(e,q) = w(q,e) = e.
struct Cocycle {
  int nq = 0;
  std::vector<int> w;  // row-major nq x nq, values are G indices
  int at(int k, int q) const { return w[static_cast<size_t>(k) * nq + q]; }
  int& at(int k, int q) { return w[static_cast<size_t>(k) * nq + q]; }
  static Cocycle trivial(int nq) { return Cocycle{nq, std::vector<int>(static_cast<size_t>(nq) * nq, 0)}; }
};

struct CocycleViolation {
  int k, q, p;  // w(k,q) w(kq,p) != phi_k(w(q,p)) w(k,qp)
};
struct CocycleReport {
  bool valid = false;
  bool normalized = false;
  std::vector<CocycleViolation> violations;  // first few offending triples
};
CocycleReport check_cocycle(const TwistAction& t, const Cocycle& w);

// Exhaustive enumeration of H^2_phi(Q,G) for abelian G: all normalized maps
// filtered by the cocycle condition (applied incrementally while filling the
// table), then grouped by coboundary equivalence.  `max_candidates` guards the
// search (SearchBudgetExceeded).
struct H2Enumeration {
  long long num_cocycles = 0;                 // |Z^2| among normalized maps
  std::vector<Cocycle> class_reps;            // one representative per class
  std::vector<long long> class_sizes;
};
H2Enumeration enumerate_h2(const TwistAction& t, long long max_candidates = 200'000'000);

// Partition cohomology classes into orbits under relabelling by Aut(Q)
// (w -> w o (rho x rho), phi -> phi o rho).  Returns orbits as index lists
// into `classes`.
std::vector<std::vector<int>> reduce_by_relabelling(const TwistAction& t,
                                                    const std::vector<Cocycle>& classes);

// Explicit extension on the set G x Q with (g,k)(h,q) = (g phi_k(h) w(k,q), kq).
// Element index is q * |G| + g so that G = {0..|G|-1} sits first and the
// canonical section is eps_q = q * |G|.
struct ExtensionModel {
  GroupPtr E, G, Q;
  TwistAction twist;
  Cocycle omega;
  std::vector<int> embed_g;   // G index -> E index
  std::vector<int> section;   // Q index -> E index (eps_0 = 0)
  std::vector<int> coset_of;  // E index -> Q index
  std::vector<int> g_part;    // E index -> G index; e = embed_g[g_part[e]] * section[coset_of[e]]

  int eps(int q) const { return section[q]; }
  bool in_g(int e) const { return coset_of[e] == 0; }
};
ExtensionModel build_extension(const TwistAction& t, const Cocycle& w);

// Present an existing group E as an extension of Q = E/G by the normal
// subgroup G (element list).  Uses the smallest-index coset representatives
// as the section.
ExtensionModel extension_from_subgroup(GroupPtr e, const std::vector<int>& g_elems);

// Recover (phi, omega) from an extension model and verify the round trip:
// build_extension(phi, omega) must be isomorphic to E over the identity on
// G x Q (checked for |E| <= 16).
struct PhiOmega {
  TwistAction twist;
  Cocycle omega;
  bool round_trip_checked = false;
};
PhiOmega extract_phi_omega(const ExtensionModel& ext);

// ---- gauge-invariant words ----
// lambda descriptors: power(q, n) = eps_q^n; commutator(q, k) =
// eps_q eps_k eps_q^-1 eps_k^-1; averaged_square(q) = multiset
// { (eps_q g)^2 : g in G }.  All products taken in E and reduced to G.
struct LambdaDescriptor {
  enum class Kind { Power, Commutator, AveragedSquare } kind;
  int q = 0, k = 0;
  long long n = 2;
  static LambdaDescriptor power(int q, long long n) { return {Kind::Power, q, 0, n}; }
  static LambdaDescriptor commutator(int q, int k) { return {Kind::Commutator, q, k, 0}; }
  static LambdaDescriptor averaged_square(int q) { return {Kind::AveragedSquare, q, 0, 0}; }
};

// Value of a lambda word: a single G element (power/commutator) or a multiset
// over G (averaged square), always recorded as counts.
struct LambdaValue {
  std::map<int, long long> counts;  // G element -> multiplicity
  bool single() const { return counts.size() == 1 && counts.begin()->second == 1; }
  int element() const { return counts.begin()->first; }
};

// Evaluate the word and, for |E| <= 16, sweep every section of E -> verify the
// value class (conjugacy class of the value, resp. of the multiset) does not
// depend on the section choice; throws NotGaugeInvariant otherwise.
// The reported value is reduced to the conjugacy-class representative in G.
LambdaValue invariant_lambda(const ExtensionModel& ext, const LambdaDescriptor& d);

}  // namespace setnet
