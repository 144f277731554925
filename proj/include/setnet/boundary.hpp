// Analytic backend for closed-loop observables.  Double-layer networks built
// from group-sum site tensors collapse to sums over group variables of
// products of trace words; this module represents and evaluates those sums
// in the regular representation of the ambient group.
#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "setnet/group.hpp"
#include "setnet/rep.hpp"

namespace setnet {

// One multiplicand inside a trace word.  Words are read left to right as
// matrix products Tr[s_1 s_2 ... s_m].
struct WordSymbol {
  enum class Kind {
    Var,      // summation variable (ranges over the local group), name in `name`
    Fixed,    // fixed element of the ambient group, index in `elem`
    Section,  // section element eps_q, q stored in `elem`
    Named,    // named operator from the evaluation context (e.g. charge factors)
  };
  Kind kind = Kind::Fixed;
  std::string name;
  int elem = 0;
  int exponent = +1;  // +1 or -1; Named ops with -1 use the adjoint

  static WordSymbol var(std::string n, int exp = +1) { return {Kind::Var, std::move(n), 0, exp}; }
  static WordSymbol fixed(int e, int exp = +1) { return {Kind::Fixed, {}, e, exp}; }
  static WordSymbol section(int q, int exp = +1) { return {Kind::Section, {}, q, exp}; }
  static WordSymbol named(std::string n, int exp = +1) { return {Kind::Named, std::move(n), 0, exp}; }
};

struct TraceWord {
  std::vector<WordSymbol> syms;
  int power = 1;  // the whole trace raised to this power
};

// sum over assignments of `sum_vars` (each ranging over the local group) of
// prefactor * prod_i Tr[word_i].  The local group is a subset of the ambient
// group (the G block of an extension; equal to it for plain models).
struct BoundaryLoopExpr {
  double prefactor = 1.0;
  std::vector<std::string> sum_vars;
  std::vector<TraceWord> factors;
};

// Evaluation context: ambient group (regular rep is implied), the subset of
// ambient indices the summation variables range over, section elements, and
// named operator matrices (dim |ambient|).
struct LoopContext {
  GroupPtr ambient;
  std::vector<int> local_elements;      // ambient indices; summation domain
  std::vector<int> section;             // q -> ambient index (may be empty)
  std::map<std::string, Mat> named_ops;
};

std::complex<double> evaluate_boundary_expr(const BoundaryLoopExpr& expr,
                                            const LoopContext& ctx);

}  // namespace setnet
