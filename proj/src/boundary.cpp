#include "setnet/boundary.hpp"

#include <cmath>

#include "setnet/error.hpp"

namespace setnet {

namespace {

// Column-sparse form of a matrix with at most one nonzero per column: column
// j maps to row `row[j]` with weight `w[j]` (weight 0 annihilates).  Products
// of regular-rep permutations and diagonal operators stay in this form, which
// keeps trace words at O(n * length) instead of dense products.
struct ColMap {
  std::vector<int> row;
  std::vector<cd> w;
};

bool as_colmap(const Mat& m, ColMap& out) {
  const int n = static_cast<int>(m.rows());
  out.row.assign(static_cast<size_t>(n), 0);
  out.w.assign(static_cast<size_t>(n), cd{0.0, 0.0});
  for (int j = 0; j < n; ++j) {
    int hits = 0;
    for (int i = 0; i < n; ++i) {
      if (m(i, j) != cd{0.0, 0.0}) {
        if (++hits > 1) return false;
        out.row[static_cast<size_t>(j)] = i;
        out.w[static_cast<size_t>(j)] = m(i, j);
      }
    }
  }
  return true;
}

ColMap adjoint(const ColMap& m) {
  const int n = static_cast<int>(m.row.size());
  ColMap out;
  out.row.assign(static_cast<size_t>(n), 0);
  out.w.assign(static_cast<size_t>(n), cd{0.0, 0.0});
  for (int j = 0; j < n; ++j)
    if (m.w[static_cast<size_t>(j)] != cd{0.0, 0.0}) {
      out.row[static_cast<size_t>(m.row[static_cast<size_t>(j)])] = j;
      out.w[static_cast<size_t>(m.row[static_cast<size_t>(j)])] = std::conj(m.w[static_cast<size_t>(j)]);
    }
  return out;
}

}  // namespace

std::complex<double> evaluate_boundary_expr(const BoundaryLoopExpr& expr, const LoopContext& ctx) {
  if (!ctx.ambient) throw InvalidInput("evaluation context needs an ambient group");
  const auto& g = *ctx.ambient;
  const int n = g.order();

  // Permutation tables for left multiplication, indexed by ambient element.
  std::vector<std::vector<int>> lmul(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j) lmul[static_cast<size_t>(a)][static_cast<size_t>(j)] = g.mul(a, j);

  // Named operators as column maps; fall back to dense words if any operator
  // has a column with two or more nonzeros.
  std::map<std::string, ColMap> named;
  std::map<std::string, Mat> named_dense;
  bool any_dense = false;
  for (const auto& [name, m] : ctx.named_ops) {
    if (m.rows() != n || m.cols() != n)
      throw DimensionMismatch("named operator '" + name + "' does not match the ambient group");
    ColMap cm;
    if (as_colmap(m, cm)) {
      named[name] = std::move(cm);
    } else {
      named_dense[name] = m;
      any_dense = true;
    }
  }

  std::map<std::string, int> var_slot;
  for (size_t i = 0; i < expr.sum_vars.size(); ++i) var_slot[expr.sum_vars[i]] = static_cast<int>(i);
  for (const auto& word : expr.factors)
    for (const auto& s : word.syms) {
      if (s.kind == WordSymbol::Kind::Var && !var_slot.count(s.name))
        throw UnboundSymbol("summation variable '" + s.name + "' is not declared");
      if (s.kind == WordSymbol::Kind::Named && !named.count(s.name) && !named_dense.count(s.name))
        throw UnboundSymbol("named operator '" + s.name + "' is not in the context");
      if (s.kind == WordSymbol::Kind::Section &&
          (s.elem < 0 || s.elem >= static_cast<int>(ctx.section.size())))
        throw UnboundSymbol("section element " + std::to_string(s.elem) + " is not provided");
      if (s.kind == WordSymbol::Kind::Fixed && (s.elem < 0 || s.elem >= n))
        throw UnboundSymbol("fixed element is outside the ambient group");
    }
  for (int e : ctx.local_elements)
    if (e < 0 || e >= n) throw UnboundSymbol("local element list is outside the ambient group");

  auto group_elem_of = [&](const WordSymbol& s, const std::vector<int>& assign) -> int {
    int e;
    switch (s.kind) {
      case WordSymbol::Kind::Var:
        e = assign[static_cast<size_t>(var_slot.at(s.name))];
        break;
      case WordSymbol::Kind::Fixed:
        e = s.elem;
        break;
      case WordSymbol::Kind::Section:
        e = ctx.section[static_cast<size_t>(s.elem)];
        break;
      default:
        e = -1;
    }
    if (e >= 0 && s.exponent < 0) e = g.inverse(e);
    return e;
  };

  // Evaluate one trace word for a fixed assignment using column maps.
  ColMap run;
  auto trace_word_fast = [&](const TraceWord& word, const std::vector<int>& assign) -> cd {
    run.row.resize(static_cast<size_t>(n));
    run.w.assign(static_cast<size_t>(n), cd{1.0, 0.0});
    for (int j = 0; j < n; ++j) run.row[static_cast<size_t>(j)] = j;
    // Compose right to left: run holds the product of the symbols seen so far.
    for (size_t i = word.syms.size(); i-- > 0;) {
      const auto& s = word.syms[i];
      if (s.kind == WordSymbol::Kind::Named) {
        const ColMap* cm = &named.at(s.name);
        ColMap adj;
        if (s.exponent < 0) {
          adj = adjoint(*cm);
          cm = &adj;
        }
        for (int j = 0; j < n; ++j) {
          if (run.w[static_cast<size_t>(j)] == cd{0.0, 0.0}) continue;
          const int r = run.row[static_cast<size_t>(j)];
          run.w[static_cast<size_t>(j)] *= cm->w[static_cast<size_t>(r)];
          run.row[static_cast<size_t>(j)] = cm->row[static_cast<size_t>(r)];
        }
      } else {
        const int e = group_elem_of(s, assign);
        const auto& p = lmul[static_cast<size_t>(e)];
        for (int j = 0; j < n; ++j) run.row[static_cast<size_t>(j)] = p[static_cast<size_t>(run.row[static_cast<size_t>(j)])];
      }
    }
    cd tr{0.0, 0.0};
    for (int j = 0; j < n; ++j)
      if (run.row[static_cast<size_t>(j)] == j) tr += run.w[static_cast<size_t>(j)];
    return tr;
  };

  auto trace_word_dense = [&](const TraceWord& word, const std::vector<int>& assign) -> cd {
    Mat acc = Mat::Identity(n, n);
    for (const auto& s : word.syms) {
      if (s.kind == WordSymbol::Kind::Named) {
        auto it = named_dense.find(s.name);
        Mat m;
        if (it != named_dense.end()) {
          m = it->second;
        } else {
          const ColMap& cm = named.at(s.name);
          m = Mat::Zero(n, n);
          for (int j = 0; j < n; ++j) m(cm.row[static_cast<size_t>(j)], j) = cm.w[static_cast<size_t>(j)];
        }
        if (s.exponent < 0) m = m.adjoint().eval();
        acc = acc * m;
      } else {
        const int e = group_elem_of(s, assign);
        Mat m = Mat::Zero(n, n);
        for (int j = 0; j < n; ++j) m(g.mul(e, j), j) = 1.0;
        acc = acc * m;
      }
    }
    return acc.trace();
  };

  auto word_needs_dense = [&](const TraceWord& word) {
    if (!any_dense) return false;
    for (const auto& s : word.syms)
      if (s.kind == WordSymbol::Kind::Named && named_dense.count(s.name)) return true;
    return false;
  };

  const size_t nv = expr.sum_vars.size();
  if (!nv) {
    cd total{1.0, 0.0};
    std::vector<int> assign;
    for (const auto& word : expr.factors) {
      const cd tr = word_needs_dense(word) ? trace_word_dense(word, assign) : trace_word_fast(word, assign);
      total *= (word.power == 1) ? tr : std::pow(tr, word.power);
    }
    return expr.prefactor * total;
  }

  if (ctx.local_elements.empty()) throw UnboundSymbol("summation domain is empty");
  std::vector<size_t> pick(nv, 0);
  std::vector<int> assign(nv);
  cd sum{0.0, 0.0};
  while (true) {
    for (size_t i = 0; i < nv; ++i) assign[i] = ctx.local_elements[pick[i]];
    cd term{1.0, 0.0};
    for (const auto& word : expr.factors) {
      const cd tr = word_needs_dense(word) ? trace_word_dense(word, assign) : trace_word_fast(word, assign);
      term *= (word.power == 1) ? tr : std::pow(tr, word.power);
      if (term == cd{0.0, 0.0}) break;
    }
    sum += term;
    size_t pos = 0;
    while (pos < nv && ++pick[pos] == ctx.local_elements.size()) {
      pick[pos] = 0;
      ++pos;
    }
    if (pos == nv) break;
  }
  return expr.prefactor * sum;
}

}  // namespace setnet
