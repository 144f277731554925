#include "setnet/anyons.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <utility>

#include <Eigen/Eigenvalues>

#include "setnet/error.hpp"
#include "setnet/rep.hpp"

namespace setnet {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

// Local invariance subgroup as its own group object.  Plain models keep the
// original group pointer so preset-only services (closed-form irrep matrices)
// stay available; proper subgroups go through the generic table construction.
struct LocalGroup {
  GroupPtr grp;
  std::vector<int> to_ambient;    // local index -> virtual group index
  std::vector<int> from_ambient;  // virtual group index -> local index or -1
};

LocalGroup local_group_of(const SetPepsModel& model) {
  const GroupPtr amb = model.virtual_group();
  if (!amb) throw InvalidInput("model has no virtual group");
  LocalGroup out;
  if (!model.restricted()) {
    out.grp = amb;
    out.to_ambient.resize(static_cast<size_t>(amb->order()));
    std::iota(out.to_ambient.begin(), out.to_ambient.end(), 0);
    out.from_ambient = out.to_ambient;
    return out;
  }
  auto [sub, elems] = subgroup_as_group(*amb, model.local_group);
  out.grp = sub;
  out.to_ambient = elems;
  out.from_ambient.assign(static_cast<size_t>(amb->order()), -1);
  for (size_t i = 0; i < elems.size(); ++i) out.from_ambient[static_cast<size_t>(elems[i])] = static_cast<int>(i);
  return out;
}

void require_ungauged(const SetPepsModel& model, const char* what) {
  if (model.gauged()) throw Unsupported(std::string(what) + ": gauged models are not supported");
}

// Irrep matrices, falling back to 1x1 character matrices for abelian tables
// where the closed-form constructions do not apply.
std::vector<MatrixRep> irreps_of(const GroupPtr& g, const CharacterTable& table) {
  try {
    return irrep_matrices(*g);
  } catch (const Unsupported&) {
    for (int d : table.degrees)
      if (d != 1) throw;
    std::vector<MatrixRep> out;
    out.reserve(static_cast<size_t>(table.num_irreps()));
    for (int r = 0; r < table.num_irreps(); ++r) {
      MatrixRep rep;
      rep.group = g;
      rep.mats.resize(static_cast<size_t>(g->order()));
      for (int e = 0; e < g->order(); ++e) {
        Mat m(1, 1);
        m(0, 0) = character_value(table, r, e);
        rep.mats[static_cast<size_t>(e)] = m;
      }
      out.push_back(std::move(rep));
    }
    return out;
  }
}

std::string itos(int v) { return std::to_string(v); }

}  // namespace

NormalizerData normalizer_data(const GroupPtr& g, int class_rep) {
  if (!g) throw InvalidInput("normalizer_data: null group");
  if (class_rep < 0 || class_rep >= g->order())
    throw InvalidInput("normalizer_data: element " + itos(class_rep) + " out of range");
  NormalizerData nd;
  nd.rep = class_rep;
  auto cent = centralizer(*g, class_rep);
  auto [sub, elems] = subgroup_as_group(*g, cent);
  nd.elements = elems;
  nd.as_group = sub;
  nd.chars = character_table(*sub);
  return nd;
}

std::string anyon_name(const GroupPtr& g, const AnyonLabel& label) {
  if (!g) throw InvalidInput("anyon_name: null group");
  auto classes = conjugacy_classes(*g);
  if (label.flux_class < 0 || label.flux_class >= static_cast<int>(classes.size()))
    throw InvalidInput("anyon_name: class index out of range");
  const int rep = classes[static_cast<size_t>(label.flux_class)][0];
  const NormalizerData nd = normalizer_data(g, rep);
  if (label.irrep < 0 || label.irrep >= nd.chars.num_irreps())
    throw InvalidInput("anyon_name: irrep index out of range");
  if (label.is_vacuum()) return "1";
  switch (label.kind) {
    case AnyonLabel::Kind::Flux:
      return "m[" + g->element_name(rep) + "]";
    case AnyonLabel::Kind::Charge:
      return "e(alpha" + itos(label.irrep) + ")";
    case AnyonLabel::Kind::Dyon:
    default:
      return "d([" + g->element_name(rep) + "],alpha" + itos(label.irrep) + ")";
  }
}

Mat charge_factor(const SetPepsModel& model, int sigma, int a, int b) {
  const LocalGroup lg = local_group_of(model);
  const CharacterTable table = character_table(*lg.grp);
  if (sigma < 0 || sigma >= table.num_irreps())
    throw UnknownIrrep("charge_factor: irrep " + itos(sigma) + " out of range");
  const auto reps = irreps_of(lg.grp, table);
  const MatrixRep& pi = reps[static_cast<size_t>(sigma)];
  if (a < 0 || a >= pi.dim() || b < 0 || b >= pi.dim())
    throw InvalidInput("charge_factor: matrix index out of range");
  const int n = model.virtual_dim();
  Mat out = Mat::Zero(n, n);
  for (int i = 0; i < lg.grp->order(); ++i) {
    const int e = lg.to_ambient[static_cast<size_t>(i)];
    out(e, e) = pi(i)(a, b);
  }
  return out;
}

VirtualInsertion charge_operator(const SetPepsModel& model, int sigma, int t) {
  require_ungauged(model, "charge_operator");
  const LocalGroup lg = local_group_of(model);
  const CharacterTable table = character_table(*lg.grp);
  if (sigma < 0 || sigma >= table.num_irreps())
    throw UnknownIrrep("charge_operator: irrep " + itos(sigma) + " out of range");
  if (t < 0 || t >= lg.grp->order())
    throw InvalidInput("charge_operator: twist element out of range");
  VirtualInsertion ins;
  const int n = model.virtual_dim();
  if (model.restricted()) {
    // Single diagonal supported on every coset: value chi_sigma(t gpart(e)).
    if (!model.extension)
      throw MissingSymmetryData("charge_operator: restricted model without extension data");
    const ExtensionModel& ext = *model.extension;
    Mat op = Mat::Zero(n, n);
    for (int e = 0; e < n; ++e) {
      const int ga = ext.embed_g[static_cast<size_t>(ext.g_part[static_cast<size_t>(e)])];
      const int gl = lg.from_ambient[static_cast<size_t>(ga)];
      op(e, e) = character_value(table, sigma, lg.grp->mul(t, gl));
    }
    VirtualInsertion::Term term;
    term.pieces.push_back({VirtualInsertion::Bond{0, 0, true}, op, std::nullopt, +1});
    ins.terms.push_back(std::move(term));
    return ins;
  }
  // Plain pair: Pi = sum_{ab} C^t_{ab} (x) conj(C_{ab}) so that the joint
  // diagonal value is chi_sigma(h^{-1} t g).
  const auto reps = irreps_of(lg.grp, table);
  const MatrixRep& pi = reps[static_cast<size_t>(sigma)];
  const int d = pi.dim();
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      Mat ket = Mat::Zero(n, n), bra = Mat::Zero(n, n);
      for (int g = 0; g < n; ++g) {
        ket(g, g) = pi(lg.grp->mul(t, g))(a, b);
        bra(g, g) = std::conj(pi(g)(a, b));
      }
      VirtualInsertion::Term term;
      term.pieces.push_back({VirtualInsertion::Bond{0, 0, true}, ket, std::nullopt, +1});
      term.pieces.push_back({VirtualInsertion::Bond{1, 0, true}, bra, std::nullopt, +1});
      ins.terms.push_back(std::move(term));
    }
  }
  return ins;
}

VirtualInsertion flux_string(const SetPepsModel& model, int g,
                             const std::vector<VirtualInsertion::Bond>& path) {
  if (g < 0 || g >= model.virtual_dim())
    throw InvalidInput("flux_string: element out of range");
  if (path.empty()) throw InvalidInput("flux_string: empty path");
  using Bond = VirtualInsertion::Bond;
  using Site = std::pair<int, int>;
  auto ends = [](const Bond& b) -> std::array<Site, 2> {
    if (b.vertical) return {Site{b.row, b.col}, Site{b.row + 1, b.col}};
    return {Site{b.row, b.col}, Site{b.row, b.col + 1}};
  };
  auto shared_site = [&](const Bond& x, const Bond& y) -> std::optional<Site> {
    if (x == y) return std::nullopt;
    const auto ex = ends(x), ey = ends(y);
    std::optional<Site> hit;
    for (const auto& s : ex)
      for (const auto& t : ey)
        if (s == t) {
          if (hit && *hit != s) return std::nullopt;  // cannot happen on distinct bonds
          hit = s;
        }
    return hit;
  };

  const FiniteGroup& amb = *model.virtual_group();
  VirtualInsertion ins;
  VirtualInsertion::Term term;
  const size_t n = path.size();
  for (size_t i = 0; i < n; ++i) {
    const auto e2 = ends(path[i]);
    Site exit_site, entry_site;
    if (i + 1 < n) {
      auto s = shared_site(path[i], path[i + 1]);
      if (!s) throw PathDisconnected("flux_string: bonds " + itos(static_cast<int>(i)) + " and " +
                                     itos(static_cast<int>(i + 1)) + " do not share a site");
      exit_site = *s;
      entry_site = (e2[0] == exit_site) ? e2[1] : e2[0];
    } else if (n > 1) {
      auto s = shared_site(path[i - 1], path[i]);
      entry_site = *s;  // validated on the previous iteration
      exit_site = (e2[0] == entry_site) ? e2[1] : e2[0];
    } else {
      // Lone bond: canonical up/right orientation.
      entry_site = e2[1];
      exit_site = e2[0];
      if (!path[i].vertical) std::swap(entry_site, exit_site);
    }
    int exponent;
    if (path[i].vertical)
      exponent = (exit_site.first < entry_site.first) ? +1 : -1;  // moving up
    else
      exponent = (exit_site.second > entry_site.second) ? +1 : -1;  // moving right
    const int elem = (exponent > 0) ? g : amb.inverse(g);
    term.pieces.push_back({path[i], model.virtual_rep(elem), g, exponent});
  }
  ins.terms.push_back(std::move(term));
  return ins;
}

namespace {

// Diagonal values of D^w_alpha for one choice of right-coset representatives.
std::vector<cd> dyon_values(const FiniteGroup& S, const NormalizerData& nd,
                            const std::vector<int>& from_parent_sub, int alpha, int w_sub,
                            const std::vector<int>& coset_reps) {
  std::vector<cd> vals(static_cast<size_t>(S.order()), cd(0.0, 0.0));
  for (int s = 0; s < S.order(); ++s) {
    for (int k : coset_reps) {
      const int n = S.mul(s, S.inverse(k));
      const int n_sub = from_parent_sub[static_cast<size_t>(n)];
      if (n_sub < 0) continue;
      vals[static_cast<size_t>(s)] =
          character_value(nd.chars, alpha, nd.as_group->mul(w_sub, n_sub));
      break;  // cosets partition S: first matching representative decides
    }
  }
  return vals;
}

std::vector<int> smallest_coset_reps(const FiniteGroup& S, const std::vector<int>& normalizer) {
  std::vector<char> covered(static_cast<size_t>(S.order()), 0);
  std::vector<int> reps;
  for (int k = 0; k < S.order(); ++k) {
    if (covered[static_cast<size_t>(k)]) continue;
    reps.push_back(k);
    for (int n : normalizer) covered[static_cast<size_t>(S.mul(n, k))] = 1;
  }
  return reps;
}

}  // namespace

VirtualInsertion dyon_operator(const SetPepsModel& model, int flux_rep, int alpha, int w) {
  require_ungauged(model, "dyon_operator");
  const LocalGroup lg = local_group_of(model);
  const FiniteGroup& S = *lg.grp;
  if (flux_rep < 0 || flux_rep >= S.order())
    throw InvalidInput("dyon_operator: flux element out of range");
  const NormalizerData nd = normalizer_data(lg.grp, flux_rep);
  if (alpha < 0 || alpha >= nd.chars.num_irreps())
    throw InvalidNormalizerData("dyon_operator: irrep " + itos(alpha) + " out of range");
  std::vector<int> from_parent_sub(static_cast<size_t>(S.order()), -1);
  for (size_t i = 0; i < nd.elements.size(); ++i)
    from_parent_sub[static_cast<size_t>(nd.elements[i])] = static_cast<int>(i);
  const int w_sub = (w >= 0 && w < S.order()) ? from_parent_sub[static_cast<size_t>(w)] : -1;
  if (w_sub < 0)
    throw InvalidNormalizerData("dyon_operator: twist element outside the normalizer");

  const auto reps0 = smallest_coset_reps(S, nd.elements);
  const auto vals = dyon_values(S, nd, from_parent_sub, alpha, w_sub, reps0);

  // The pointwise diagonal depends on the representatives (per-coset right
  // translations of the normalizer argument), but the family Gram
  //   G(w, w') = sum_s conj(D^w(s)) D^{w'}(s)
  // does not: reindexing the normalizer sum absorbs the translation.  Assert
  // that invariance by resampling the representatives.
  {
    std::mt19937_64 rng(0x5e7ae11dULL);
    std::vector<int> reps1 = reps0;
    for (int& k : reps1) {
      const int n = nd.elements[rng() % nd.elements.size()];
      k = S.mul(n, k);
    }
    const int nn = static_cast<int>(nd.elements.size());
    std::vector<std::vector<cd>> fam0, fam1;
    for (int wi = 0; wi < nn; ++wi) {
      fam0.push_back(dyon_values(S, nd, from_parent_sub, alpha, wi, reps0));
      fam1.push_back(dyon_values(S, nd, from_parent_sub, alpha, wi, reps1));
    }
    for (int wi = 0; wi < nn; ++wi)
      for (int wj = 0; wj < nn; ++wj) {
        cd g0(0.0, 0.0), g1(0.0, 0.0);
        for (int s = 0; s < S.order(); ++s) {
          g0 += std::conj(fam0[static_cast<size_t>(wi)][static_cast<size_t>(s)]) *
                fam0[static_cast<size_t>(wj)][static_cast<size_t>(s)];
          g1 += std::conj(fam1[static_cast<size_t>(wi)][static_cast<size_t>(s)]) *
                fam1[static_cast<size_t>(wj)][static_cast<size_t>(s)];
        }
        if (std::abs(g0 - g1) > 1e-8)
          throw NumericalDegeneracy(
              "dyon_operator: family Gram depends on coset representatives");
      }
  }

  const int n = model.virtual_dim();
  Mat op = Mat::Zero(n, n);
  for (int s = 0; s < S.order(); ++s) {
    const int e = lg.to_ambient[static_cast<size_t>(s)];
    op(e, e) = vals[static_cast<size_t>(s)];
  }
  const int h_amb = lg.to_ambient[static_cast<size_t>(flux_rep)];
  VirtualInsertion ins;
  VirtualInsertion::Term term;
  term.pieces.push_back({VirtualInsertion::Bond{0, 0, true}, op, std::nullopt, +1});
  term.pieces.push_back(
      {VirtualInsertion::Bond{0, 1, true}, model.virtual_rep(h_amb), h_amb, +1});
  ins.terms.push_back(std::move(term));
  return ins;
}

cd topological_spin(const GroupPtr& g, int flux_rep, int alpha) {
  const NormalizerData nd = normalizer_data(g, flux_rep);
  if (alpha < 0 || alpha >= nd.chars.num_irreps())
    throw InvalidNormalizerData("topological_spin: irrep out of range");
  int h_sub = -1;
  for (size_t i = 0; i < nd.elements.size(); ++i)
    if (nd.elements[i] == flux_rep) h_sub = static_cast<int>(i);
  if (h_sub < 0)
    throw InvalidNormalizerData("topological_spin: representative missing from its centralizer");
  return character_value(nd.chars, alpha, h_sub) /
         cd(static_cast<double>(nd.chars.degrees[static_cast<size_t>(alpha)]), 0.0);
}

namespace {

// Shared builder for the collapsed two-bond charge/flux sandwich.  Each
// factor pair (ab|a'b') contributes two trace words, one per charge bond;
// `ket_up`/`ket_dn` name the ket-side diagonals, bra side is fixed.
cd braid_trace_ratio(const GroupPtr& S, int sigma, int w, bool shift_down_factor) {
  const CharacterTable table = character_table(*S);
  const auto reps = irreps_of(S, table);
  const MatrixRep& pi = reps[static_cast<size_t>(sigma)];
  const int d = pi.dim();
  const int n = S->order();

  LoopContext ctx;
  ctx.ambient = S;
  ctx.local_elements.resize(static_cast<size_t>(n));
  std::iota(ctx.local_elements.begin(), ctx.local_elements.end(), 0);
  auto diag = [&](int a, int b, int shift, bool conj) {
    Mat m = Mat::Zero(n, n);
    for (int x = 0; x < n; ++x) {
      cd v = pi(S->mul(shift, x))(a, b);
      m(x, x) = conj ? std::conj(v) : v;
    }
    return m;
  };
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const std::string suf = itos(a) + "_" + itos(b);
      ctx.named_ops["C" + suf] = diag(a, b, 0, false);
      ctx.named_ops["D" + suf] = diag(a, b, 0, true);
      ctx.named_ops["Cw" + suf] = diag(a, b, w, false);
      ctx.named_ops["Dw" + suf] = diag(a, b, w, true);
    }
  }

  auto accumulate = [&](const std::string& up, const std::string& dn) {
    cd total(0.0, 0.0);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int a2 = 0; a2 < d; ++a2)
          for (int b2 = 0; b2 < d; ++b2) {
            const std::string ket = itos(a) + "_" + itos(b);
            const std::string bra = itos(a2) + "_" + itos(b2);
            BoundaryLoopExpr expr;
            expr.sum_vars = {"k"};
            TraceWord t1;
            t1.syms = {WordSymbol::named(up + ket), WordSymbol::var("k", -1),
                       WordSymbol::named("D" + bra), WordSymbol::var("k", +1)};
            TraceWord t2;
            t2.syms = {WordSymbol::named(dn + ket), WordSymbol::var("k", -1),
                       WordSymbol::named("C" + bra), WordSymbol::var("k", +1)};
            expr.factors = {t1, t2};
            total += evaluate_boundary_expr(expr, ctx);
          }
    return total;
  };

  const cd num = accumulate("Cw", shift_down_factor ? "Dw" : "D");
  const cd den = accumulate("C", "D");
  if (std::abs(den) < 1e-12)
    throw NumericalDegeneracy("braid: vanishing pair normalization");
  return num / den;
}

// Dense oracle: materialize the compressed two-by-two torus state carrying
// the charge pair, with the braid realized as the bond shift x -> w x on the
// encircled end, and take the literal inner products.
cd braid_oracle(const SetPepsModel& model, int sigma, int w) {
  if (model.restricted() || model.gauged())
    throw Unsupported("braid oracle: plain ungauged models only");
  const GroupPtr S = model.virtual_group();
  const int n = S->order();
  if (n > 4) throw MemoryBudgetExceeded("braid oracle: |G| <= 4");
  const CharacterTable table = character_table(*S);
  auto chi = [&](int e) { return character_value(table, sigma, e); };

  // Bonds on the 2x2 torus: hb[i][j] right of site (i,j), vb[i][j] below it.
  // Site (i,j) legs: u=vb[(i+1)%2][j], r=hb[i][j], d=vb[i][j], l=hb[i][(j+1)%2].
  // Orbit label of legs (u,r,d,l) under the diagonal left action: translate
  // so the up leg is the identity.
  const long long n3 = static_cast<long long>(n) * n * n;
  auto orbit = [&](int u, int r, int dn, int l) -> long long {
    const int s = S->inverse(u);
    return (static_cast<long long>(S->mul(s, r)) * n + S->mul(s, dn)) * n + S->mul(s, l);
  };
  const long long dim = n3 * n3 * n3 * n3;
  std::vector<cd> phi(static_cast<size_t>(dim), cd(0.0, 0.0));

  // Assignment order: hb00 hb01 hb10 hb11 vb00 vb01 vb10 vb11.
  std::array<int, 8> bb{};
  const double site_coeff = model.prefactor * std::sqrt(static_cast<double>(n));
  const double amp4 = site_coeff * site_coeff * site_coeff * site_coeff;
  auto for_each_assignment = [&](auto&& fn) {
    long long total = 1;
    for (int i = 0; i < 8; ++i) total *= n;
    for (long long code = 0; code < total; ++code) {
      long long c = code;
      for (int i = 0; i < 8; ++i) {
        bb[static_cast<size_t>(i)] = static_cast<int>(c % n);
        c /= n;
      }
      const int hb[2][2] = {{bb[0], bb[1]}, {bb[2], bb[3]}};
      const int vb[2][2] = {{bb[4], bb[5]}, {bb[6], bb[7]}};
      long long idx = 0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          idx = idx * n3 + orbit(vb[(i + 1) % 2][j], hb[i][j], vb[i][j], hb[i][(j + 1) % 2]);
      fn(idx, vb[0][0], vb[1][0]);
    }
  };

  for_each_assignment([&](long long idx, int x, int y) {
    phi[static_cast<size_t>(idx)] += amp4 * chi(S->mul(S->inverse(y), x));
  });
  cd num(0.0, 0.0);
  double den = 0.0;
  for (const cd& v : phi) den += std::norm(v);
  for_each_assignment([&](long long idx, int x, int y) {
    num += std::conj(phi[static_cast<size_t>(idx)]) * amp4 *
           chi(S->mul(S->inverse(y), S->mul(w, x)));
  });
  if (den < 1e-14) throw NumericalDegeneracy("braid oracle: vanishing norm");
  return num / den;
}

}  // namespace

cd braid_charge_flux(const SetPepsModel& model, int sigma, int g, Backend backend) {
  require_ungauged(model, "braid_charge_flux");
  const LocalGroup lg = local_group_of(model);
  const CharacterTable table = character_table(*lg.grp);
  if (sigma < 0 || sigma >= table.num_irreps())
    throw UnknownIrrep("braid_charge_flux: irrep out of range");
  if (g < 0 || g >= lg.grp->order())
    throw InvalidInput("braid_charge_flux: flux element out of range");
  if (backend == Backend::Oracle) return braid_oracle(model, sigma, g);
  return braid_trace_ratio(lg.grp, sigma, g, false);
}

cd braid_composite_pair(const SetPepsModel& model, int sigma, int g) {
  require_ungauged(model, "braid_composite_pair");
  const LocalGroup lg = local_group_of(model);
  const CharacterTable table = character_table(*lg.grp);
  if (sigma < 0 || sigma >= table.num_irreps())
    throw UnknownIrrep("braid_composite_pair: irrep out of range");
  if (g < 0 || g >= lg.grp->order())
    throw InvalidInput("braid_composite_pair: flux element out of range");
  return braid_trace_ratio(lg.grp, sigma, g, true);
}

AnyonLabel permute_anyon(const GroupPtr& g, const std::vector<int>& phi,
                         const AnyonLabel& label) {
  if (!g) throw InvalidInput("permute_anyon: null group");
  if (static_cast<int>(phi.size()) != g->order() || !is_automorphism(*g, phi))
    throw InvalidInput("permute_anyon: phi is not an automorphism");
  const auto classes = conjugacy_classes(*g);
  const auto cmap = class_index_map(*g);
  if (label.flux_class < 0 || label.flux_class >= static_cast<int>(classes.size()))
    throw InvalidInput("permute_anyon: class index out of range");
  const int h = classes[static_cast<size_t>(label.flux_class)][0];
  const int h_img = phi[static_cast<size_t>(h)];
  const int new_class = cmap[static_cast<size_t>(h_img)];
  const int h_new = classes[static_cast<size_t>(new_class)][0];

  const NormalizerData nd_old = normalizer_data(g, h);
  if (label.irrep < 0 || label.irrep >= nd_old.chars.num_irreps())
    throw InvalidInput("permute_anyon: irrep index out of range");
  const NormalizerData nd_new = normalizer_data(g, h_new);

  // Conjugator t with t h_new t^{-1} = phi(h); x in N(h_new) -> t^{-1} x t.
  int t = -1;
  for (int c = 0; c < g->order(); ++c)
    if (g->mul(g->mul(c, h_new), g->inverse(c)) == h_img) {
      t = c;
      break;
    }
  if (t < 0) throw NumericalDegeneracy("permute_anyon: conjugator not found");

  std::vector<int> phinv(static_cast<size_t>(g->order()));
  for (int x = 0; x < g->order(); ++x) phinv[static_cast<size_t>(phi[static_cast<size_t>(x)])] = x;
  std::vector<int> old_sub(static_cast<size_t>(g->order()), -1);
  for (size_t i = 0; i < nd_old.elements.size(); ++i)
    old_sub[static_cast<size_t>(nd_old.elements[i])] = static_cast<int>(i);

  for (int beta = 0; beta < nd_new.chars.num_irreps(); ++beta) {
    bool match = true;
    for (size_t xs = 0; xs < nd_new.elements.size() && match; ++xs) {
      const int x = nd_new.elements[xs];
      const int y = g->mul(g->mul(g->inverse(t), x), t);
      const int z = phinv[static_cast<size_t>(y)];
      const int zi = old_sub[static_cast<size_t>(z)];
      if (zi < 0) throw NumericalDegeneracy("permute_anyon: normalizer images disagree");
      if (std::abs(character_value(nd_new.chars, beta, static_cast<int>(xs)) -
                   character_value(nd_old.chars, label.irrep, zi)) > 1e-6)
        match = false;
    }
    if (match) return AnyonLabel{label.kind, new_class, beta};
  }
  throw NumericalDegeneracy("permute_anyon: no matching irrep after relabeling");
}

AnyonLabel domain_wall_cross(const SetPepsModel& model, const AnyonLabel& label, int q) {
  if (!model.extension)
    throw MissingSymmetryData("domain_wall_cross: model carries no extension data");
  const ExtensionModel& ext = *model.extension;
  if (q < 0 || q >= ext.Q->order()) throw InvalidInput("domain_wall_cross: q out of range");
  const LocalGroup lg = local_group_of(model);
  const FiniteGroup& E = *model.virtual_group();
  const int v = ext.eps(q);
  std::vector<int> phi(static_cast<size_t>(lg.grp->order()));
  for (int i = 0; i < lg.grp->order(); ++i) {
    const int a = lg.to_ambient[static_cast<size_t>(i)];
    const int c = E.mul(E.mul(v, a), E.inverse(v));
    const int li = lg.from_ambient[static_cast<size_t>(c)];
    if (li < 0)
      throw MissingSymmetryData("domain_wall_cross: symmetry does not normalize the local group");
    phi[static_cast<size_t>(i)] = li;
  }
  return permute_anyon(lg.grp, phi, label);
}

bool domain_wall_circuit_check(const SetPepsModel& model, int g, int q) {
  if (!model.extension || model.section_ops.empty())
    throw MissingSymmetryData("domain_wall_circuit_check: model carries no symmetry data");
  const ExtensionModel& ext = *model.extension;
  if (q < 0 || q >= ext.Q->order())
    throw InvalidInput("domain_wall_circuit_check: q out of range");
  const LocalGroup lg = local_group_of(model);
  if (g < 0 || g >= lg.grp->order())
    throw InvalidInput("domain_wall_circuit_check: element out of range");
  const FiniteGroup& E = *model.virtual_group();
  const Mat& v = model.section_ops.at(q);
  const int eps = ext.eps(q);
  const int a = lg.to_ambient[static_cast<size_t>(g)];
  const int fa = E.mul(E.mul(eps, a), E.inverse(eps));
  const Mat& lg_op = model.virtual_rep(a);
  const Mat& lf_op = model.virtual_rep(fa);
  for (int b = 0; b < E.order(); ++b) {
    const Mat& lb = model.virtual_rep(b);
    if ((v * lg_op * lb - lf_op * v * lb).norm() > 1e-10) return false;
  }
  return true;
}

cd closed_loop_overlap(const SetPepsModel& model, int g, int lh, int lv) {
  require_ungauged(model, "closed_loop_overlap");
  if (lh < 2 || lv < 2) throw InvalidInput("closed_loop_overlap: torus must be at least 2x2");
  if (g < 0 || g >= model.virtual_dim())
    throw InvalidInput("closed_loop_overlap: element out of range");
  const FiniteGroup& E = *model.virtual_group();
  const LocalGroup lg = local_group_of(model);
  // Collapsed overlap: every site carries one fused variable kappa; the loop
  // multiplies the encircled site's variable by g.  Both must stay local.
  long long num = 0, den = 0;
  for (int i = 0; i < lg.grp->order(); ++i) {
    const int kappa = lg.to_ambient[static_cast<size_t>(i)];
    den += 1;
    if (lg.from_ambient[static_cast<size_t>(E.mul(kappa, g))] >= 0) num += 1;
  }
  return cd(static_cast<double>(num) / static_cast<double>(den), 0.0);
}

ConfinementScan confinement_scan(const SetPepsModel& model, int g, int ell) {
  if (ell < 1) throw InvalidInput("confinement_scan: need ell >= 1");
  const int width = ell + 2;
  std::vector<int> cols(static_cast<size_t>(ell));
  std::iota(cols.begin(), cols.end(), 0);
  ConfinementScan out;
  out.ell = ell;
  for (int pc = 0; pc < width; ++pc) {
    const double v = patch_string_expectation(model, g, cols, pc, width);
    out.plaquette_values.push_back(v);
    if (v < 0.5) out.excited_count += 1;
  }
  return out;
}

// ---- order parameters ----

OrderParameterProtocol protocol_from_json(const nlohmann::json& j) {
  OrderParameterProtocol p;
  try {
    p.name = j.value("name", std::string("protocol"));
    const GroupPtr G = group_from_descriptor(j.at("group").get<std::string>());
    const GroupPtr Q = group_from_descriptor(j.at("quotient").get<std::string>());
    TwistAction t;
    t.Q = Q;
    t.G = G;
    t.phi = j.at("twist").get<std::vector<std::vector<int>>>();
    if (static_cast<int>(t.phi.size()) != Q->order())
      throw InvalidInput("protocol: twist table must have one row per quotient element");
    for (const auto& row : t.phi)
      if (static_cast<int>(row.size()) != G->order())
        throw InvalidInput("protocol: twist rows must cover the normal subgroup");
    const auto omega_rows = j.at("omega").get<std::vector<std::vector<int>>>();
    Cocycle w = Cocycle::trivial(Q->order());
    if (static_cast<int>(omega_rows.size()) != Q->order())
      throw InvalidInput("protocol: omega must be a |Q| x |Q| table");
    for (int a = 0; a < Q->order(); ++a) {
      if (static_cast<int>(omega_rows[static_cast<size_t>(a)].size()) != Q->order())
        throw InvalidInput("protocol: omega must be a |Q| x |Q| table");
      for (int b = 0; b < Q->order(); ++b) w.at(a, b) = omega_rows[static_cast<size_t>(a)][static_cast<size_t>(b)];
    }
    p.ext = build_extension(t, w);
    p.sigma = j.at("sigma").get<int>();
    p.active_sites = j.at("active_sites").get<std::vector<int>>();
    p.permutation = j.at("permutation").get<std::vector<int>>();
    p.symmetry_word = j.at("symmetry_word").get<std::vector<int>>();
    p.bra_displacement = j.value("bra_displacement", 1);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("protocol json: ") + e.what());
  }
  return p;
}

nlohmann::json protocol_json(const OrderParameterProtocol& p) {
  if (!p.ext.E || !p.ext.G || !p.ext.Q) throw InvalidInput("protocol_json: empty extension");
  nlohmann::json j;
  j["name"] = p.name;
  j["group"] = group_descriptor(*p.ext.G);
  j["quotient"] = group_descriptor(*p.ext.Q);
  j["twist"] = p.ext.twist.phi;
  std::vector<std::vector<int>> omega_rows;
  for (int a = 0; a < p.ext.Q->order(); ++a) {
    std::vector<int> row;
    for (int b = 0; b < p.ext.Q->order(); ++b) row.push_back(p.ext.omega.at(a, b));
    omega_rows.push_back(std::move(row));
  }
  j["omega"] = omega_rows;
  j["sigma"] = p.sigma;
  j["active_sites"] = p.active_sites;
  j["permutation"] = p.permutation;
  j["symmetry_word"] = p.symmetry_word;
  j["bra_displacement"] = p.bra_displacement;
  return j;
}

CompiledProtocol compile_protocol(const OrderParameterProtocol& p) {
  const ExtensionModel& ext = p.ext;
  if (!ext.E || !ext.G || !ext.Q) throw InvalidInput("compile_protocol: empty extension");
  const int np = static_cast<int>(p.active_sites.size());
  if (np < 2) throw ProtocolMismatch("compile_protocol: need at least two active sites");
  for (int i = 0; i + 1 < np; ++i)
    if (p.active_sites[static_cast<size_t>(i + 1)] != p.active_sites[static_cast<size_t>(i)] + 1)
      throw ProtocolMismatch("compile_protocol: active sites must be consecutive");
  if (static_cast<int>(p.permutation.size()) != np)
    throw ProtocolMismatch("compile_protocol: permutation must cover the active sites");
  for (int i = 0; i < np; ++i)
    if (p.permutation[static_cast<size_t>(i)] !=
        p.active_sites[static_cast<size_t>((i + 1) % np)])
      throw ProtocolMismatch("compile_protocol: only the cyclic shift permutation is compiled");
  if (static_cast<int>(p.symmetry_word.size()) != np)
    throw ProtocolMismatch("compile_protocol: symmetry word must cover the active sites");
  int qprod = 0;
  for (int q : p.symmetry_word) {
    if (q < 0 || q >= ext.Q->order())
      throw ProtocolMismatch("compile_protocol: symmetry word entry out of range");
    qprod = ext.Q->mul(qprod, q);
  }
  if (qprod != 0)
    throw ProtocolMismatch("compile_protocol: symmetry word does not close up to the identity coset");
  if (p.bra_displacement != 1)
    throw ProtocolMismatch("compile_protocol: only bra displacement 1 is compiled");

  const CharacterTable tg = character_table(*ext.G);
  if (p.sigma < 0 || p.sigma >= tg.num_irreps())
    throw UnknownIrrep("compile_protocol: irrep out of range");
  const auto reps = irreps_of(ext.G, tg);
  const MatrixRep& pi = reps[static_cast<size_t>(p.sigma)];
  const int d = pi.dim();
  const int ne = ext.E->order();
  const int ng = ext.G->order();

  CompiledProtocol cp;
  cp.ctx.ambient = ext.E;
  cp.ctx.local_elements = ext.embed_g;
  cp.ctx.section.resize(static_cast<size_t>(ext.Q->order()));
  for (int q = 0; q < ext.Q->order(); ++q) cp.ctx.section[static_cast<size_t>(q)] = ext.eps(q);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      Mat c = Mat::Zero(ne, ne);
      for (int e = 0; e < ne; ++e) c(e, e) = pi(ext.g_part[static_cast<size_t>(e)])(a, b);
      cp.ctx.named_ops["C" + itos(a) + "_" + itos(b)] = c;
      cp.ctx.named_ops["D" + itos(a) + "_" + itos(b)] = c.conjugate();
    }
  }

  std::vector<std::string> vars;
  for (int i = 1; i <= np; ++i) vars.push_back("s" + itos(i));
  vars.push_back("b");
  auto sv = [&](int i, int exp) { return WordSymbol::var("s" + itos(i), exp); };
  auto bv = [&](int exp) { return WordSymbol::var("b", exp); };
  const double pref = 1.0 / std::pow(static_cast<double>(ng), np + 1);
  // The paired charge insertions contract through a Schur orthogonality
  // factor |G|/d_sigma where the neutral denominator loop counts |G|; scale
  // the numerator by d_sigma so charge words report unit-normalized values.
  const double pref_num = pref * static_cast<double>(d);

  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int a2 = 0; a2 < d; ++a2)
        for (int b2 = 0; b2 < d; ++b2) {
          const std::string ket = itos(a) + "_" + itos(b);
          const std::string bra = itos(a2) + "_" + itos(b2);
          BoundaryLoopExpr expr;
          expr.prefactor = pref_num;
          expr.sum_vars = vars;
          // Ket charge pair threaded through the permutation cycle.
          TraceWord t1;
          if (np == 2)
            t1.syms = {WordSymbol::named("C" + ket), sv(1, -1), sv(2, +1), bv(-1),
                       WordSymbol::named("D" + ket), sv(2, +1), sv(1, -1), bv(+1)};
          else
            t1.syms = {WordSymbol::named("C" + ket), sv(1, -1), sv(np, +1), bv(-1),
                       WordSymbol::named("D" + ket), sv(2, +1), sv(np, -1), bv(+1)};
          expr.factors.push_back(t1);
          for (int i = 1; i <= np - 2; ++i) {
            TraceWord link;
            link.syms = {sv(i, +1), sv(i + 1, -1)};
            expr.factors.push_back(link);
          }
          TraceWord tbra;
          tbra.syms = {WordSymbol::named("D" + bra), bv(-1), WordSymbol::named("C" + bra),
                       bv(+1)};
          expr.factors.push_back(tbra);
          // Doubled boundary loop carrying the per-site section elements.
          TraceWord loop_num;
          loop_num.power = 2;
          for (int i = 1; i <= np; ++i) {
            loop_num.syms.push_back(sv(i, +1));
            loop_num.syms.push_back(
                WordSymbol::section(p.symmetry_word[static_cast<size_t>(i - 1)], -1));
            loop_num.syms.push_back(bv(-1));
          }
          expr.factors.push_back(loop_num);
          cp.numerator.push_back(std::move(expr));
        }

  // Normalization: the same collapsed loop with the sections dropped and the
  // charge insertions neutralized (trivial-irrep pair).  Dropping only the
  // sections is not a norm: for a faithful sigma on a cyclic kernel that
  // polynomial vanishes identically.
  {
    BoundaryLoopExpr expr;
    expr.prefactor = pref;
    expr.sum_vars = vars;
    TraceWord t1;
    if (np == 2)
      t1.syms = {sv(1, -1), sv(2, +1), bv(-1), sv(2, +1), sv(1, -1), bv(+1)};
    else
      t1.syms = {sv(1, -1), sv(np, +1), bv(-1), sv(2, +1), sv(np, -1), bv(+1)};
    expr.factors.push_back(t1);
    for (int i = 1; i <= np - 2; ++i) {
      TraceWord link;
      link.syms = {sv(i, +1), sv(i + 1, -1)};
      expr.factors.push_back(link);
    }
    TraceWord tbra;
    tbra.syms = {bv(-1), bv(+1)};
    expr.factors.push_back(tbra);
    TraceWord loop_den;
    loop_den.power = 2;
    for (int i = 1; i <= np; ++i) {
      loop_den.syms.push_back(sv(i, +1));
      loop_den.syms.push_back(bv(-1));
    }
    expr.factors.push_back(loop_den);
    cp.denominator.push_back(std::move(expr));
  }
  return cp;
}

namespace {

// Independent dense evaluation used as the oracle: explicit permutation
// matrices for the group symbols and straight Eigen products, no shared code
// with the boundary-expression evaluator's fast paths.
cd dense_eval(const BoundaryLoopExpr& expr, const LoopContext& ctx) {
  const FiniteGroup& E = *ctx.ambient;
  const int n = E.order();
  std::vector<Mat> left(static_cast<size_t>(n), Mat::Zero(n, n));
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) left[static_cast<size_t>(g)](E.mul(g, h), h) = 1.0;

  std::map<std::string, int> var_slot;
  for (size_t i = 0; i < expr.sum_vars.size(); ++i) var_slot[expr.sum_vars[i]] = static_cast<int>(i);
  std::vector<int> assign(expr.sum_vars.size(), 0);

  cd total(0.0, 0.0);
  const size_t nloc = ctx.local_elements.size();
  long long count = 1;
  for (size_t i = 0; i < assign.size(); ++i) count *= static_cast<long long>(nloc);
  for (long long code = 0; code < count; ++code) {
    long long c = code;
    for (size_t i = 0; i < assign.size(); ++i) {
      assign[i] = ctx.local_elements[static_cast<size_t>(c % nloc)];
      c /= static_cast<long long>(nloc);
    }
    cd prod(1.0, 0.0);
    for (const TraceWord& w : expr.factors) {
      Mat m = Mat::Identity(n, n);
      for (const WordSymbol& s : w.syms) {
        switch (s.kind) {
          case WordSymbol::Kind::Named: {
            const Mat& op = ctx.named_ops.at(s.name);
            m = (s.exponent < 0) ? Mat(m * op.adjoint()) : Mat(m * op);
            break;
          }
          case WordSymbol::Kind::Var: {
            int e = assign[static_cast<size_t>(var_slot.at(s.name))];
            if (s.exponent < 0) e = E.inverse(e);
            m = m * left[static_cast<size_t>(e)];
            break;
          }
          case WordSymbol::Kind::Fixed:
          case WordSymbol::Kind::Section: {
            int e = (s.kind == WordSymbol::Kind::Fixed)
                        ? s.elem
                        : ctx.section.at(static_cast<size_t>(s.elem));
            if (s.exponent < 0) e = E.inverse(e);
            m = m * left[static_cast<size_t>(e)];
            break;
          }
        }
      }
      cd tr = m.trace();
      cd powed(1.0, 0.0);
      for (int k = 0; k < w.power; ++k) powed *= tr;
      prod *= powed;
    }
    total += prod;
  }
  return expr.prefactor * total;
}

}  // namespace

cd order_parameter(const OrderParameterProtocol& p, Backend backend) {
  const CompiledProtocol cp = compile_protocol(p);
  if (backend == Backend::Oracle && p.ext.E->order() > 8)
    throw MemoryBudgetExceeded("order_parameter oracle: |E| <= 8");
  cd num(0.0, 0.0), den(0.0, 0.0);
  if (backend == Backend::Analytic) {
    for (const auto& e : cp.numerator) num += evaluate_boundary_expr(e, cp.ctx);
    for (const auto& e : cp.denominator) den += evaluate_boundary_expr(e, cp.ctx);
  } else {
    for (const auto& e : cp.numerator) num += dense_eval(e, cp.ctx);
    for (const auto& e : cp.denominator) den += dense_eval(e, cp.ctx);
  }
  if (std::abs(den) < 1e-12)
    throw NumericalDegeneracy("order_parameter: vanishing loop normalization");
  return num / den;
}

std::string SnappedValue::str() const {
  if (!classified) {
    std::ostringstream os;
    os << "unsnapped(" << raw.real() << (raw.imag() < 0 ? "-" : "+") << std::abs(raw.imag())
       << "i)";
    return os.str();
  }
  if (num == 0) return "+1";
  if (den == 2) return "-1";
  if (den == 4) return num == 1 ? "+i" : "-i";
  return "exp(2*pi*i*" + std::to_string(num) + "/" + std::to_string(den) + ")";
}

SnappedValue snap_root_of_unity(cd value, int max_order, double tol) {
  if (max_order < 1) throw InvalidInput("snap_root_of_unity: max_order must be positive");
  SnappedValue out;
  out.raw = value;
  for (int den = 1; den <= max_order; ++den) {
    for (int num = 0; num < den; ++num) {
      if (std::gcd(num, den) != 1) continue;  // reduced fractions only; smaller den already tried
      const cd target = std::polar(1.0, kTau * num / den);
      if (std::abs(value - target) <= tol) {
        out.classified = true;
        out.num = num;
        out.den = den;
        return out;
      }
    }
  }
  return out;
}

namespace {

std::string descriptor_str(const LambdaDescriptor& d) {
  switch (d.kind) {
    case LambdaDescriptor::Kind::Power:
      return "power(q=" + itos(d.q) + ",n=" + std::to_string(d.n) + ")";
    case LambdaDescriptor::Kind::Commutator:
      return "commutator(q=" + itos(d.q) + ",k=" + itos(d.k) + ")";
    case LambdaDescriptor::Kind::AveragedSquare:
    default:
      return "averaged_square(q=" + itos(d.q) + ")";
  }
}

// First faithful irrep of G (trivial kernel), falling back to the first
// nontrivial row.  Degree > 1 rows are faithful for the quaternion case.
int pick_sigma(const GroupPtr& g) {
  const CharacterTable t = character_table(*g);
  for (int r = 1; r < t.num_irreps(); ++r) {
    bool faithful = true;
    const double d = static_cast<double>(t.degrees[static_cast<size_t>(r)]);
    for (int e = 1; e < g->order() && faithful; ++e)
      if (std::abs(character_value(t, r, e) - cd(d, 0.0)) < 1e-9) faithful = false;
    if (faithful) return r;
  }
  return t.num_irreps() > 1 ? 1 : 0;
}

OrderParameterProtocol protocol_for(const ExtensionModel& ext, const LambdaDescriptor& d,
                                    int sigma) {
  OrderParameterProtocol p;
  p.name = descriptor_str(d);
  p.ext = ext;
  p.sigma = sigma;
  std::vector<int> word;
  switch (d.kind) {
    case LambdaDescriptor::Kind::Power: {
      if (d.n < 2) throw InvalidInput("sf_signature: power words need n >= 2");
      word.assign(static_cast<size_t>(d.n), d.q);
      break;
    }
    case LambdaDescriptor::Kind::AveragedSquare:
      word = {d.q, d.q};
      break;
    case LambdaDescriptor::Kind::Commutator:
      word = {d.q, d.k, ext.Q->inverse(d.q), ext.Q->inverse(d.k)};
      break;
  }
  const int np = static_cast<int>(word.size());
  p.active_sites.resize(static_cast<size_t>(np));
  std::iota(p.active_sites.begin(), p.active_sites.end(), 0);
  for (int i = 0; i < np; ++i) p.permutation.push_back((i + 1) % np);
  p.symmetry_word = std::move(word);
  p.bra_displacement = 1;
  return p;
}

}  // namespace

SfSignature sf_signature(const ExtensionModel& ext,
                         const std::vector<LambdaDescriptor>& descriptors,
                         std::string pair_name) {
  if (!ext.E || !ext.G || !ext.Q) throw InvalidInput("sf_signature: empty extension");
  SfSignature out;
  out.pair_name = std::move(pair_name);
  out.extension_name = isomorphism_class_name(*ext.E);
  out.descriptors = descriptors;
  const int sigma = pick_sigma(ext.G);
  for (const auto& d : descriptors) {
    const OrderParameterProtocol p = protocol_for(ext, d, sigma);
    const cd val = order_parameter(p, Backend::Analytic);
    if (d.kind == LambdaDescriptor::Kind::Commutator) {
      // The four-site word realizes eps_q eps_k eps_{q^-1} eps_{k^-1}, which
      // for an exponent-two quotient is the commutator times both squares;
      // divide the squares back out before snapping.
      const cd sq_q =
          order_parameter(protocol_for(ext, LambdaDescriptor::power(d.q, 2), sigma),
                          Backend::Analytic);
      const cd sq_k =
          order_parameter(protocol_for(ext, LambdaDescriptor::power(d.k, 2), sigma),
                          Backend::Analytic);
      if (std::abs(sq_q * sq_k) < 1e-12)
        throw NumericalDegeneracy("sf_signature: vanishing square value");
      out.commutator = snap_root_of_unity(val / (sq_q * sq_k), ext.G->order());
    } else {
      out.values.push_back(snap_root_of_unity(val, ext.G->order()));
    }
  }
  return out;
}

SfSignature sf_signature(const ExtensionModel& ext, const std::string& pair_spec) {
  if (!ext.E || !ext.G || !ext.Q) throw InvalidInput("sf_signature: empty extension");
  const int ng = ext.G->order();
  const int nq = ext.Q->order();
  std::vector<LambdaDescriptor> ds;
  if (pair_spec == "Z2,Z2") {
    if (ng != 2 || nq != 2) throw UnsupportedPair("sf_signature: pair needs |G|=2, |Q|=2");
    ds = {LambdaDescriptor::power(1, 2)};
  } else if (pair_spec == "Z2,Z2xZ2") {
    if (ng != 2 || nq != 4) throw UnsupportedPair("sf_signature: pair needs |G|=2, |Q|=4");
    for (int q = 1; q < 4; ++q)
      if (ext.Q->mul(q, q) != 0)
        throw UnsupportedPair("sf_signature: quotient must have exponent two");
    ds = {LambdaDescriptor::power(1, 2), LambdaDescriptor::power(2, 2),
          LambdaDescriptor::power(3, 2), LambdaDescriptor::commutator(1, 2)};
  } else if (pair_spec == "Zp,Zp") {
    if (ng != nq) throw UnsupportedPair("sf_signature: pair needs |G|=|Q|");
    ds = {LambdaDescriptor::power(1, ng)};
  } else if (pair_spec == "Z4,Z2") {
    if (ng != 4 || nq != 2) throw UnsupportedPair("sf_signature: pair needs |G|=4, |Q|=2");
    ds = {LambdaDescriptor::power(1, 2)};
  } else if (pair_spec == "Q8,Z2") {
    if (nq != 2 || isomorphism_class_name(*ext.G) != "Q8")
      throw UnsupportedPair("sf_signature: pair needs G=Q8, |Q|=2");
    ds = {LambdaDescriptor::averaged_square(1)};
  } else {
    throw UnsupportedPair("sf_signature: unknown pair spec '" + pair_spec + "'");
  }
  return sf_signature(ext, ds, pair_spec);
}

CondensationReport condensation_report(const ExtensionModel& ext) {
  if (!ext.E || !ext.G) throw InvalidInput("condensation_report: empty extension");
  const CharacterTable te = character_table(*ext.E);
  const CharacterTable tg = character_table(*ext.G);
  const int ng = ext.G->order();
  CondensationReport out;
  for (int nu = 0; nu < te.num_irreps(); ++nu) {
    std::vector<std::pair<int, int>> parts;
    for (int sg = 0; sg < tg.num_irreps(); ++sg) {
      cd m(0.0, 0.0);
      for (int g = 0; g < ng; ++g)
        m += character_value(te, nu, ext.embed_g[static_cast<size_t>(g)]) *
             std::conj(character_value(tg, sg, g));
      m /= static_cast<double>(ng);
      const long long mi = std::llround(m.real());
      if (std::abs(m - cd(static_cast<double>(mi), 0.0)) > 1e-6)
        throw NonIntegralMultiplicity("condensation_report: restriction multiplicity is not integral");
      if (mi > 0) parts.emplace_back(sg, static_cast<int>(mi));
    }
    const bool trivial = parts.size() == 1 && parts[0].first == 0;
    if (nu != 0 && trivial) out.condensed_charges.push_back(nu);
    if (parts.size() > 1 || (parts.size() == 1 && parts[0].second > 1))
      out.splittings.push_back({nu, std::move(parts)});
  }
  out.composite_witness = out.condensed_charges.empty() && ext.Q && ext.Q->order() > 1;
  const auto classes = conjugacy_classes(*ext.E);
  std::vector<char> in_g(static_cast<size_t>(ext.E->order()), 0);
  for (int e : ext.embed_g) in_g[static_cast<size_t>(e)] = 1;
  for (size_t c = 0; c < classes.size(); ++c)
    if (!in_g[static_cast<size_t>(classes[c][0])])
      out.confined_fluxes.push_back(static_cast<int>(c));
  return out;
}

SetPepsModel perturb_model(const SetPepsModel& model, double eps, uint64_t seed) {
  int phys_idx = -1;
  for (size_t i = 0; i < model.tensor.legs.size(); ++i)
    if (model.tensor.legs[i].name == "phys") phys_idx = static_cast<int>(i);
  if (phys_idx < 0) throw InvalidInput("perturb_model: tensor has no physical leg");
  const int d = model.tensor.legs[static_cast<size_t>(phys_idx)].dim;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat r(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) r(i, j) = cd(gauss(rng), gauss(rng));
  Mat h = 0.5 * (r + r.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success)
    throw NumericalDegeneracy("perturb_model: eigensolver failed");
  Eigen::VectorXcd phases(d);
  for (int i = 0; i < d; ++i) phases(i) = std::polar(1.0, eps * es.eigenvalues()(i));
  const Mat u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  std::vector<cd> op(static_cast<size_t>(d) * static_cast<size_t>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) op[static_cast<size_t>(i) * d + j] = u(i, j);
  SetPepsModel out = model;
  out.tensor = apply_leg_operator(model.tensor, "phys", op);
  return out;
}

}  // namespace setnet
