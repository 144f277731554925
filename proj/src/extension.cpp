#include "setnet/extension.hpp"

#include <algorithm>
#include <set>

#include "setnet/error.hpp"
#include "setnet/rep.hpp"

namespace setnet {

namespace {

void check_twist_shape(const TwistAction& t) {
  const int nq = t.Q->order(), ng = t.G->order();
  if (static_cast<int>(t.phi.size()) != nq) throw InvalidInput("twist needs one map per Q element");
  for (const auto& m : t.phi) {
    if (static_cast<int>(m.size()) != ng) throw InvalidInput("twist map has wrong domain size");
    if (!is_automorphism(*t.G, m)) throw InvalidInput("twist map is not an automorphism");
  }
  for (int g = 0; g < ng; ++g)
    if (t.phi[0][static_cast<size_t>(g)] != g) throw InvalidInput("twist at the identity must be trivial");
}

// phi must be a homomorphism Q -> Aut(G) when G is abelian (no inner slack).
void check_twist_hom(const TwistAction& t) {
  const int nq = t.Q->order(), ng = t.G->order();
  for (int k = 0; k < nq; ++k)
    for (int q = 0; q < nq; ++q)
      for (int g = 0; g < ng; ++g)
        if (t.apply(k, t.apply(q, g)) != t.apply(t.Q->mul(k, q), g))
          throw InvalidInput("twist is not a homomorphism into Aut(G)");
}

std::vector<int> full_cochain(const Cocycle& w) { return w.w; }

// Coboundary action: w'(k,q) = b_k phi_k(b_q) w(k,q) b_{kq}^{-1}.
Cocycle apply_coboundary(const TwistAction& t, const Cocycle& w, const std::vector<int>& b) {
  const int nq = w.nq;
  Cocycle out = Cocycle::trivial(nq);
  for (int k = 0; k < nq; ++k)
    for (int q = 0; q < nq; ++q) {
      int v = t.G->mul(b[static_cast<size_t>(k)], t.apply(k, b[static_cast<size_t>(q)]));
      v = t.G->mul(v, w.at(k, q));
      v = t.G->mul(v, t.G->inverse(b[static_cast<size_t>(t.Q->mul(k, q))]));
      out.at(k, q) = v;
    }
  return out;
}

}  // namespace

TwistAction trivial_twist(GroupPtr Q, GroupPtr G) {
  TwistAction t;
  t.Q = Q;
  t.G = G;
  std::vector<int> id(static_cast<size_t>(G->order()));
  for (int g = 0; g < G->order(); ++g) id[static_cast<size_t>(g)] = g;
  t.phi.assign(static_cast<size_t>(Q->order()), id);
  return t;
}

TwistAction inversion_twist(GroupPtr Q, GroupPtr G) {
  if (Q->order() != 2) throw InvalidInput("inversion twist needs |Q| = 2");
  if (!G->is_abelian()) throw InvalidInput("inversion twist needs abelian G");
  TwistAction t;
  t.Q = Q;
  t.G = G;
  std::vector<int> id(static_cast<size_t>(G->order())), inv(static_cast<size_t>(G->order()));
  for (int g = 0; g < G->order(); ++g) {
    id[static_cast<size_t>(g)] = g;
    inv[static_cast<size_t>(g)] = G->inverse(g);
  }
  t.phi = {id, inv};
  return t;
}

CocycleReport check_cocycle(const TwistAction& t, const Cocycle& w) {
  check_twist_shape(t);
  const int nq = t.Q->order();
  if (w.nq != nq || static_cast<int>(w.w.size()) != nq * nq)
    throw InvalidInput("cocycle table has the wrong shape");
  for (int v : w.w)
    if (v < 0 || v >= t.G->order()) throw InvalidInput("cocycle entry is not a G element");

  CocycleReport rep;
  rep.normalized = true;
  for (int q = 0; q < nq; ++q)
    if (w.at(0, q) != 0 || w.at(q, 0) != 0) rep.normalized = false;

  for (int k = 0; k < nq; ++k)
    for (int q = 0; q < nq; ++q)
      for (int p = 0; p < nq; ++p) {
        const int lhs = t.G->mul(w.at(k, q), w.at(t.Q->mul(k, q), p));
        const int rhs = t.G->mul(t.apply(k, w.at(q, p)), w.at(k, t.Q->mul(q, p)));
        if (lhs != rhs && rep.violations.size() < 8) rep.violations.push_back({k, q, p});
      }
  rep.valid = rep.normalized && rep.violations.empty();
  return rep;
}

H2Enumeration enumerate_h2(const TwistAction& t, long long max_candidates) {
  check_twist_shape(t);
  if (!t.G->is_abelian()) throw Unsupported("cohomology enumeration needs abelian G");
  check_twist_hom(t);
  const int nq = t.Q->order(), ng = t.G->order();
  const int cells = (nq - 1) * (nq - 1);

  auto cell_of = [nq](int k, int q) -> int {
    if (k == 0 || q == 0) return -1;  // normalized entries are fixed to 0
    return (k - 1) * (nq - 1) + (q - 1);
  };

  // Constraints bucketed by the last cell they touch, so each is checked as
  // soon as all of its entries are known.
  struct Constraint {
    int k, q, p;
  };
  std::vector<std::vector<Constraint>> bucket(static_cast<size_t>(cells));
  for (int k = 1; k < nq; ++k)
    for (int q = 1; q < nq; ++q)
      for (int p = 1; p < nq; ++p) {
        const int last = std::max({cell_of(k, q), cell_of(t.Q->mul(k, q), p), cell_of(q, p),
                                   cell_of(k, t.Q->mul(q, p))});
        if (last >= 0) bucket[static_cast<size_t>(last)].push_back({k, q, p});
      }

  Cocycle w = Cocycle::trivial(nq);
  std::vector<Cocycle> found;
  long long visited = 0;

  auto satisfied = [&](const Constraint& c) {
    const int lhs = t.G->mul(w.at(c.k, c.q), w.at(t.Q->mul(c.k, c.q), c.p));
    const int rhs = t.G->mul(t.apply(c.k, w.at(c.q, c.p)), w.at(c.k, t.Q->mul(c.q, c.p)));
    return lhs == rhs;
  };

  auto dfs = [&](auto&& self, int cell) -> void {
    if (cell == cells) {
      found.push_back(w);
      return;
    }
    const int k = cell / (nq - 1) + 1, q = cell % (nq - 1) + 1;
    for (int v = 0; v < ng; ++v) {
      if (++visited > max_candidates)
        throw SearchBudgetExceeded("cocycle search exceeded the candidate budget");
      w.at(k, q) = v;
      bool ok = true;
      for (const auto& c : bucket[static_cast<size_t>(cell)])
        if (!satisfied(c)) {
          ok = false;
          break;
        }
      if (ok) self(self, cell + 1);
    }
    w.at(k, q) = 0;
  };
  if (cells == 0) {
    found.push_back(w);
  } else {
    dfs(dfs, 0);
  }

  H2Enumeration out;
  out.num_cocycles = static_cast<long long>(found.size());

  // Group by coboundary orbits; enumeration order is lexicographic, so the
  // first member reached is the orbit's smallest element.
  std::map<std::vector<int>, int> index_of;
  for (size_t i = 0; i < found.size(); ++i) index_of[full_cochain(found[i])] = static_cast<int>(i);
  std::vector<char> seen(found.size(), 0);
  for (size_t i = 0; i < found.size(); ++i) {
    if (seen[i]) continue;
    std::set<int> orbit;
    std::vector<int> b(static_cast<size_t>(nq), 0);
    // Odometer over b_1..b_{nq-1}; b_0 stays at the identity.
    while (true) {
      Cocycle moved = apply_coboundary(t, found[i], b);
      auto it = index_of.find(full_cochain(moved));
      if (it == index_of.end()) throw CocycleInvalid("coboundary left the cocycle set");
      orbit.insert(it->second);
      int pos = 1;
      while (pos < nq && ++b[static_cast<size_t>(pos)] == ng) {
        b[static_cast<size_t>(pos)] = 0;
        ++pos;
      }
      if (pos == nq) break;
    }
    for (int j : orbit) seen[static_cast<size_t>(j)] = 1;
    out.class_reps.push_back(found[i]);
    out.class_sizes.push_back(static_cast<long long>(orbit.size()));
  }
  return out;
}

std::vector<std::vector<int>> reduce_by_relabelling(const TwistAction& t,
                                                    const std::vector<Cocycle>& classes) {
  check_twist_shape(t);
  const int nq = t.Q->order(), ng = t.G->order();

  // Membership map: any cocycle in a class orbit -> class index.
  std::map<std::vector<int>, int> class_of;
  for (size_t i = 0; i < classes.size(); ++i) {
    std::vector<int> b(static_cast<size_t>(nq), 0);
    while (true) {
      Cocycle moved = apply_coboundary(t, classes[i], b);
      class_of[full_cochain(moved)] = static_cast<int>(i);
      int pos = 1;
      while (pos < nq && ++b[static_cast<size_t>(pos)] == ng) {
        b[static_cast<size_t>(pos)] = 0;
        ++pos;
      }
      if (pos == nq) break;
    }
  }

  std::vector<int> parent(classes.size());
  for (size_t i = 0; i < classes.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int x) {
    while (parent[static_cast<size_t>(x)] != x) x = parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
    return x;
  };

  for (const auto& rho : automorphism_group(*t.Q)) {
    bool twist_fixed = true;
    for (int q = 0; q < nq && twist_fixed; ++q)
      if (t.phi[static_cast<size_t>(rho[static_cast<size_t>(q)])] != t.phi[static_cast<size_t>(q)]) twist_fixed = false;
    if (!twist_fixed) continue;
    for (size_t i = 0; i < classes.size(); ++i) {
      Cocycle moved = Cocycle::trivial(nq);
      for (int k = 0; k < nq; ++k)
        for (int q = 0; q < nq; ++q)
          moved.at(k, q) = classes[i].at(rho[static_cast<size_t>(k)], rho[static_cast<size_t>(q)]);
      auto it = class_of.find(full_cochain(moved));
      if (it == class_of.end())
        throw CocycleInvalid("relabelled cocycle is not in any provided class");
      const int a = find(static_cast<int>(i)), b = find(it->second);
      if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
    }
  }

  std::map<int, std::vector<int>> orbits;
  for (size_t i = 0; i < classes.size(); ++i) orbits[find(static_cast<int>(i))].push_back(static_cast<int>(i));
  std::vector<std::vector<int>> out;
  for (auto& [root, members] : orbits) out.push_back(std::move(members));
  return out;
}

ExtensionModel build_extension(const TwistAction& t, const Cocycle& w) {
  CocycleReport rep = check_cocycle(t, w);
  if (!rep.valid) throw CocycleInvalid("cocycle condition fails; extension would not associate");
  const int nq = t.Q->order(), ng = t.G->order();
  const int n = nq * ng;
  auto idx = [ng](int g, int q) { return q * ng + g; };

  std::vector<int> table(static_cast<size_t>(n) * n);
  for (int q1 = 0; q1 < nq; ++q1)
    for (int g1 = 0; g1 < ng; ++g1)
      for (int q2 = 0; q2 < nq; ++q2)
        for (int g2 = 0; g2 < ng; ++g2) {
          int g = t.G->mul(g1, t.apply(q1, g2));
          g = t.G->mul(g, w.at(q1, q2));
          table[static_cast<size_t>(idx(g1, q1)) * n + idx(g2, q2)] = idx(g, t.Q->mul(q1, q2));
        }

  ExtensionModel ext;
  ext.E = std::make_shared<FiniteGroup>(std::move(table),
                                        t.G->name() + "." + t.Q->name());
  ext.G = t.G;
  ext.Q = t.Q;
  ext.twist = t;
  ext.omega = w;
  ext.embed_g.resize(static_cast<size_t>(ng));
  for (int g = 0; g < ng; ++g) ext.embed_g[static_cast<size_t>(g)] = idx(g, 0);
  ext.section.resize(static_cast<size_t>(nq));
  for (int q = 0; q < nq; ++q) ext.section[static_cast<size_t>(q)] = idx(0, q);
  ext.coset_of.resize(static_cast<size_t>(n));
  ext.g_part.resize(static_cast<size_t>(n));
  for (int e = 0; e < n; ++e) {
    ext.coset_of[static_cast<size_t>(e)] = e / ng;
    ext.g_part[static_cast<size_t>(e)] = e % ng;
  }
  return ext;
}

ExtensionModel extension_from_subgroup(GroupPtr e, const std::vector<int>& g_elems) {
  if (!is_normal_subgroup(*e, g_elems)) throw NotNormal("the given subgroup is not normal");
  auto [gptr, to_parent] = subgroup_as_group(*e, g_elems);
  const int ng = gptr->order();
  const int n = e->order();
  const int nq = n / ng;

  std::vector<int> pos_in_g(static_cast<size_t>(n), -1);
  for (int i = 0; i < ng; ++i) pos_in_g[static_cast<size_t>(to_parent[static_cast<size_t>(i)])] = i;

  // Cosets ordered by smallest member; identity coset first.
  std::vector<int> coset_of(static_cast<size_t>(n), -1);
  std::vector<int> section;
  for (int x = 0; x < n; ++x) {
    if (coset_of[static_cast<size_t>(x)] >= 0) continue;
    const int q = static_cast<int>(section.size());
    section.push_back(x);
    for (int i = 0; i < ng; ++i) coset_of[static_cast<size_t>(e->mul(to_parent[static_cast<size_t>(i)], x))] = q;
  }
  if (static_cast<int>(section.size()) != nq) throw MalformedTable("coset decomposition failed");

  // Quotient table on the coset labels.
  std::vector<int> qtable(static_cast<size_t>(nq) * nq);
  for (int a = 0; a < nq; ++a)
    for (int b = 0; b < nq; ++b)
      qtable[static_cast<size_t>(a) * nq + b] =
          coset_of[static_cast<size_t>(e->mul(section[static_cast<size_t>(a)], section[static_cast<size_t>(b)]))];
  GroupPtr qptr = std::make_shared<FiniteGroup>(std::move(qtable), e->name() + "/" + gptr->name());

  ExtensionModel ext;
  ext.E = e;
  ext.G = gptr;
  ext.Q = qptr;
  ext.embed_g = to_parent;
  ext.section = section;
  ext.coset_of = coset_of;
  ext.g_part.resize(static_cast<size_t>(n));
  for (int x = 0; x < n; ++x) {
    const int q = coset_of[static_cast<size_t>(x)];
    const int g = pos_in_g[static_cast<size_t>(e->mul(x, e->inverse(section[static_cast<size_t>(q)])))];
    if (g < 0) throw MalformedTable("coset decomposition failed");
    ext.g_part[static_cast<size_t>(x)] = g;
  }

  ext.twist.Q = qptr;
  ext.twist.G = gptr;
  ext.twist.phi.assign(static_cast<size_t>(nq), std::vector<int>(static_cast<size_t>(ng)));
  for (int q = 0; q < nq; ++q)
    for (int g = 0; g < ng; ++g)
      ext.twist.phi[static_cast<size_t>(q)][static_cast<size_t>(g)] =
          pos_in_g[static_cast<size_t>(e->conj(section[static_cast<size_t>(q)], to_parent[static_cast<size_t>(g)]))];
  ext.omega = Cocycle::trivial(nq);
  for (int k = 0; k < nq; ++k)
    for (int q = 0; q < nq; ++q) {
      const int prod = e->mul(section[static_cast<size_t>(k)], section[static_cast<size_t>(q)]);
      const int kq = coset_of[static_cast<size_t>(prod)];
      ext.omega.at(k, q) = pos_in_g[static_cast<size_t>(e->mul(prod, e->inverse(section[static_cast<size_t>(kq)]))) ];
    }
  return ext;
}

PhiOmega extract_phi_omega(const ExtensionModel& ext) {
  PhiOmega out;
  const int nq = ext.Q->order(), ng = ext.G->order();
  const auto& e = *ext.E;

  std::vector<int> pos_in_g(static_cast<size_t>(e.order()), -1);
  for (int i = 0; i < ng; ++i) pos_in_g[static_cast<size_t>(ext.embed_g[static_cast<size_t>(i)])] = i;

  out.twist.Q = ext.Q;
  out.twist.G = ext.G;
  out.twist.phi.assign(static_cast<size_t>(nq), std::vector<int>(static_cast<size_t>(ng)));
  for (int q = 0; q < nq; ++q)
    for (int g = 0; g < ng; ++g) {
      const int c = e.conj(ext.eps(q), ext.embed_g[static_cast<size_t>(g)]);
      if (pos_in_g[static_cast<size_t>(c)] < 0) throw NotNormal("conjugation leaves the subgroup");
      out.twist.phi[static_cast<size_t>(q)][static_cast<size_t>(g)] = pos_in_g[static_cast<size_t>(c)];
    }
  out.omega = Cocycle::trivial(nq);
  for (int k = 0; k < nq; ++k)
    for (int q = 0; q < nq; ++q) {
      const int prod = e.mul(ext.eps(k), ext.eps(q));
      const int kq = ext.Q->mul(k, q);
      const int g = pos_in_g[static_cast<size_t>(e.mul(prod, e.inverse(ext.eps(kq))))];
      if (g < 0) throw MalformedTable("section products do not split over the subgroup");
      out.omega.at(k, q) = g;
    }

  if (e.order() <= 16) {
    ExtensionModel rebuilt = build_extension(out.twist, out.omega);
    // The map (g,q) -> embed(g) eps(q) must be an isomorphism onto E.
    std::vector<int> f(static_cast<size_t>(e.order()));
    for (int q = 0; q < nq; ++q)
      for (int g = 0; g < ng; ++g)
        f[static_cast<size_t>(q * ng + g)] = e.mul(ext.embed_g[static_cast<size_t>(g)], ext.eps(q));
    for (int x = 0; x < e.order(); ++x)
      for (int y = 0; y < e.order(); ++y)
        if (f[static_cast<size_t>(rebuilt.E->mul(x, y))] !=
            e.mul(f[static_cast<size_t>(x)], f[static_cast<size_t>(y)]))
          throw VerificationError("extracted twist and cocycle do not rebuild the extension");
    out.round_trip_checked = true;
  }
  return out;
}

namespace {

// Evaluate a lambda word for one specific section; values land in G.
std::map<int, long long> lambda_counts(const ExtensionModel& ext, const LambdaDescriptor& d,
                                       const std::vector<int>& sec) {
  const auto& e = *ext.E;
  std::vector<int> pos_in_g(static_cast<size_t>(e.order()), -1);
  for (size_t i = 0; i < ext.embed_g.size(); ++i) pos_in_g[static_cast<size_t>(ext.embed_g[i])] = static_cast<int>(i);

  auto to_g = [&](int x) {
    const int g = pos_in_g[static_cast<size_t>(x)];
    if (g < 0) throw InvalidInput("lambda word does not land in the normal subgroup");
    return g;
  };

  std::map<int, long long> counts;
  switch (d.kind) {
    case LambdaDescriptor::Kind::Power: {
      if (ext.Q->power(d.q, d.n) != 0)
        throw InvalidInput("power word needs q^n to be the identity coset");
      counts[to_g(e.power(sec[static_cast<size_t>(d.q)], d.n))] = 1;
      break;
    }
    case LambdaDescriptor::Kind::Commutator: {
      if (ext.Q->mul(d.q, d.k) != ext.Q->mul(d.k, d.q))
        throw InvalidInput("commutator word needs commuting cosets");
      const int a = sec[static_cast<size_t>(d.q)], b = sec[static_cast<size_t>(d.k)];
      counts[to_g(e.mul(e.mul(a, b), e.mul(e.inverse(a), e.inverse(b))))] = 1;
      break;
    }
    case LambdaDescriptor::Kind::AveragedSquare: {
      if (ext.Q->mul(d.q, d.q) != 0)
        throw InvalidInput("averaged square needs an order-two coset");
      for (int g = 0; g < ext.G->order(); ++g) {
        const int x = e.mul(sec[static_cast<size_t>(d.q)], ext.embed_g[static_cast<size_t>(g)]);
        ++counts[to_g(e.mul(x, x))];
      }
      break;
    }
  }
  return counts;
}

std::map<int, long long> reduce_to_classes(const FiniteGroup& g,
                                           const std::map<int, long long>& counts) {
  auto classes = conjugacy_classes(g);
  auto cmap = class_index_map(g);
  std::map<int, long long> out;
  for (const auto& [elem, mult] : counts) out[classes[static_cast<size_t>(cmap[static_cast<size_t>(elem)])][0]] += mult;
  return out;
}

}  // namespace

LambdaValue invariant_lambda(const ExtensionModel& ext, const LambdaDescriptor& d) {
  const int nq = ext.Q->order();
  LambdaValue val;
  val.counts = reduce_to_classes(*ext.G, lambda_counts(ext, d, ext.section));

  if (ext.E->order() <= 16) {
    // Sweep every section (coset representative choice per nontrivial coset).
    std::vector<std::vector<int>> cosets(static_cast<size_t>(nq));
    for (int x = 0; x < ext.E->order(); ++x) cosets[static_cast<size_t>(ext.coset_of[static_cast<size_t>(x)])].push_back(x);
    std::vector<size_t> pick(static_cast<size_t>(nq), 0);
    std::vector<int> sec(static_cast<size_t>(nq));
    sec[0] = 0;
    while (true) {
      for (int q = 1; q < nq; ++q) sec[static_cast<size_t>(q)] = cosets[static_cast<size_t>(q)][pick[static_cast<size_t>(q)]];
      auto reduced = reduce_to_classes(*ext.G, lambda_counts(ext, d, sec));
      if (reduced != val.counts)
        throw NotGaugeInvariant("lambda word depends on the section choice");
      int pos = 1;
      while (pos < nq && ++pick[static_cast<size_t>(pos)] == cosets[static_cast<size_t>(pos)].size()) {
        pick[static_cast<size_t>(pos)] = 0;
        ++pos;
      }
      if (pos == nq) break;
    }
  }
  return val;
}

}  // namespace setnet
