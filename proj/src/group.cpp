// Finite group construction, presets, descriptors, and structure queries.
#include "setnet/group.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace setnet {

FiniteGroup::FiniteGroup(std::vector<int> table, std::string name) {
  double root = std::sqrt(static_cast<double>(table.size()));
  n_ = static_cast<int>(std::lround(root));
  if (n_ <= 0 || static_cast<size_t>(n_) * n_ != table.size())
    throw MalformedTable("table length is not a perfect square");
  table_ = std::move(table);
  name_ = std::move(name);
  finish_table_checks();
}

void FiniteGroup::finish_table_checks() {
  const int n = n_;
  for (int v : table_)
    if (v < 0 || v >= n) throw MalformedTable("entry out of range");
  for (int a = 0; a < n; ++a) {
    if (mul(0, a) != a || mul(a, 0) != a)
      throw MalformedTable("element 0 is not an identity");
    std::vector<char> seen_row(n, 0), seen_col(n, 0);
    for (int b = 0; b < n; ++b) {
      if (seen_row[mul(a, b)]++) throw MalformedTable("row is not a permutation");
      if (seen_col[mul(b, a)]++) throw MalformedTable("column is not a permutation");
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c)))
          throw MalformedTable("associativity fails");
  inv_.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (mul(a, b) == 0) inv_[a] = b;
  for (int a = 0; a < n; ++a)
    if (inv_[a] < 0) throw MalformedTable("missing inverse");
}

int FiniteGroup::element_order(int a) const {
  int k = 1, x = a;
  while (x != 0) {
    x = mul(x, a);
    ++k;
  }
  return k;
}

int FiniteGroup::power(int a, long long k) const {
  if (k < 0) return power(inverse(a), -k);
  int r = 0;
  while (k-- > 0) r = mul(r, a);
  return r;
}

bool FiniteGroup::is_abelian() const {
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

// ---- presets ----

GroupPtr FiniteGroup::cyclic(int n) {
  if (n < 1) throw InvalidInput("cyclic: n must be positive");
  std::vector<int> t(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[static_cast<size_t>(a) * n + b] = (a + b) % n;
  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->n_ = n;
  g->table_ = std::move(t);
  g->name_ = "Z" + std::to_string(n);
  g->kind_ = GroupKind::Cyclic;
  g->params_ = {n};
  g->finish_table_checks();
  return g;
}

// Elements s^a r^i encoded as a*n + i; (a,i)(b,j) = (a+b, (-1)^b i + j).
GroupPtr FiniteGroup::dihedral(int n) {
  if (n < 1) throw InvalidInput("dihedral: n must be positive");
  const int m = 2 * n;
  std::vector<int> t(static_cast<size_t>(m) * m);
  auto idx = [n](int a, int i) { return a * n + ((i % n) + n) % n; };
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < n; ++i)
      for (int b = 0; b < 2; ++b)
        for (int j = 0; j < n; ++j)
          t[static_cast<size_t>(idx(a, i)) * m + idx(b, j)] =
              idx((a + b) % 2, (b ? -i : i) + j);
  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->n_ = m;
  g->table_ = std::move(t);
  g->name_ = "D" + std::to_string(n);
  g->kind_ = GroupKind::Dihedral;
  g->params_ = {n};
  g->finish_table_checks();
  return g;
}

// Order: 1,-1,i,-i,j,-j,k,-k.  Encode q = s*4 + u, u in {1,i,j,k}, s = sign bit.
GroupPtr FiniteGroup::quaternion8() {
  // Multiplication of units with sign: table over u in {0:1, 1:i, 2:j, 3:k}.
  static const int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int sign[4][4] = {{+1, +1, +1, +1},
                                 {+1, -1, +1, -1},
                                 {+1, -1, -1, +1},
                                 {+1, +1, -1, -1}};
  std::vector<int> t(64);
  auto enc = [](int s, int u) { return u * 2 + s; };  // 1,-1,i,-i,j,-j,k,-k
  for (int s1 = 0; s1 < 2; ++s1)
    for (int u1 = 0; u1 < 4; ++u1)
      for (int s2 = 0; s2 < 2; ++s2)
        for (int u2 = 0; u2 < 4; ++u2) {
          int u = unit[u1][u2];
          int s = (s1 + s2 + (sign[u1][u2] < 0 ? 1 : 0)) % 2;
          t[static_cast<size_t>(enc(s1, u1)) * 8 + enc(s2, u2)] = enc(s, u);
        }
  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->n_ = 8;
  g->table_ = std::move(t);
  g->name_ = "Q8";
  g->kind_ = GroupKind::Quaternion;
  g->finish_table_checks();
  return g;
}

GroupPtr FiniteGroup::direct_product(GroupPtr a, GroupPtr b) {
  const int na = a->order(), nb = b->order(), m = na * nb;
  std::vector<int> t(static_cast<size_t>(m) * m);
  auto idx = [nb](int x, int y) { return x * nb + y; };
  for (int x1 = 0; x1 < na; ++x1)
    for (int y1 = 0; y1 < nb; ++y1)
      for (int x2 = 0; x2 < na; ++x2)
        for (int y2 = 0; y2 < nb; ++y2)
          t[static_cast<size_t>(idx(x1, y1)) * m + idx(x2, y2)] =
              idx(a->mul(x1, x2), b->mul(y1, y2));
  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->n_ = m;
  g->table_ = std::move(t);
  g->name_ = a->name() + "x" + b->name();
  g->kind_ = GroupKind::DirectProduct;
  g->factors_ = {std::move(a), std::move(b)};
  g->finish_table_checks();
  return g;
}

GroupPtr FiniteGroup::semidirect_product(GroupPtr normal, GroupPtr quot,
                                         const std::vector<std::vector<int>>& act) {
  const int nn = normal->order(), nq = quot->order(), m = nn * nq;
  if (static_cast<int>(act.size()) != nq)
    throw InvalidInput("semidirect_product: one automorphism per quotient element");
  for (const auto& phi : act)
    if (!is_automorphism(*normal, phi))
      throw InvalidInput("semidirect_product: action entry is not an automorphism");
  for (int h1 = 0; h1 < nq; ++h1)
    for (int h2 = 0; h2 < nq; ++h2)
      for (int x = 0; x < nn; ++x)
        if (act[quot->mul(h1, h2)][x] != act[h1][act[h2][x]])
          throw InvalidInput("semidirect_product: action is not a homomorphism");
  std::vector<int> t(static_cast<size_t>(m) * m);
  auto idx = [nq](int x, int h) { return x * nq + h; };
  for (int x1 = 0; x1 < nn; ++x1)
    for (int h1 = 0; h1 < nq; ++h1)
      for (int x2 = 0; x2 < nn; ++x2)
        for (int h2 = 0; h2 < nq; ++h2)
          t[static_cast<size_t>(idx(x1, h1)) * m + idx(x2, h2)] =
              idx(normal->mul(x1, act[h1][x2]), quot->mul(h1, h2));
  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->n_ = m;
  g->table_ = std::move(t);
  g->name_ = normal->name() + ":" + quot->name();
  g->kind_ = GroupKind::Semidirect;
  g->factors_ = {std::move(normal), std::move(quot)};
  g->finish_table_checks();
  return g;
}

GroupPtr FiniteGroup::central_quotient(GroupPtr big, const std::vector<int>& kernel) {
  const int n = big->order();
  std::set<int> ker(kernel.begin(), kernel.end());
  if (!ker.count(0)) throw InvalidInput("central_quotient: kernel must contain identity");
  if (!is_subgroup(*big, std::vector<int>(ker.begin(), ker.end())))
    throw InvalidInput("central_quotient: kernel is not a subgroup");
  for (int k : ker)
    for (int a = 0; a < n; ++a)
      if (big->mul(k, a) != big->mul(a, k))
        throw InvalidInput("central_quotient: kernel is not central");
  std::vector<int> coset_of(n, -1), reps;
  for (int a = 0; a < n; ++a) {
    if (coset_of[a] >= 0) continue;
    int id = static_cast<int>(reps.size());
    reps.push_back(a);
    for (int k : ker) coset_of[big->mul(a, k)] = id;
  }
  const int m = static_cast<int>(reps.size());
  std::vector<int> t(static_cast<size_t>(m) * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      t[static_cast<size_t>(a) * m + b] = coset_of[big->mul(reps[a], reps[b])];
  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->n_ = m;
  g->table_ = std::move(t);
  g->name_ = big->name() + "/Z" + std::to_string(ker.size());
  g->kind_ = GroupKind::CentralQuotient;
  g->factors_ = {std::move(big)};
  g->quot_kernel_.assign(ker.begin(), ker.end());
  g->quot_reps_ = std::move(reps);
  g->finish_table_checks();
  return g;
}

std::string FiniteGroup::element_name(int a) const {
  switch (kind_) {
    case GroupKind::Cyclic:
      return std::to_string(a);
    case GroupKind::Dihedral: {
      int n = params_[0], s = a / n, i = a % n;
      std::string r = i == 0 ? "" : (i == 1 ? "r" : "r" + std::to_string(i));
      if (s == 0) return r.empty() ? "e" : r;
      return "s" + r;
    }
    case GroupKind::Quaternion: {
      static const char* names[8] = {"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
      return names[a];
    }
    case GroupKind::DirectProduct:
    case GroupKind::Semidirect: {
      int nb = factors_[1]->order();
      return "(" + factors_[0]->element_name(a / nb) + "," +
             factors_[1]->element_name(a % nb) + ")";
    }
    case GroupKind::CentralQuotient:
      return "[" + factors_[0]->element_name(quot_reps_[a]) + "]";
    default:
      return "g" + std::to_string(a);
  }
}

// ---- descriptors ----

namespace {

GroupPtr parse_atom(const std::string& tok) {
  if (tok == "Q8") return FiniteGroup::quaternion8();
  if (tok.size() >= 2 && tok[0] == 'Z') return FiniteGroup::cyclic(std::stoi(tok.substr(1)));
  if (tok.size() >= 2 && tok[0] == 'D') return FiniteGroup::dihedral(std::stoi(tok.substr(1)));
  throw UnknownPreset("unknown group atom: " + tok);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

GroupPtr parse_preset(std::string body) {
  // Strip whitespace.
  body.erase(std::remove_if(body.begin(), body.end(),
                            [](unsigned char c) { return std::isspace(c); }),
             body.end());
  if (body.empty()) throw InvalidInput("empty preset descriptor");

  // Central quotient: "<product>/Z2" identifies the diagonal central Z2
  // generated by (x0, y0) with x0, y0 the unique order-2 central elements of
  // the two outer factors (e.g. Z4xQ8/Z2).
  auto slash = body.find('/');
  if (slash != std::string::npos) {
    std::string head = body.substr(0, slash), tail = body.substr(slash + 1);
    if (tail != "Z2") throw InvalidInput("only /Z2 central quotients are supported");
    GroupPtr big = parse_preset(head);
    std::vector<int> order2;
    for (int z : center(*big))
      if (z != 0 && big->mul(z, z) == 0) order2.push_back(z);
    if (big->kind() == GroupKind::DirectProduct) {
      // Diagonal choice: product of the order-2 central elements of the factors.
      auto a = big->factors()[0];
      auto b = big->factors()[1];
      int xa = -1, yb = -1;
      for (int x = 1; x < a->order(); ++x)
        if (a->mul(x, x) == 0 && std::find(center(*a).begin(), center(*a).end(), x) != center(*a).end())
          xa = x;
      for (int y = 1; y < b->order(); ++y)
        if (b->mul(y, y) == 0 && std::find(center(*b).begin(), center(*b).end(), y) != center(*b).end())
          yb = y;
      if (xa < 0 || yb < 0) throw InvalidInput("no diagonal central Z2 in " + head);
      return FiniteGroup::central_quotient(big, {0, xa * b->order() + yb});
    }
    if (order2.size() != 1) throw InvalidInput("central Z2 not unique in " + head);
    return FiniteGroup::central_quotient(big, {0, order2[0]});
  }

  // Semidirect: "A:B(inv)" with B acting by inversion on abelian A.
  auto colon = body.find(':');
  if (colon != std::string::npos) {
    auto paren = body.find('(');
    std::string action = "inv";
    std::string right = body.substr(colon + 1);
    if (paren != std::string::npos) {
      action = body.substr(paren + 1, body.size() - paren - 2);
      right = body.substr(colon + 1, paren - colon - 1);
    }
    if (action != "inv") throw InvalidInput("unknown semidirect action: " + action);
    GroupPtr a = parse_preset(body.substr(0, colon));
    GroupPtr b = parse_atom(right);
    if (!a->is_abelian()) throw InvalidInput("inv action needs abelian normal factor");
    if (b->order() != 2) throw InvalidInput("inv action expects Z2 on the right");
    std::vector<int> id(a->order()), invmap(a->order());
    for (int x = 0; x < a->order(); ++x) {
      id[x] = x;
      invmap[x] = a->inverse(x);
    }
    return FiniteGroup::semidirect_product(a, b, {id, invmap});
  }

  auto toks = split(body, 'x');
  GroupPtr g = parse_atom(toks[0]);
  for (size_t i = 1; i < toks.size(); ++i) g = FiniteGroup::direct_product(g, parse_atom(toks[i]));
  return g;
}

}  // namespace

GroupPtr group_from_descriptor(const std::string& text) {
  auto pos = text.find(':');
  if (pos == std::string::npos) throw InvalidInput("descriptor needs 'preset:' or 'table:' prefix");
  std::string key = text.substr(0, pos), body = text.substr(pos + 1);
  key.erase(std::remove_if(key.begin(), key.end(),
                           [](unsigned char c) { return std::isspace(c); }),
            key.end());
  if (key == "preset") return parse_preset(body);
  if (key == "table") {
    std::istringstream in(body);
    std::vector<int> t;
    int v;
    while (in >> v) t.push_back(v);
    return std::make_shared<FiniteGroup>(std::move(t));
  }
  throw UnknownPreset("unknown descriptor kind: " + key);
}

std::string group_descriptor(const FiniteGroup& g) {
  switch (g.kind()) {
    case GroupKind::Table: {
      std::ostringstream out;
      out << "table:";
      for (int v : g.table()) out << ' ' << v;
      return out.str();
    }
    default:
      return "preset: " + g.name();
  }
}

// ---- structure ----

std::vector<std::vector<int>> conjugacy_classes(const FiniteGroup& g) {
  const int n = g.order();
  std::vector<char> done(n, 0);
  std::vector<std::vector<int>> classes;
  for (int a = 0; a < n; ++a) {
    if (done[a]) continue;
    std::set<int> orbit;
    for (int x = 0; x < n; ++x) orbit.insert(g.conj(x, a));
    classes.emplace_back(orbit.begin(), orbit.end());
    for (int y : classes.back()) done[y] = 1;
  }
  return classes;  // already ordered by smallest member since a scans ascending
}

std::vector<int> class_index_map(const FiniteGroup& g) {
  auto classes = conjugacy_classes(g);
  std::vector<int> m(g.order(), -1);
  for (size_t c = 0; c < classes.size(); ++c)
    for (int x : classes[c]) m[x] = static_cast<int>(c);
  return m;
}

std::vector<int> centralizer(const FiniteGroup& g, int h) {
  std::vector<int> out;
  for (int x = 0; x < g.order(); ++x)
    if (g.mul(x, h) == g.mul(h, x)) out.push_back(x);
  return out;
}

std::vector<int> center(const FiniteGroup& g) {
  std::vector<int> out;
  for (int x = 0; x < g.order(); ++x) {
    bool ok = true;
    for (int y = 0; ok && y < g.order(); ++y) ok = g.mul(x, y) == g.mul(y, x);
    if (ok) out.push_back(x);
  }
  return out;
}

std::vector<int> generated_subgroup(const FiniteGroup& g, std::vector<int> gens) {
  std::set<int> s = {0};
  std::vector<int> frontier = {0};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int x : frontier)
      for (int gen : gens) {
        int y = g.mul(x, gen);
        if (s.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return {s.begin(), s.end()};
}

bool is_subgroup(const FiniteGroup& g, const std::vector<int>& elems) {
  std::set<int> s(elems.begin(), elems.end());
  if (!s.count(0)) return false;
  for (int a : s)
    for (int b : s)
      if (!s.count(g.mul(a, b))) return false;
  return true;
}

bool is_normal_subgroup(const FiniteGroup& g, const std::vector<int>& elems) {
  if (!is_subgroup(g, elems)) return false;
  std::set<int> s(elems.begin(), elems.end());
  for (int x = 0; x < g.order(); ++x)
    for (int a : s)
      if (!s.count(g.conj(x, a))) return false;
  return true;
}

std::vector<PairClass> pair_conjugacy_classes(const FiniteGroup& g) {
  const int n = g.order();
  std::vector<char> done(static_cast<size_t>(n) * n, 0);
  std::vector<PairClass> classes;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (done[static_cast<size_t>(a) * n + b]) continue;
      if (g.mul(a, b) != g.mul(b, a)) continue;
      std::set<std::pair<int, int>> orbit;
      for (int x = 0; x < n; ++x) orbit.insert({g.conj(x, a), g.conj(x, b)});
      PairClass pc;
      pc.g = orbit.begin()->first;
      pc.h = orbit.begin()->second;
      pc.members.assign(orbit.begin(), orbit.end());
      for (auto& [p, q] : pc.members) done[static_cast<size_t>(p) * n + q] = 1;
      classes.push_back(std::move(pc));
    }
  return classes;
}

bool is_automorphism(const FiniteGroup& g, const std::vector<int>& phi) {
  const int n = g.order();
  if (static_cast<int>(phi.size()) != n) return false;
  std::vector<char> seen(n, 0);
  for (int v : phi) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  if (phi[0] != 0) return false;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (phi[g.mul(a, b)] != g.mul(phi[a], phi[b])) return false;
  return true;
}

namespace {

// Small generating set: greedily add the first element enlarging the span.
std::vector<int> generating_set(const FiniteGroup& g) {
  std::vector<int> gens;
  std::vector<int> span = {0};
  while (static_cast<int>(span.size()) < g.order()) {
    std::set<int> have(span.begin(), span.end());
    for (int a = 0; a < g.order(); ++a)
      if (!have.count(a)) {
        gens.push_back(a);
        break;
      }
    span = generated_subgroup(g, gens);
  }
  return gens;
}

// Extend generator images to a full homomorphism image table; empty on clash.
std::vector<int> close_map(const FiniteGroup& src, const FiniteGroup& dst,
                           const std::vector<int>& gens, const std::vector<int>& imgs) {
  std::vector<int> map(src.order(), -1);
  map[0] = 0;
  for (size_t i = 0; i < gens.size(); ++i) map[gens[i]] = imgs[i];
  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 0; a < src.order(); ++a) {
      if (map[a] < 0) continue;
      for (size_t i = 0; i < gens.size(); ++i) {
        int ab = src.mul(a, gens[i]);
        int im = dst.mul(map[a], imgs[i]);
        if (map[ab] < 0) {
          map[ab] = im;
          changed = true;
        } else if (map[ab] != im) {
          return {};
        }
      }
    }
  }
  for (int v : map)
    if (v < 0) return {};
  for (int a = 0; a < src.order(); ++a)
    for (int b = 0; b < src.order(); ++b)
      if (map[src.mul(a, b)] != dst.mul(map[a], map[b])) return {};
  return map;
}

void enumerate_isos(const FiniteGroup& src, const FiniteGroup& dst,
                    const std::vector<int>& gens, size_t pos, std::vector<int>& imgs,
                    const std::function<bool(const std::vector<int>&)>& emit, bool& stop) {
  if (stop) return;
  if (pos == gens.size()) {
    auto map = close_map(src, dst, gens, imgs);
    if (map.empty()) return;
    std::vector<char> seen(dst.order(), 0);
    for (int v : map) {
      if (seen[v]) return;  // not injective
      seen[v] = 1;
    }
    if (emit(map)) stop = true;
    return;
  }
  int need = src.element_order(gens[pos]);
  for (int c = 0; c < dst.order(); ++c) {
    if (dst.element_order(c) != need) continue;
    imgs[pos] = c;
    enumerate_isos(src, dst, gens, pos + 1, imgs, emit, stop);
    if (stop) return;
  }
}

}  // namespace

std::vector<std::vector<int>> automorphism_group(const FiniteGroup& g) {
  if (g.order() > 64) throw TooLarge("automorphism_group: order > 64");
  auto gens = generating_set(g);
  std::vector<std::vector<int>> auts;
  std::vector<int> imgs(gens.size());
  bool stop = false;
  enumerate_isos(g, g, gens, 0, imgs,
                 [&](const std::vector<int>& map) {
                   auts.push_back(map);
                   return false;
                 },
                 stop);
  std::sort(auts.begin(), auts.end());
  return auts;
}

bool isomorphic(const FiniteGroup& a, const FiniteGroup& b, std::vector<int>* iso) {
  if (a.order() != b.order()) return false;
  auto gens = generating_set(a);
  std::vector<int> imgs(gens.size());
  bool stop = false;
  bool found = false;
  enumerate_isos(a, b, gens, 0, imgs,
                 [&](const std::vector<int>& map) {
                   found = true;
                   if (iso) *iso = map;
                   return true;
                 },
                 stop);
  return found;
}

std::string isomorphism_class_name(const FiniteGroup& g) {
  const int n = g.order();
  std::vector<std::pair<std::string, GroupPtr>> candidates;
  auto add = [&](GroupPtr c) {
    if (c->order() == n) candidates.emplace_back(c->name(), std::move(c));
  };
  // Abelian candidates: products of cyclics over all factorizations up to
  // order, generated as multisets of prime-power parts.
  std::function<void(int, int, std::vector<int>&)> parts = [&](int rem, int maxd,
                                                               std::vector<int>& acc) {
    if (rem == 1) {
      GroupPtr c = FiniteGroup::cyclic(acc[0]);
      for (size_t i = 1; i < acc.size(); ++i)
        c = FiniteGroup::direct_product(c, FiniteGroup::cyclic(acc[i]));
      add(c);
      return;
    }
    for (int d = std::min(rem, maxd); d >= 2; --d)
      if (rem % d == 0) {
        acc.push_back(d);
        parts(rem / d, d, acc);
        acc.pop_back();
      }
  };
  std::vector<int> acc;
  if (n == 1) return "Z1";
  parts(n, n, acc);
  if (n % 2 == 0 && n >= 6) add(FiniteGroup::dihedral(n / 2));
  if (n == 8) add(FiniteGroup::quaternion8());
  if (n == 16) {
    add(FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::quaternion8()));
    add(group_from_descriptor("preset: Z4xQ8/Z2"));
    add(FiniteGroup::direct_product(FiniteGroup::dihedral(4), FiniteGroup::cyclic(2)));
  }
  for (auto& [name, c] : candidates)
    if (isomorphic(g, *c)) {
      // Dihedral naming by order in classification output.
      if (c->kind() == GroupKind::Dihedral) return "D" + std::to_string(n);
      if (c->kind() == GroupKind::DirectProduct &&
          c->factors()[0]->kind() == GroupKind::Dihedral)
        return "D" + std::to_string(c->factors()[0]->order()) + "x" + c->factors()[1]->name();
      return name;
    }
  return (g.is_abelian() ? "abelian_order" : "order") + std::to_string(n);
}

}  // namespace setnet
