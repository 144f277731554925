#include "setnet/rep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <Eigen/Eigenvalues>

#include "setnet/error.hpp"

namespace setnet {

namespace {

constexpr double kPi = std::numbers::pi;

cd root_of_unity(long long num, long long den) {
  const double a = 2.0 * kPi * static_cast<double>(num) / static_cast<double>(den);
  return {std::cos(a), std::sin(a)};
}

// Owning copy of a group.  Descriptors round-trip the preset structure; table
// fallback for groups (general semidirects, ad hoc tables) without one.
GroupPtr clone_group(const FiniteGroup& g) {
  try {
    auto p = group_from_descriptor(group_descriptor(g));
    if (p->table() == g.table()) return p;
  } catch (const Error&) {
  }
  return std::make_shared<FiniteGroup>(g.table(), g.name());
}

CharacterTable table_shell(GroupPtr g) {
  CharacterTable t;
  t.group = g;
  t.classes = conjugacy_classes(*g);
  t.class_of.assign(static_cast<size_t>(g->order()), -1);
  for (size_t c = 0; c < t.classes.size(); ++c)
    for (int e : t.classes[c]) t.class_of[static_cast<size_t>(e)] = static_cast<int>(c);
  return t;
}

CharacterTable cyclic_table(GroupPtr g) {
  const int n = g->order();
  CharacterTable t = table_shell(g);
  t.degrees.assign(static_cast<size_t>(n), 1);
  t.chi = Mat::Zero(n, n);
  // Element j of the cyclic preset is the j-th power of the generator.
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) t.chi(k, t.class_of[static_cast<size_t>(j)]) = root_of_unity(static_cast<long long>(k) * j, n);
  t.exact = true;
  return t;
}

// Dihedral preset of order 2n encodes s^f r^a as index f*n + a.
CharacterTable dihedral_table(GroupPtr g) {
  const int n = g->order() / 2;
  CharacterTable t = table_shell(g);
  auto rot = [n](int e) { return e % n; };
  auto flip = [n](int e) { return e / n; };

  std::vector<std::vector<cd>> rows;  // per element, later folded to classes
  std::vector<int> degs;
  auto push_row = [&](int deg, std::vector<cd> vals) {
    degs.push_back(deg);
    rows.push_back(std::move(vals));
  };

  const int m = g->order();
  {
    std::vector<cd> one(static_cast<size_t>(m), cd{1.0, 0.0});
    push_row(1, one);  // trivial
    std::vector<cd> sgn(static_cast<size_t>(m));
    for (int e = 0; e < m; ++e) sgn[static_cast<size_t>(e)] = flip(e) ? cd{-1.0, 0.0} : cd{1.0, 0.0};
    push_row(1, sgn);  // reflection sign
  }
  if (n % 2 == 0) {
    std::vector<cd> a(static_cast<size_t>(m)), b(static_cast<size_t>(m));
    for (int e = 0; e < m; ++e) {
      const double ra = (rot(e) % 2 == 0) ? 1.0 : -1.0;
      a[static_cast<size_t>(e)] = cd{ra, 0.0};
      b[static_cast<size_t>(e)] = cd{flip(e) ? -ra : ra, 0.0};
    }
    push_row(1, a);
    push_row(1, b);
  }
  for (int k = 1; 2 * k < n; ++k) {
    std::vector<cd> v(static_cast<size_t>(m));
    for (int e = 0; e < m; ++e)
      v[static_cast<size_t>(e)] =
          flip(e) ? cd{0.0, 0.0} : cd{2.0 * std::cos(2.0 * kPi * k * rot(e) / n), 0.0};
    push_row(2, v);
  }

  t.degrees = degs;
  t.chi = Mat::Zero(static_cast<int>(rows.size()), static_cast<int>(t.classes.size()));
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < t.classes.size(); ++c) t.chi(static_cast<int>(r), static_cast<int>(c)) = rows[r][static_cast<size_t>(t.classes[c][0])];
  t.exact = true;
  return t;
}

// Quaternion preset ordering 1,-1,i,-i,j,-j,k,-k.
CharacterTable quaternion_table(GroupPtr g) {
  CharacterTable t = table_shell(g);
  auto unit = [](int e) { return e / 2; };  // 0:1, 1:i, 2:j, 3:k
  std::vector<std::vector<cd>> rows;
  std::vector<int> degs;
  // 1-dim irreps factor through Q8 / {+-1} = Z2 x Z2.
  for (int si = 0; si < 2; ++si)
    for (int sj = 0; sj < 2; ++sj) {
      std::vector<cd> v(8);
      for (int e = 0; e < 8; ++e) {
        double val = 1.0;
        if (unit(e) == 1) val = si ? -1.0 : 1.0;
        if (unit(e) == 2) val = sj ? -1.0 : 1.0;
        if (unit(e) == 3) val = (si != sj) ? -1.0 : 1.0;
        v[static_cast<size_t>(e)] = cd{val, 0.0};
      }
      degs.push_back(1);
      rows.push_back(std::move(v));
    }
  {
    std::vector<cd> v(8, cd{0.0, 0.0});
    v[0] = cd{2.0, 0.0};
    v[1] = cd{-2.0, 0.0};
    degs.push_back(2);
    rows.push_back(std::move(v));
  }
  t.degrees = degs;
  t.chi = Mat::Zero(static_cast<int>(rows.size()), static_cast<int>(t.classes.size()));
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < t.classes.size(); ++c) t.chi(static_cast<int>(r), static_cast<int>(c)) = rows[r][static_cast<size_t>(t.classes[c][0])];
  t.exact = true;
  return t;
}

CharacterTable product_table(GroupPtr g) {
  const auto& factors = g->factors();
  CharacterTable a = character_table(*factors[0]);
  CharacterTable b = character_table(*factors[1]);
  const int nb = factors[1]->order();

  CharacterTable t = table_shell(g);
  const int ra = a.num_irreps(), rb = b.num_irreps();
  t.degrees.resize(static_cast<size_t>(ra) * rb);
  t.chi = Mat::Zero(ra * rb, static_cast<int>(t.classes.size()));
  for (int i = 0; i < ra; ++i)
    for (int j = 0; j < rb; ++j) {
      const int row = i * rb + j;
      t.degrees[static_cast<size_t>(row)] = a.degrees[static_cast<size_t>(i)] * b.degrees[static_cast<size_t>(j)];
      for (size_t c = 0; c < t.classes.size(); ++c) {
        const int e = t.classes[c][0];
        t.chi(row, static_cast<int>(c)) = a.value(i, e / nb) * b.value(j, e % nb);
      }
    }
  t.exact = a.exact && b.exact;
  return t;
}

CharacterTable quotient_table(GroupPtr g) {
  GroupPtr parent = g->factors()[0];
  CharacterTable pt = character_table(*parent);
  const auto& kernel = g->quotient_kernel();
  const auto& reps = g->quotient_reps();

  CharacterTable t = table_shell(g);
  std::vector<int> keep;
  for (int r = 0; r < pt.num_irreps(); ++r) {
    bool trivial_on_kernel = true;
    for (int z : kernel)
      if (std::abs(pt.value(r, z) - cd{static_cast<double>(pt.degrees[static_cast<size_t>(r)]), 0.0}) > 1e-9)
        trivial_on_kernel = false;
    if (trivial_on_kernel) keep.push_back(r);
  }
  t.degrees.resize(keep.size());
  t.chi = Mat::Zero(static_cast<int>(keep.size()), static_cast<int>(t.classes.size()));
  for (size_t r = 0; r < keep.size(); ++r) {
    t.degrees[r] = pt.degrees[static_cast<size_t>(keep[r])];
    for (size_t c = 0; c < t.classes.size(); ++c)
      t.chi(static_cast<int>(r), static_cast<int>(c)) = pt.value(keep[r], reps[static_cast<size_t>(t.classes[c][0])]);
  }
  t.exact = pt.exact;
  return t;
}

// Transplant the table of an isomorphic reference group through iso
// (iso: g index -> ref index).
CharacterTable transported_table(GroupPtr g, const CharacterTable& ref, const std::vector<int>& iso) {
  CharacterTable t = table_shell(g);
  t.degrees = ref.degrees;
  t.chi = Mat::Zero(ref.num_irreps(), static_cast<int>(t.classes.size()));
  for (int r = 0; r < ref.num_irreps(); ++r)
    for (size_t c = 0; c < t.classes.size(); ++c)
      t.chi(r, static_cast<int>(c)) = ref.value(r, iso[static_cast<size_t>(t.classes[c][0])]);
  t.exact = ref.exact;
  return t;
}

// Abelian basis: elements b_1..b_k with orders n_1..n_k such that every
// element factors uniquely as prod b_i^{a_i}.  Greedy max-order choice with
// backtracking over the small groups we handle.
struct AbelianBasis {
  std::vector<int> gens;
  std::vector<int> orders;
  std::vector<std::vector<int>> exps;  // element -> exponent tuple
};

bool abelian_basis_search(const FiniteGroup& g, std::vector<int>& gens, std::vector<int>& orders,
                          std::map<int, std::vector<int>>& reach, int covered) {
  if (covered == g.order()) return true;
  // candidates: elements not yet reached, highest order first, smallest index.
  std::vector<std::pair<int, int>> cands;
  for (int e = 0; e < g.order(); ++e)
    if (!reach.count(e)) cands.push_back({-g.element_order(e), e});
  std::sort(cands.begin(), cands.end());
  for (auto [no, e] : cands) {
    const int ord = -no;
    // Tentatively extend: all reach * e^t must be fresh and unique.
    std::map<int, std::vector<int>> next = reach;
    bool ok = true;
    int p = e;
    for (int tpow = 1; tpow < ord && ok; ++tpow) {
      for (const auto& [base, ex] : reach) {
        int elem = g.mul(base, p);
        if (next.count(elem)) {
          ok = false;
          break;
        }
        auto nex = ex;
        nex.push_back(tpow);
        next[elem] = std::move(nex);
      }
      p = g.mul(p, e);
    }
    if (!ok) continue;
    for (auto& [elem, ex] : next)
      if (ex.size() == reach.begin()->second.size()) ex.push_back(0);
    gens.push_back(e);
    orders.push_back(ord);
    std::swap(reach, next);
    if (abelian_basis_search(g, gens, orders, reach, covered * ord)) return true;
    std::swap(reach, next);
    gens.pop_back();
    orders.pop_back();
  }
  return false;
}

bool abelian_basis(const FiniteGroup& g, AbelianBasis& out) {
  std::map<int, std::vector<int>> reach;
  reach[0] = {};
  std::vector<int> gens, orders;
  if (!abelian_basis_search(g, gens, orders, reach, 1)) return false;
  out.gens = gens;
  out.orders = orders;
  out.exps.assign(static_cast<size_t>(g.order()), {});
  for (auto& [elem, ex] : reach) {
    auto full = ex;
    full.resize(gens.size(), 0);
    out.exps[static_cast<size_t>(elem)] = full;
  }
  return true;
}

CharacterTable abelian_table(GroupPtr g) {
  AbelianBasis basis;
  if (!abelian_basis(*g, basis)) throw NumericalDegeneracy("abelian basis search failed");
  const int n = g->order();
  const size_t k = basis.gens.size();

  CharacterTable t = table_shell(g);
  t.degrees.assign(static_cast<size_t>(n), 1);
  t.chi = Mat::Zero(n, n);
  // Irrep (m_1..m_k) in lexicographic order; chi(prod b^a) = prod w^{m a}.
  std::vector<int> m(k, 0);
  for (int row = 0; row < n; ++row) {
    for (int e = 0; e < n; ++e) {
      cd v{1.0, 0.0};
      for (size_t i = 0; i < k; ++i)
        v *= root_of_unity(static_cast<long long>(m[i]) * basis.exps[static_cast<size_t>(e)][i], basis.orders[i]);
      t.chi(row, t.class_of[static_cast<size_t>(e)]) = v;
    }
    for (size_t i = k; i-- > 0;) {
      if (++m[i] < basis.orders[i]) break;
      m[i] = 0;
    }
  }
  t.exact = true;
  return t;
}

CharacterTable dixon_table(GroupPtr g) {
  CharacterTable t = table_shell(g);
  const int r = static_cast<int>(t.classes.size());
  const int n = g->order();

  // Class multiplication coefficients a_{ijk}: products of class i with class
  // j landing in class k, counted per fixed representative of k.
  std::vector<Eigen::MatrixXd> M(static_cast<size_t>(r), Eigen::MatrixXd::Zero(r, r));
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      std::vector<double> cnt(static_cast<size_t>(r), 0.0);
      for (int x : t.classes[static_cast<size_t>(i)])
        for (int y : t.classes[static_cast<size_t>(j)]) cnt[static_cast<size_t>(t.class_of[static_cast<size_t>(g->mul(x, y))])] += 1.0;
      for (int k = 0; k < r; ++k)
        M[static_cast<size_t>(i)](j, k) = cnt[static_cast<size_t>(k)] / static_cast<double>(t.classes[static_cast<size_t>(k)].size());
    }
  }

  std::mt19937_64 rng(0x5e7ae11u);
  std::uniform_real_distribution<double> U(0.25, 1.0);
  for (int attempt = 0; attempt < 24; ++attempt) {
    Eigen::MatrixXcd mix = Eigen::MatrixXcd::Zero(r, r);
    for (int i = 0; i < r; ++i) mix += cd{U(rng), U(rng)} * M[static_cast<size_t>(i)].cast<cd>();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(mix);
    if (es.info() != Eigen::Success) continue;
    // Check eigenvalue separation.
    bool separated = true;
    for (int i = 0; i < r && separated; ++i)
      for (int j = i + 1; j < r; ++j)
        if (std::abs(es.eigenvalues()[i] - es.eigenvalues()[j]) < 1e-7) {
          separated = false;
          break;
        }
    if (!separated) continue;

    std::vector<std::vector<cd>> rows;
    std::vector<int> degs;
    bool good = true;
    for (int s = 0; s < r && good; ++s) {
      Eigen::VectorXcd v = es.eigenvectors().col(s);
      int pivot = 0;
      v.cwiseAbs().maxCoeff(&pivot);
      // lambda_i = |C_i| chi_i / d; recover from M_i v = lambda_i v.
      std::vector<cd> lambda(static_cast<size_t>(r));
      for (int i = 0; i < r; ++i) {
        Eigen::VectorXcd w = M[static_cast<size_t>(i)].cast<cd>() * v;
        lambda[static_cast<size_t>(i)] = w[pivot] / v[pivot];
      }
      double inv = 0.0;
      for (int i = 0; i < r; ++i)
        inv += std::norm(lambda[static_cast<size_t>(i)]) / static_cast<double>(t.classes[static_cast<size_t>(i)].size());
      const double d = std::sqrt(static_cast<double>(n) / inv);
      if (std::abs(d - std::round(d)) > 1e-6) {
        good = false;
        break;
      }
      std::vector<cd> row(static_cast<size_t>(r));
      for (int i = 0; i < r; ++i)
        row[static_cast<size_t>(i)] = d * lambda[static_cast<size_t>(i)] / static_cast<double>(t.classes[static_cast<size_t>(i)].size());
      degs.push_back(static_cast<int>(std::round(d)));
      rows.push_back(std::move(row));
    }
    if (!good) continue;

    // Canonical row order: degree, then values by class (real desc, imag asc).
    std::vector<int> order(static_cast<size_t>(r));
    for (int i = 0; i < r; ++i) order[static_cast<size_t>(i)] = i;
    auto key_less = [&](int a, int b) {
      if (degs[static_cast<size_t>(a)] != degs[static_cast<size_t>(b)]) return degs[static_cast<size_t>(a)] < degs[static_cast<size_t>(b)];
      for (int c = 0; c < r; ++c) {
        const cd va = rows[static_cast<size_t>(a)][static_cast<size_t>(c)], vb = rows[static_cast<size_t>(b)][static_cast<size_t>(c)];
        if (std::abs(va.real() - vb.real()) > 1e-6) return va.real() > vb.real();
        if (std::abs(va.imag() - vb.imag()) > 1e-6) return va.imag() < vb.imag();
      }
      return false;
    };
    std::sort(order.begin(), order.end(), key_less);

    t.degrees.resize(static_cast<size_t>(r));
    t.chi = Mat::Zero(r, r);
    for (int s = 0; s < r; ++s) {
      t.degrees[static_cast<size_t>(s)] = degs[static_cast<size_t>(order[static_cast<size_t>(s)])];
      for (int c = 0; c < r; ++c) t.chi(s, c) = rows[static_cast<size_t>(order[static_cast<size_t>(s)])][static_cast<size_t>(c)];
    }
    t.exact = false;
    return t;
  }
  throw NumericalDegeneracy("class-matrix eigenvalues failed to separate");
}

}  // namespace

MatrixRep regular_rep(const FiniteGroup& g) {
  MatrixRep rep;
  rep.group = clone_group(g);
  const int n = g.order();
  rep.mats.resize(static_cast<size_t>(n));
  for (int a = 0; a < n; ++a) {
    Mat m = Mat::Zero(n, n);
    for (int h = 0; h < n; ++h) m(g.mul(a, h), h) = 1.0;
    rep.mats[static_cast<size_t>(a)] = m;
  }
  return rep;
}

MatrixRep right_regular_rep(const FiniteGroup& g) {
  MatrixRep rep;
  rep.group = clone_group(g);
  const int n = g.order();
  rep.mats.resize(static_cast<size_t>(n));
  for (int a = 0; a < n; ++a) {
    Mat m = Mat::Zero(n, n);
    for (int h = 0; h < n; ++h) m(g.mul(h, g.inverse(a)), h) = 1.0;
    rep.mats[static_cast<size_t>(a)] = m;
  }
  return rep;
}

CharacterTable character_table(const FiniteGroup& g) {
  GroupPtr ptr = clone_group(g);
  switch (g.kind()) {
    case GroupKind::Cyclic:
      return cyclic_table(ptr);
    case GroupKind::Dihedral:
      return dihedral_table(ptr);
    case GroupKind::Quaternion:
      return quaternion_table(ptr);
    case GroupKind::DirectProduct:
      return product_table(ptr);
    case GroupKind::CentralQuotient:
      return quotient_table(ptr);
    default:
      break;
  }
  if (g.is_abelian()) return abelian_table(ptr);
  // Try transporting a preset table through an isomorphism.
  std::vector<GroupPtr> refs;
  if (g.order() % 2 == 0) refs.push_back(FiniteGroup::dihedral(g.order() / 2));
  if (g.order() == 8) refs.push_back(FiniteGroup::quaternion8());
  for (const auto& ref : refs) {
    std::vector<int> iso;
    if (isomorphic(g, *ref, &iso)) return transported_table(ptr, character_table(*ref), iso);
  }
  return dixon_table(ptr);
}

std::vector<MatrixRep> irrep_matrices(const FiniteGroup& g) {
  GroupPtr ptr = clone_group(g);
  const int n = g.order();
  std::vector<MatrixRep> out;

  auto from_characters = [&](const CharacterTable& t) {
    for (int r = 0; r < t.num_irreps(); ++r) {
      MatrixRep rep;
      rep.group = ptr;
      rep.mats.resize(static_cast<size_t>(n));
      for (int e = 0; e < n; ++e) {
        Mat m(1, 1);
        m(0, 0) = t.value(r, e);
        rep.mats[static_cast<size_t>(e)] = m;
      }
      out.push_back(std::move(rep));
    }
  };

  switch (g.kind()) {
    case GroupKind::Cyclic: {
      from_characters(cyclic_table(ptr));
      return out;
    }
    case GroupKind::Dihedral: {
      const int half = n / 2;
      CharacterTable t = dihedral_table(ptr);
      for (int r = 0; r < t.num_irreps(); ++r) {
        MatrixRep rep;
        rep.group = ptr;
        rep.mats.resize(static_cast<size_t>(n));
        if (t.degrees[static_cast<size_t>(r)] == 1) {
          for (int e = 0; e < n; ++e) {
            Mat m(1, 1);
            m(0, 0) = t.value(r, e);
            rep.mats[static_cast<size_t>(e)] = m;
          }
        } else {
          // Two-dimensional irreps indexed by the rotation frequency k; the
          // frequency is recovered from the character on the generator.
          int k = 0;
          for (int kk = 1; 2 * kk <= half; ++kk)
            if (std::abs(t.value(r, 1).real() - 2.0 * std::cos(2.0 * kPi * kk / half)) < 1e-9) k = kk;
          for (int e = 0; e < n; ++e) {
            const int a = e % half, f = e / half;
            Mat m = Mat::Zero(2, 2);
            const cd w = root_of_unity(static_cast<long long>(k) * a, half);
            if (!f) {
              m(0, 0) = w;
              m(1, 1) = std::conj(w);
            } else {
              m(0, 1) = std::conj(w);
              m(1, 0) = w;
            }
            rep.mats[static_cast<size_t>(e)] = m;
          }
        }
        out.push_back(std::move(rep));
      }
      return out;
    }
    case GroupKind::Quaternion: {
      CharacterTable t = quaternion_table(ptr);
      for (int r = 0; r < t.num_irreps(); ++r) {
        MatrixRep rep;
        rep.group = ptr;
        if (t.degrees[static_cast<size_t>(r)] == 1) {
          rep.mats.resize(8);
          for (int e = 0; e < 8; ++e) {
            Mat m(1, 1);
            m(0, 0) = t.value(r, e);
            rep.mats[static_cast<size_t>(e)] = m;
          }
        } else {
          Mat I2 = Mat::Identity(2, 2);
          Mat sx(2, 2), sy(2, 2), sz(2, 2);
          sx << 0, 1, 1, 0;
          sy << 0, cd{0, -1}, cd{0, 1}, 0;
          sz << 1, 0, 0, -1;
          const cd im{0.0, 1.0};
          std::vector<Mat> m(8);
          m[0] = I2;
          m[1] = -I2;
          m[2] = im * sz;   // i
          m[3] = -im * sz;  // -i
          m[4] = -im * sy;  // j
          m[5] = im * sy;   // -j
          m[6] = -im * sx;  // k
          m[7] = im * sx;   // -k
          rep.mats = std::move(m);
        }
        out.push_back(std::move(rep));
      }
      return out;
    }
    case GroupKind::DirectProduct: {
      auto fa = irrep_matrices(*g.factors()[0]);
      auto fb = irrep_matrices(*g.factors()[1]);
      const int nb = g.factors()[1]->order();
      for (const auto& ra : fa)
        for (const auto& rb : fb) {
          MatrixRep rep;
          rep.group = ptr;
          rep.mats.resize(static_cast<size_t>(n));
          for (int e = 0; e < n; ++e) {
            const Mat& ma = ra.mats[static_cast<size_t>(e / nb)];
            const Mat& mb = rb.mats[static_cast<size_t>(e % nb)];
            Mat m(ma.rows() * mb.rows(), ma.cols() * mb.cols());
            for (int i = 0; i < ma.rows(); ++i)
              for (int j = 0; j < ma.cols(); ++j)
                m.block(i * mb.rows(), j * mb.cols(), mb.rows(), mb.cols()) = ma(i, j) * mb;
            rep.mats[static_cast<size_t>(e)] = m;
          }
          out.push_back(std::move(rep));
        }
      return out;
    }
    case GroupKind::CentralQuotient: {
      auto parent_reps = irrep_matrices(*g.factors()[0]);
      CharacterTable pt = character_table(*g.factors()[0]);
      const auto& kernel = g.quotient_kernel();
      const auto& reps = g.quotient_reps();
      for (int r = 0; r < static_cast<int>(parent_reps.size()); ++r) {
        bool trivial_on_kernel = true;
        for (int z : kernel)
          if (std::abs(pt.value(r, z) - cd{static_cast<double>(pt.degrees[static_cast<size_t>(r)]), 0.0}) > 1e-9)
            trivial_on_kernel = false;
        if (!trivial_on_kernel) continue;
        MatrixRep rep;
        rep.group = ptr;
        rep.mats.resize(static_cast<size_t>(n));
        for (int e = 0; e < n; ++e) rep.mats[static_cast<size_t>(e)] = parent_reps[static_cast<size_t>(r)].mats[static_cast<size_t>(reps[static_cast<size_t>(e)])];
        out.push_back(std::move(rep));
      }
      return out;
    }
    default:
      break;
  }
  if (g.is_abelian()) {
    from_characters(character_table(g));
    return out;
  }
  throw Unsupported("irreducible matrices are only available for preset-built groups");
}

std::vector<int> decompose_rep(const MatrixRep& rep, const CharacterTable& table) {
  const auto& g = *table.group;
  const int n = g.order();
  std::vector<int> mult(static_cast<size_t>(table.num_irreps()), 0);
  for (int r = 0; r < table.num_irreps(); ++r) {
    cd acc{0.0, 0.0};
    for (int e = 0; e < n; ++e) acc += std::conj(table.value(r, e)) * rep.mats[static_cast<size_t>(e)].trace();
    acc /= static_cast<double>(n);
    const double m = acc.real();
    if (std::abs(acc.imag()) > 1e-6 || std::abs(m - std::round(m)) > 1e-6)
      throw NonIntegralMultiplicity("multiplicity of irrep " + std::to_string(r) +
                                    " is not an integer");
    mult[static_cast<size_t>(r)] = static_cast<int>(std::round(m));
  }
  return mult;
}

std::pair<GroupPtr, std::vector<int>> subgroup_as_group(const FiniteGroup& g,
                                                        std::vector<int> sub) {
  std::sort(sub.begin(), sub.end());
  sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
  if (sub.empty() || sub[0] != 0)
    throw MalformedTable("subgroup must contain the identity");
  std::vector<int> pos(static_cast<size_t>(g.order()), -1);
  for (size_t i = 0; i < sub.size(); ++i) pos[static_cast<size_t>(sub[i])] = static_cast<int>(i);
  const int m = static_cast<int>(sub.size());
  std::vector<int> table(static_cast<size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const int p = g.mul(sub[static_cast<size_t>(i)], sub[static_cast<size_t>(j)]);
      if (pos[static_cast<size_t>(p)] < 0) throw MalformedTable("element list is not closed under multiplication");
      table[static_cast<size_t>(i) * m + j] = pos[static_cast<size_t>(p)];
    }
  return {std::make_shared<FiniteGroup>(std::move(table)), sub};
}

CliffordRestriction clifford_restrict(const FiniteGroup& g, const std::vector<int>& sub,
                                      const CharacterTable& parent_table, int nu) {
  if (!is_normal_subgroup(g, sub)) throw NotNormal("subgroup is not normal");
  if (nu < 0 || nu >= parent_table.num_irreps()) throw UnknownIrrep("irrep index out of range");

  CliffordRestriction out;
  auto [sg, to_parent] = subgroup_as_group(g, sub);
  out.subgroup = sg;
  out.sub_elements = to_parent;
  CharacterTable st = character_table(*sg);

  const int m = sg->order();
  for (int r = 0; r < st.num_irreps(); ++r) {
    cd acc{0.0, 0.0};
    for (int i = 0; i < m; ++i)
      acc += std::conj(st.value(r, i)) * parent_table.value(nu, to_parent[static_cast<size_t>(i)]);
    acc /= static_cast<double>(m);
    if (std::abs(acc.imag()) > 1e-6 || std::abs(acc.real() - std::round(acc.real())) > 1e-6)
      throw NonIntegralMultiplicity("restriction multiplicity is not an integer");
    const int mult = static_cast<int>(std::round(acc.real()));
    if (mult > 0) out.parts.push_back({r, mult});
  }

  // Clifford constraints: constituents share dimension and multiplicity and
  // form a single conjugation orbit.
  if (!out.parts.empty()) {
    const int d0 = st.degrees[static_cast<size_t>(out.parts[0].first)];
    const int m0 = out.parts[0].second;
    for (const auto& [r, mult] : out.parts) {
      if (st.degrees[static_cast<size_t>(r)] != d0 || mult != m0)
        throw NonIntegralMultiplicity("restriction violates the Clifford pattern");
    }
    // Orbit of the first constituent under conjugation by parent elements.
    std::vector<int> inv_pos(static_cast<size_t>(g.order()), -1);
    for (size_t i = 0; i < to_parent.size(); ++i) inv_pos[static_cast<size_t>(to_parent[i])] = static_cast<int>(i);
    std::set<int> orbit;
    for (int x = 0; x < g.order(); ++x) {
      // character of mu conjugated by x matched against rows.
      for (int r = 0; r < st.num_irreps(); ++r) {
        bool match = true;
        for (int i = 0; i < m && match; ++i) {
          const int conj_elem = g.conj(x, to_parent[static_cast<size_t>(i)]);
          const cd lhs = st.value(out.parts[0].first, inv_pos[static_cast<size_t>(conj_elem)]);
          if (std::abs(lhs - st.value(r, i)) > 1e-6) match = false;
        }
        if (match) orbit.insert(r);
      }
    }
    std::set<int> constituents;
    for (const auto& [r, mult] : out.parts) constituents.insert(r);
    if (orbit != constituents)
      throw NonIntegralMultiplicity("restriction constituents are not one conjugation orbit");
  }

  out.trivial_restriction = false;
  if (out.parts.size() == 1) {
    bool all_one = true;
    for (int i = 0; i < m; ++i)
      if (std::abs(st.value(out.parts[0].first, i) - cd{1.0, 0.0}) > 1e-9) all_one = false;
    out.trivial_restriction = all_one;
  }
  return out;
}

Eigen::MatrixXcd verify_projective(const FiniteGroup& q, const std::vector<Mat>& v, double tol) {
  const int n = q.order();
  if (static_cast<int>(v.size()) != n) throw DimensionMismatch("need one matrix per group element");
  Eigen::MatrixXcd rho(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const Mat prod = v[static_cast<size_t>(k)] * v[static_cast<size_t>(l)];
      const Mat& target = v[static_cast<size_t>(q.mul(k, l))];
      const cd denom = (target.adjoint() * target).trace();
      const cd factor = (target.adjoint() * prod).trace() / denom;
      if ((prod - factor * target).norm() > tol * std::max(1.0, prod.norm()))
        throw NotProjective("products are not proportional to the group image");
      if (std::abs(std::abs(factor) - 1.0) > 1e-6)
        throw NotProjective("factor system is not unimodular");
      rho(k, l) = factor;
    }
  return rho;
}

cd character_value(const CharacterTable& t, int irrep, int element) {
  if (irrep < 0 || irrep >= t.num_irreps()) throw UnknownIrrep("irrep index out of range");
  return t.value(irrep, element);
}

}  // namespace setnet
