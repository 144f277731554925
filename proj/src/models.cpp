// Group-sum site tensors, gauging, the plaquette projector, and the exact
// torus evaluators.  All closed-network quantities reduce to finite group
// sums: contracting ket against bra over the physical leg leaves one group
// variable per site tied across bonds by |E| * delta factors, so norms,
// symmetry overlaps and patch expectations are evaluated without large
// dense intermediates.
#include "setnet/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <utility>

#include "setnet/error.hpp"

namespace setnet {
namespace {

// Physical subleg packing p = ((pu*D + pr)*D + pd)*D + pl.
inline int pack4(int a, int b, int c, int d, int dim) {
  return ((a * dim + b) * dim + c) * dim + d;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

void require_ungauged(const SetPepsModel& model, const char* what) {
  if (model.gauged())
    throw Unsupported(std::string(what) + " needs regular virtual legs; not defined after gauging");
}

// Site tensor over the sum set: sum_{s in local} prod_legs delta(p_x = s*x).
DenseTensor group_sum_tensor(const FiniteGroup& g, const std::vector<int>& local,
                             double pref) {
  const int n = g.order();
  const int d4 = n * n * n * n;
  DenseTensor t = DenseTensor::zeros(
      {{"phys", d4}, {"up", n}, {"right", n}, {"down", n}, {"left", n}});
  for (int s : local)
    for (int u = 0; u < n; ++u)
      for (int r = 0; r < n; ++r)
        for (int d = 0; d < n; ++d)
          for (int l = 0; l < n; ++l) {
            const int p = pack4(g.mul(s, u), g.mul(s, r), g.mul(s, d), g.mul(s, l), n);
            t.at({p, u, r, d, l}) += pref;
          }
  return t;
}

bool in_sorted(const std::vector<int>& v, int x) {
  return std::binary_search(v.begin(), v.end(), x);
}

}  // namespace

SetPepsModel g_isometric_tensor(GroupPtr g) {
  if (!g) throw InvalidInput("isometric tensor needs a group");
  const int n = g->order();
  if (n > 8) throw TooLarge("isometric tensor limited to |G| <= 8");
  SetPepsModel m;
  m.virtual_rep = regular_rep(*g);
  m.virtual_rep.group = g;
  m.local_group.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) m.local_group[static_cast<size_t>(i)] = i;
  m.prefactor = 1.0 / n;
  m.phys_sub = n;
  m.tensor = group_sum_tensor(*g, m.local_group, m.prefactor);
  return m;
}

SetPepsModel restricted_tensor(const ExtensionModel& ext) {
  const int ne = ext.E->order();
  if (ne > 16) throw TooLarge("restricted tensor limited to |E| <= 16");
  SetPepsModel m;
  m.virtual_rep = regular_rep(*ext.E);
  m.virtual_rep.group = ext.E;
  m.local_group = ext.embed_g;
  std::sort(m.local_group.begin(), m.local_group.end());
  m.prefactor = 1.0 / ne;
  m.phys_sub = ne;
  m.tensor = group_sum_tensor(*ext.E, m.local_group, m.prefactor);
  m.extension = ext;
  const int nq = ext.Q->order();
  for (int q = 0; q < nq; ++q)
    m.section_ops[q] = m.virtual_rep(ext.eps(q));
  return m;
}

SetPepsModel gauge_tensor(const SetPepsModel& model) {
  if (!model.extension || model.section_ops.empty())
    throw MissingSymmetryData("gauging needs the extension and its section operators");
  require_ungauged(model, "gauging");
  const ExtensionModel& ext = *model.extension;
  const auto& E = *ext.E;
  const int ne = E.order();
  const int nq = ext.Q->order();
  const int dv = ne * nq;  // virtual leg (x, tag), index x*nq + tag
  const int d4 = ne * ne * ne * ne;

  const double leg4 = static_cast<double>(dv) * dv * dv * dv;
  if (16.0 * d4 * leg4 > static_cast<double>(ContractionBudget::from_env().bytes))
    throw MemoryBudgetExceeded("gauged tensor exceeds the contraction budget");

  // B[p,(x,q)] = (1/|E|) sum_w prod delta(p_x = w x) delta(q_x = coset(w)):
  // the gauge degrees of freedom tag every virtual leg with the coset of the
  // summed element.
  DenseTensor t = DenseTensor::zeros(
      {{"phys", d4}, {"up", dv}, {"right", dv}, {"down", dv}, {"left", dv}});
  const double pref = 1.0 / ne;
  for (int w = 0; w < ne; ++w) {
    const int q = ext.coset_of[static_cast<size_t>(w)];
    for (int u = 0; u < ne; ++u)
      for (int r = 0; r < ne; ++r)
        for (int d = 0; d < ne; ++d)
          for (int l = 0; l < ne; ++l) {
            const int p = pack4(E.mul(w, u), E.mul(w, r), E.mul(w, d), E.mul(w, l), ne);
            t.at({p, u * nq + q, r * nq + q, d * nq + q, l * nq + q}) += pref;
          }
  }

  // Virtual action of w in E: L_w on the leg factor, right multiplication by
  // the inverse coset on the tag factor.
  MatrixRep vrep;
  vrep.group = ext.E;
  MatrixRep rreg = right_regular_rep(*ext.Q);
  MatrixRep lreg = regular_rep(E);
  vrep.mats.resize(static_cast<size_t>(ne));
  for (int w = 0; w < ne; ++w)
    vrep.mats[static_cast<size_t>(w)] =
        kron(lreg(w), rreg(ext.coset_of[static_cast<size_t>(w)]));

  SetPepsModel out;
  out.tensor = std::move(t);
  out.virtual_rep = std::move(vrep);
  out.local_group.resize(static_cast<size_t>(ne));
  for (int i = 0; i < ne; ++i) out.local_group[static_cast<size_t>(i)] = i;
  out.extension = ext;
  out.section_ops = model.section_ops;
  out.prefactor = pref;
  out.phys_sub = ne;
  return out;
}

Mat physical_symmetry_op(const SetPepsModel& model, int q) {
  if (model.section_ops.empty())
    throw MissingSymmetryData("no section operators on this model");
  auto it = model.section_ops.find(q);
  if (it == model.section_ops.end()) throw InvalidInput("unknown quotient element");
  const Mat& v = it->second;
  const double d = static_cast<double>(v.rows());
  if (16.0 * std::pow(d, 8) > static_cast<double>(ContractionBudget::from_env().bytes))
    throw MemoryBudgetExceeded("physical symmetry operator exceeds the budget");
  return kron(kron(v, v), kron(v, v));
}

Mat physical_compressor(const SetPepsModel& model) {
  require_ungauged(model, "physical compression");
  const auto& g = *model.virtual_group();
  const int n = g.order();
  const int d4 = n * n * n * n;
  const auto& local = model.local_group;
  const int ns = static_cast<int>(local.size());

  // Columns of the isometry are normalized indicators of the diagonal left
  // S-orbits of leg quadruples; the action is free, so every orbit has |S|
  // members and the rank is |E|^4 / |S|.
  std::vector<int> orbit_of(static_cast<size_t>(d4), -1);
  int cols = 0;
  for (int p = 0; p < d4; ++p) {
    if (orbit_of[static_cast<size_t>(p)] >= 0) continue;
    const int l = p % n, d = (p / n) % n, r = (p / (n * n)) % n, u = p / (n * n * n);
    for (int s : local)
      orbit_of[static_cast<size_t>(pack4(g.mul(s, u), g.mul(s, r), g.mul(s, d),
                                         g.mul(s, l), n))] = cols;
    ++cols;
  }
  Mat w = Mat::Zero(d4, cols);
  const double amp = 1.0 / std::sqrt(static_cast<double>(ns));
  for (int p = 0; p < d4; ++p) w(p, orbit_of[static_cast<size_t>(p)]) = amp;
  return w;
}

// ---- plaquette projector ----

PlaquetteProjector::PlaquetteProjector(const SetPepsModel& model,
                                       const ContractionBudget& budget)
    : model_(&model), budget_(budget) {
  require_ungauged(model, "plaquette projector");
  const double ns = static_cast<double>(model.local_group.size());
  const double ne = static_cast<double>(model.virtual_dim());
  calibration_ = std::pow(ns, 5) / std::pow(ne, 4);

  // When the dense patch fits the budget, re-derive the calibration from
  // probe vectors and check Gamma^dag Gamma = c * P_boundary on both.
  const double phys_bytes = 16.0 * std::pow(ne, 16);
  if (phys_bytes * 2.0 <= static_cast<double>(budget_.bytes)) {
    std::mt19937 rng(0x517cc1b7u);
    std::normal_distribution<double> dist;
    double estimate = 0.0;
    for (int probe = 0; probe < 2; ++probe) {
      Eigen::VectorXcd v(boundary_dim());
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = cd(dist(rng), dist(rng));
      Eigen::VectorXcd w = boundary_projector(v);
      Eigen::VectorXcd u = patch_adjoint(patch_map(v));
      const cd ratio = w.squaredNorm() > 0 ? w.dot(u) / cd(w.squaredNorm()) : cd(0);
      if ((u - ratio * w).norm() > 1e-9 * std::max(1.0, u.norm()))
        throw NumericalDegeneracy("patch map does not factor through the boundary projector");
      if (probe == 0) {
        estimate = ratio.real();
      } else if (std::abs(ratio.real() - estimate) > 1e-9 * std::max(1.0, estimate)) {
        throw NumericalDegeneracy("patch calibration probes disagree");
      }
    }
    calibration_ = estimate;
  }
}

int PlaquetteProjector::boundary_dim() const {
  int d = 1;
  for (int i = 0; i < 8; ++i) d *= model_->virtual_dim();
  return d;
}

int PlaquetteProjector::patch_phys_dim() const {
  long long d = 1;
  for (int i = 0; i < 16; ++i) d *= model_->virtual_dim();
  if (d > std::numeric_limits<int>::max())
    throw TooLarge("patch physical dimension overflows int");
  return static_cast<int>(d);
}

// Shared loop over (site assignment, internal bonds, boundary legs) for the
// patch map and its adjoint.  Boundary legs in order up0 up1 right0 right1
// down0 down1 left0 left1; internal bonds a (top), b (bottom), c (left
// column), d (right column); physical output packs sites row-major.
namespace {

template <typename F>
void patch_sweep(const SetPepsModel& model, F&& f) {
  const auto& g = *model.virtual_group();
  const int n = g.order();
  const auto& local = model.local_group;
  const long long nb = static_cast<long long>(n);
  const long long d4 = nb * nb * nb * nb;
  for (int g00 : local)
    for (int g01 : local)
      for (int g10 : local)
        for (int g11 : local)
          for (long long internal = 0; internal < d4; ++internal) {
            const int a = static_cast<int>(internal % nb);
            const int b = static_cast<int>((internal / nb) % nb);
            const int c = static_cast<int>((internal / (nb * nb)) % nb);
            const int d = static_cast<int>(internal / (nb * nb * nb));
            int leg[8] = {0, 0, 0, 0, 0, 0, 0, 0};
            long long bidx = 0;
            // Odometer over the eight boundary legs.
            while (true) {
              const int p00 = pack4(g.mul(g00, leg[0]), g.mul(g00, a), g.mul(g00, c),
                                    g.mul(g00, leg[6]), n);
              const int p01 = pack4(g.mul(g01, leg[1]), g.mul(g01, leg[2]),
                                    g.mul(g01, d), g.mul(g01, a), n);
              const int p10 = pack4(g.mul(g10, c), g.mul(g10, b), g.mul(g10, leg[4]),
                                    g.mul(g10, leg[7]), n);
              const int p11 = pack4(g.mul(g11, d), g.mul(g11, leg[3]),
                                    g.mul(g11, leg[5]), g.mul(g11, b), n);
              const long long phys = ((p00 * d4 + p01) * d4 + p10) * d4 + p11;
              f(phys, bidx);
              ++bidx;
              int pos = 7;
              while (pos >= 0 && ++leg[pos] == n) leg[pos--] = 0;
              if (pos < 0) break;
            }
          }
}

}  // namespace

Eigen::VectorXcd PlaquetteProjector::patch_map(const Eigen::VectorXcd& boundary) const {
  if (boundary.size() != boundary_dim())
    throw DimensionMismatch("boundary vector has the wrong dimension");
  const double ne = static_cast<double>(model_->virtual_dim());
  const double phys_bytes = 16.0 * std::pow(ne, 16);
  if (phys_bytes > static_cast<double>(budget_.bytes))
    throw MemoryBudgetExceeded("dense patch output exceeds the contraction budget");
  const long long d4 = static_cast<long long>(std::llround(std::pow(ne, 4)));
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(d4 * d4 * d4 * d4);
  const double pref = std::pow(model_->prefactor, 4);
  patch_sweep(*model_, [&](long long phys, long long bidx) {
    out[phys] += pref * boundary[bidx];
  });
  return out;
}

Eigen::VectorXcd PlaquetteProjector::patch_adjoint(const Eigen::VectorXcd& phys) const {
  const double ne = static_cast<double>(model_->virtual_dim());
  const double phys_bytes = 16.0 * std::pow(ne, 16);
  if (phys_bytes > static_cast<double>(budget_.bytes))
    throw MemoryBudgetExceeded("dense patch input exceeds the contraction budget");
  const long long d4 = static_cast<long long>(std::llround(std::pow(ne, 4)));
  if (phys.size() != d4 * d4 * d4 * d4)
    throw DimensionMismatch("physical vector has the wrong dimension");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(boundary_dim());
  const double pref = std::pow(model_->prefactor, 4);
  patch_sweep(*model_, [&](long long p, long long bidx) {
    out[bidx] += pref * phys[p];
  });
  return out;
}

Eigen::VectorXcd PlaquetteProjector::boundary_projector(const Eigen::VectorXcd& boundary) const {
  if (boundary.size() != boundary_dim())
    throw DimensionMismatch("boundary vector has the wrong dimension");
  const auto& g = *model_->virtual_group();
  const int n = g.order();
  const auto& local = model_->local_group;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(boundary.size());
  const double w = 1.0 / static_cast<double>(local.size());
  int leg[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  long long idx = 0;
  while (true) {
    const cd amp = boundary[idx] * w;
    if (amp != cd(0.0, 0.0)) {
      for (int k : local) {
        long long mapped = 0;
        for (int i = 0; i < 8; ++i) mapped = mapped * n + g.mul(k, leg[i]);
        out[mapped] += amp;
      }
    }
    ++idx;
    int pos = 7;
    while (pos >= 0 && ++leg[pos] == n) leg[pos--] = 0;
    if (pos < 0) break;
  }
  return out;
}

Eigen::VectorXcd PlaquetteProjector::apply(const Eigen::VectorXcd& phys) const {
  Eigen::VectorXcd u = patch_adjoint(phys);
  u = boundary_projector(u);
  u /= calibration_;
  return patch_map(u);
}

double PlaquetteProjector::mid_string_value(int g) const {
  return patch_string_expectation(*model_, g, {0, 1, 2}, 0, 4);
}

PlaquetteProjector plaquette_projector(const SetPepsModel& model) {
  return PlaquetteProjector(model);
}

double patch_string_expectation(const SetPepsModel& model, int g,
                                const std::vector<int>& string_cols,
                                int patch_col, int width) {
  require_ungauged(model, "patch expectation");
  const auto& E = *model.virtual_group();
  const int ne = E.order();
  if (g < 0 || g >= ne) throw InvalidInput("string element out of range");
  if (width < 3) throw InvalidInput("patch expectation needs width >= 3");
  if (patch_col < 0 || patch_col >= width) throw InvalidInput("patch column out of range");

  // Insertion element per column, in the frame where the patch sits at
  // columns {0, 1}.  Strings live on the row-0 -> row-1 bonds.
  std::vector<int> ins(static_cast<size_t>(width), 0);
  for (int c : string_cols) {
    if (c < 0 || c >= width) throw InvalidInput("string column out of range");
    ins[static_cast<size_t>((c - patch_col + width) % width)] = g;
  }

  const auto& S = model.local_group;
  // Norm of the string state: one group variable per site, uniform across the
  // connected torus; a string column forces it to commute with the insertion.
  long long den = 0;
  for (int kappa : S) {
    bool ok = true;
    for (int c = 0; c < width && ok; ++c)
      ok = ins[static_cast<size_t>(c)] == 0 ||
           E.mul(kappa, ins[static_cast<size_t>(c)]) ==
               E.mul(ins[static_cast<size_t>(c)], kappa);
    if (ok) ++den;
  }

  // Patch sandwich: the projector contributes a second fused variable pair
  // (m, n) per row; bond deltas reduce the expectation to this sum.
  long long num = 0;
  for (int kappa : S) {
    bool env_ok = true;
    for (int c = 2; c < width && env_ok; ++c)
      env_ok = ins[static_cast<size_t>(c)] == 0 ||
               E.mul(kappa, ins[static_cast<size_t>(c)]) ==
                   E.mul(ins[static_cast<size_t>(c)], kappa);
    if (!env_ok) continue;
    for (int n1 : S) {
      // Patch-internal vertical bonds: n0 = n1 * v_c for both patch columns.
      const int n0a = E.mul(n1, ins[0]);
      const int n0b = E.mul(n1, ins[1]);
      if (n0a != n0b || !in_sorted(S, n0a)) continue;
      const int n0 = n0a;
      const int m1 = E.mul(n1, kappa);   // row-1 boundary join
      const int m0a = E.mul(m1, ins[0]);
      const int m0b = E.mul(m1, ins[1]);
      if (m0a != m0b) continue;
      const int m0 = m0a;
      if (m0 != E.mul(n0, kappa)) continue;  // row-0 boundary join
      // Wrap bonds of the patch columns (no insertion there).
      if (E.mul(n0, E.mul(E.inverse(n1), m1)) != m0) continue;
      ++num;
    }
  }
  return static_cast<double>(num) /
         (static_cast<double>(S.size()) * static_cast<double>(den));
}

// ---- torus sectors ----

GroundSector ground_space(const SetPepsModel& model, int lh, int lv) {
  require_ungauged(model, "ground sector");
  if (lh < 2 || lv < 2) throw InvalidInput("torus extents must be at least 2");
  auto [local, elems] = subgroup_as_group(*model.virtual_group(), model.local_group);
  GroundSector sector;
  sector.group = local;
  sector.lh = lh;
  sector.lv = lv;
  sector.basis = pair_conjugacy_classes(*local);

  for (const auto& cls : conjugacy_classes(*local)) {
    const int g0 = cls.front();
    auto cent = centralizer(*local, g0);
    auto [ngrp, nelems] = subgroup_as_group(*local, cent);
    CharacterTable table = character_table(*ngrp);
    for (int alpha = 0; alpha < table.num_irreps(); ++alpha) {
      GroundSector::MesState mes;
      mes.flux_rep = g0;
      mes.irrep = alpha;
      for (size_t i = 0; i < nelems.size(); ++i)
        mes.coeffs.push_back({{g0, nelems[i]},
                              character_value(table, alpha, static_cast<int>(i))});
      sector.mes.push_back(std::move(mes));
    }
  }

  // Cross-check on the small torus: materialize the states and verify the
  // minimally entangled combinations are linearly independent.  The gate is
  // on the ambient group so restricted models skip the dense path.
  if (lh == 2 && lv == 2 && model.virtual_group()->order() <= 3) {
    Eigen::MatrixXcd states;
    for (size_t i = 0; i < sector.mes.size(); ++i) {
      Eigen::VectorXcd v;
      for (const auto& [pair, coeff] : sector.mes[i].coeffs) {
        Eigen::VectorXcd part =
            torus_state(model, lh, lv, elems[static_cast<size_t>(pair.first)],
                        elems[static_cast<size_t>(pair.second)]);
        v = (v.size() == 0) ? Eigen::VectorXcd(coeff * part) : Eigen::VectorXcd(v + coeff * part);
      }
      if (states.size() == 0) states.resize(v.size(), static_cast<Eigen::Index>(sector.mes.size()));
      states.col(static_cast<Eigen::Index>(i)) = v;
    }
    Eigen::MatrixXcd gram = states.adjoint() * states;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(gram);
    if (lu.rank() < static_cast<Eigen::Index>(sector.mes.size()))
      throw NumericalDegeneracy("minimally entangled torus states are not independent");
  }
  return sector;
}

Eigen::VectorXcd torus_state(const SetPepsModel& model, int lh, int lv, int g, int h,
                             bool compressed) {
  require_ungauged(model, "torus state");
  if (lh < 2 || lv < 2) throw InvalidInput("torus extents must be at least 2");
  const auto& E = *model.virtual_group();
  const int ne = E.order();
  if (g < 0 || g >= ne || h < 0 || h >= ne) throw InvalidInput("wrapping element out of range");
  const auto& S = model.local_group;
  const int ns = static_cast<int>(S.size());
  const int sites = lh * lv;
  const int bonds = 2 * sites;

  const double d4 = std::pow(static_cast<double>(ne), 4);
  const double site_dim = compressed ? d4 / ns : d4;
  const double out_dim = std::pow(site_dim, sites);
  if (16.0 * out_dim > static_cast<double>(ContractionBudget::from_env().bytes))
    throw MemoryBudgetExceeded("torus state exceeds the contraction budget");
  double iterations = std::pow(static_cast<double>(ne), bonds);
  if (!compressed) iterations *= std::pow(static_cast<double>(ns), sites);
  if (iterations > 5e8) throw SearchBudgetExceeded("torus state enumeration too large");

  // Orbit labels for the compressed physical basis.
  std::vector<int> orbit_of;
  int site_cols = static_cast<int>(d4);
  if (compressed) {
    const Mat w = physical_compressor(model);
    site_cols = static_cast<int>(w.cols());
    orbit_of.assign(static_cast<size_t>(d4), 0);
    for (int p = 0; p < static_cast<int>(d4); ++p) {
      for (int cidx = 0; cidx < site_cols; ++cidx)
        if (w(p, cidx) != cd(0.0, 0.0)) {
          orbit_of[static_cast<size_t>(p)] = cidx;
          break;
        }
    }
  }

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(out_dim));
  // Bond variables: horizontal bond (i,j) feeds the left leg of (i, j+1 mod lh)
  // and picks up L_g at the j = lh-1 wrap; vertical bond (i,j) feeds the up
  // leg of (i+1 mod lv, j) and picks up L_h at the i = lv-1 wrap.
  std::vector<int> bond(static_cast<size_t>(bonds), 0);
  const int hb0 = 0, vb0 = sites;  // offsets into `bond`
  const double site_amp = compressed
                              ? model.prefactor * std::sqrt(static_cast<double>(ns))
                              : model.prefactor;
  double amp_all = 1.0;
  for (int s = 0; s < sites; ++s) amp_all *= site_amp;

  std::vector<int> assign(static_cast<size_t>(sites), 0);  // indices into S (uncompressed)
  while (true) {
    // For this bond assignment, accumulate the per-site quadruples.
    bool done_inner = false;
    while (!done_inner) {
      long long packed = 0;
      for (int i = 0; i < lv; ++i)
        for (int j = 0; j < lh; ++j) {
          const int up_bond = bond[static_cast<size_t>(vb0 + ((i + lv - 1) % lv) * lh + j)];
          const int up = (i == 0) ? E.mul(h, up_bond) : up_bond;
          const int right = bond[static_cast<size_t>(hb0 + i * lh + j)];
          const int down = bond[static_cast<size_t>(vb0 + i * lh + j)];
          const int left_bond = bond[static_cast<size_t>(hb0 + i * lh + (j + lh - 1) % lh)];
          const int left = (j == 0) ? E.mul(g, left_bond) : left_bond;
          int p;
          if (compressed) {
            p = orbit_of[static_cast<size_t>(pack4(up, right, down, left, ne))];
          } else {
            const int s = S[static_cast<size_t>(assign[static_cast<size_t>(i * lh + j)])];
            p = pack4(E.mul(s, up), E.mul(s, right), E.mul(s, down), E.mul(s, left), ne);
          }
          packed = packed * site_cols + p;
        }
      out[packed] += amp_all;
      if (compressed) {
        done_inner = true;  // the site sum collapses onto one orbit
      } else {
        int pos = sites - 1;
        while (pos >= 0 && ++assign[static_cast<size_t>(pos)] == ns)
          assign[static_cast<size_t>(pos--)] = 0;
        done_inner = pos < 0;
        if (done_inner) std::fill(assign.begin(), assign.end(), 0);
      }
    }
    int pos = bonds - 1;
    while (pos >= 0 && ++bond[static_cast<size_t>(pos)] == ne) bond[static_cast<size_t>(pos--)] = 0;
    if (pos < 0) break;
  }
  return out;
}

std::vector<int> symmetry_on_ground_space(const SetPepsModel& model,
                                          const GroundSector& sector, int q) {
  if (!model.extension) throw MissingSymmetryData("no extension data on this model");
  const ExtensionModel& ext = *model.extension;
  if (q < 0 || q >= ext.Q->order()) throw InvalidInput("quotient element out of range");
  const auto& phi = ext.twist.phi[static_cast<size_t>(q)];
  if (static_cast<int>(phi.size()) != sector.group->order())
    throw DimensionMismatch("twist does not match the ground sector group");

  std::vector<int> perm(sector.basis.size(), -1);
  for (size_t i = 0; i < sector.basis.size(); ++i) {
    const std::pair<int, int> image = {phi[static_cast<size_t>(sector.basis[i].g)],
                                       phi[static_cast<size_t>(sector.basis[i].h)]};
    for (size_t j = 0; j < sector.basis.size(); ++j) {
      const auto& members = sector.basis[j].members;
      if (std::find(members.begin(), members.end(), image) != members.end()) {
        perm[i] = static_cast<int>(j);
        break;
      }
    }
    if (perm[i] < 0) throw VerificationError("symmetry image leaves the commuting-pair basis");
  }
  return perm;
}

double torus_norm_sq(const SetPepsModel& model, int lh, int lv) {
  if (lh < 1 || lv < 1) throw InvalidInput("torus extents must be positive");
  const int sites = lh * lv;
  if (!model.gauged()) {
    // One group variable per site, forced uniform over the local set; each
    // site contributes |S| layer pairs and the 2N bond factors cancel the
    // tensor prefactors exactly.
    const double ns = static_cast<double>(model.local_group.size());
    double total = 0.0;
    for (size_t k = 0; k < model.local_group.size(); ++k) total += std::pow(ns, sites);
    return total;
  }
  // Gauged tensor: the fused variable is (k in E, bra coset in Q); per-site
  // multiplicity |G| = |E|/|Q|.
  const ExtensionModel& ext = *model.extension;
  const double ng = static_cast<double>(ext.G->order());
  double total = 0.0;
  for (int k = 0; k < ext.E->order(); ++k)
    for (int c = 0; c < ext.Q->order(); ++c) total += std::pow(ng, sites);
  return total;
}

double torus_norm_sq_dense(const SetPepsModel& model, int lh, int lv,
                           const ContractionBudget& budget) {
  if (lh < 2 || lv < 2) throw InvalidInput("dense torus norm needs extents >= 2");
  const int dv = model.virtual_dim();

  // Double-layer site: contract ket against conjugate bra over phys.
  DenseTensor bra = model.tensor;
  for (auto& x : bra.data) x = std::conj(x);
  for (const char* name : {"up", "right", "down", "left"})
    bra = bra.renamed(name, std::string("b") + name);
  DenseTensor dsite = contract_pair(model.tensor, bra, budget);

  // Column transfer: chain lv double-sites over their vertical bonds
  // (periodic), leaving left/right double legs.
  ContractionPlan plan;
  for (int i = 0; i < lv; ++i) {
    DenseTensor node = dsite;
    for (const char* name : {"up", "right", "down", "left", "bup", "bright", "bdown", "bleft"})
      node = node.renamed(name, std::string(name) + "_" + std::to_string(i));
    plan.nodes.push_back(std::move(node));
  }
  for (int i = 0; i < lv; ++i) {
    const int next = (i + 1) % lv;
    plan.bonds.push_back({{i, "down_" + std::to_string(i)}, {next, "up_" + std::to_string(next)}});
    plan.bonds.push_back({{i, "bdown_" + std::to_string(i)}, {next, "bup_" + std::to_string(next)}});
  }
  for (int i = 0; i < lv; ++i) {
    plan.open.push_back({i, "left_" + std::to_string(i)});
    plan.open.push_back({i, "bleft_" + std::to_string(i)});
  }
  for (int i = 0; i < lv; ++i) {
    plan.open.push_back({i, "right_" + std::to_string(i)});
    plan.open.push_back({i, "bright_" + std::to_string(i)});
  }
  DenseTensor column = contract(plan, budget);

  // Pack into a transfer matrix over the (ket, bra)^lv interface.
  Eigen::Index side = 1;
  for (int i = 0; i < 2 * lv; ++i) side *= dv;
  Eigen::MatrixXcd t(side, side);
  for (Eigen::Index r = 0; r < side; ++r)
    for (Eigen::Index c = 0; c < side; ++c)
      t(r, c) = column.data[static_cast<size_t>(r) * static_cast<size_t>(side) +
                            static_cast<size_t>(c)];
  Eigen::MatrixXcd power = t;
  for (int j = 1; j < lh; ++j) power = power * t;
  const cd tr = power.trace();
  return tr.real();
}

cd torus_symmetry_fidelity(const SetPepsModel& model, int lh, int lv, int q) {
  std::vector<int> all(static_cast<size_t>(lh) * static_cast<size_t>(lv));
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return torus_partial_symmetry_overlap(model, lh, lv, q, all);
}

cd torus_partial_symmetry_overlap(const SetPepsModel& model, int lh, int lv, int q,
                                  const std::vector<int>& sites) {
  require_ungauged(model, "symmetry overlap");
  if (!model.extension) throw MissingSymmetryData("no extension data on this model");
  const ExtensionModel& ext = *model.extension;
  if (q < 0 || q >= ext.Q->order()) throw InvalidInput("quotient element out of range");
  const int n = lh * lv;
  if (lh < 1 || lv < 1) throw InvalidInput("torus extents must be positive");

  // Per-site coset label: applying U_q shifts the site's fused group variable
  // into the eps_q coset; plain bond deltas then demand one uniform element.
  std::vector<int> coset(static_cast<size_t>(n), 0);
  for (int s : sites) {
    if (s < 0 || s >= n) throw InvalidInput("site index out of range");
    coset[static_cast<size_t>(s)] = q;
  }
  const auto& E = *ext.E;
  long long count = 0;
  for (int kappa = 0; kappa < E.order(); ++kappa) {
    bool ok = true;
    for (int s = 0; s < n && ok; ++s)
      ok = ext.coset_of[static_cast<size_t>(kappa)] == coset[static_cast<size_t>(s)];
    if (ok) ++count;
  }
  return cd(static_cast<double>(count) / static_cast<double>(model.local_group.size()), 0.0);
}

nlohmann::json model_manifest(const SetPepsModel& model) {
  nlohmann::json j;
  j["kind"] = model.gauged() ? "gauged" : (model.restricted() ? "restricted" : "isometric");
  j["virtual_group"] = group_descriptor(*model.virtual_group());
  j["virtual_dim"] = model.virtual_dim();
  j["phys_subleg"] = model.phys_subdim();
  j["local_group"] = model.local_group;
  j["prefactor"] = model.prefactor;
  if (model.extension) {
    const ExtensionModel& e = *model.extension;
    j["extension"] = {{"normal", group_descriptor(*e.G)},
                      {"quotient", group_descriptor(*e.Q)},
                      {"twist", e.twist.phi},
                      {"omega", e.omega.w},
                      {"section", e.section}};
  }
  return j;
}

uint64_t manifest_hash(const nlohmann::json& manifest) {
  const std::string s = manifest.dump();
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= static_cast<uint64_t>(c);
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace setnet
