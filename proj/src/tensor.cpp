#include "setnet/tensor.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace setnet {

namespace {

using RowMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

size_t dims_product(const std::vector<Leg>& legs) {
  size_t n = 1;
  for (const auto& l : legs) n *= static_cast<size_t>(l.dim);
  return n;
}

void check_budget(size_t elems, const ContractionBudget& budget, const char* what) {
  if (elems * sizeof(std::complex<double>) > budget.bytes) {
    throw MemoryBudgetExceeded(std::string(what) + ": " + std::to_string(elems) +
                               " elements exceed the contraction budget");
  }
}

}  // namespace

DenseTensor DenseTensor::zeros(std::vector<Leg> legs) {
  DenseTensor t;
  t.legs = std::move(legs);
  t.data.assign(dims_product(t.legs), {0.0, 0.0});
  return t;
}

int DenseTensor::leg_index(const std::string& name) const {
  for (size_t i = 0; i < legs.size(); ++i)
    if (legs[i].name == name) return static_cast<int>(i);
  return -1;
}

int DenseTensor::leg_dim(const std::string& name) const {
  int i = leg_index(name);
  if (i < 0) throw DimensionMismatch("no leg named '" + name + "'");
  return legs[static_cast<size_t>(i)].dim;
}

std::complex<double>& DenseTensor::at(const std::vector<int>& idx) {
  size_t flat = 0;
  for (size_t i = 0; i < legs.size(); ++i) flat = flat * legs[i].dim + static_cast<size_t>(idx[i]);
  return data[flat];
}

std::complex<double> DenseTensor::at(const std::vector<int>& idx) const {
  return const_cast<DenseTensor*>(this)->at(idx);
}

DenseTensor DenseTensor::renamed(const std::string& from, const std::string& to) const {
  DenseTensor t = *this;
  int i = t.leg_index(from);
  if (i < 0) throw DimensionMismatch("no leg named '" + from + "'");
  t.legs[static_cast<size_t>(i)].name = to;
  return t;
}

DenseTensor DenseTensor::transposed(const std::vector<std::string>& order) const {
  if (order.size() != legs.size())
    throw DimensionMismatch("transpose order must mention every leg exactly once");
  std::vector<int> perm(order.size());  // output position -> input position
  std::vector<char> used(legs.size(), 0);
  for (size_t o = 0; o < order.size(); ++o) {
    int i = leg_index(order[o]);
    if (i < 0 || used[static_cast<size_t>(i)])
      throw DimensionMismatch("bad transpose order at leg '" + order[o] + "'");
    used[static_cast<size_t>(i)] = 1;
    perm[o] = i;
  }

  const size_t rank = legs.size();
  std::vector<size_t> in_stride(rank, 1);
  for (size_t i = rank; i-- > 1;) in_stride[i - 1] = in_stride[i] * static_cast<size_t>(legs[i].dim);

  DenseTensor out;
  out.legs.resize(rank);
  for (size_t o = 0; o < rank; ++o) out.legs[o] = legs[static_cast<size_t>(perm[o])];
  out.data.resize(data.size());

  std::vector<size_t> stride_by_out(rank);
  for (size_t o = 0; o < rank; ++o) stride_by_out[o] = in_stride[static_cast<size_t>(perm[o])];

  std::vector<int> idx(rank, 0);
  size_t in_flat = 0;
  for (size_t out_flat = 0; out_flat < out.data.size(); ++out_flat) {
    out.data[out_flat] = data[in_flat];
    for (size_t o = rank; o-- > 0;) {
      idx[o]++;
      in_flat += stride_by_out[o];
      if (idx[o] < out.legs[o].dim) break;
      in_flat -= stride_by_out[o] * static_cast<size_t>(out.legs[o].dim);
      idx[o] = 0;
    }
  }
  return out;
}

DenseTensor DenseTensor::self_traced() const {
  // Find the first repeated name, trace it, recurse.
  for (size_t i = 0; i < legs.size(); ++i) {
    for (size_t j = i + 1; j < legs.size(); ++j) {
      if (legs[i].name != legs[j].name) continue;
      if (legs[i].dim != legs[j].dim)
        throw DimensionMismatch("traced legs '" + legs[i].name + "' differ in dimension");
      std::vector<std::string> order;
      std::vector<Leg> keep;
      for (size_t k = 0; k < legs.size(); ++k) {
        if (k == i || k == j) continue;
        // Repeated names elsewhere keep positional identity via temporary tags.
        order.push_back(legs[k].name);
        keep.push_back(legs[k]);
      }
      // Use index-based gather instead of transposed() to stay robust when
      // other duplicate names exist.
      const size_t rank = legs.size();
      std::vector<size_t> stride(rank, 1);
      for (size_t k = rank; k-- > 1;) stride[k - 1] = stride[k] * static_cast<size_t>(legs[k].dim);
      DenseTensor out = DenseTensor::zeros(keep);
      std::vector<int> idx(keep.size(), 0);
      const int d = legs[i].dim;
      for (size_t of = 0; of < out.data.size(); ++of) {
        size_t base = 0;
        size_t k2 = 0;
        for (size_t k = 0; k < rank; ++k) {
          if (k == i || k == j) continue;
          base += stride[k] * static_cast<size_t>(idx[k2++]);
        }
        std::complex<double> acc{0.0, 0.0};
        for (int a = 0; a < d; ++a) acc += data[base + (stride[i] + stride[j]) * static_cast<size_t>(a)];
        out.data[of] = acc;
        for (size_t k = keep.size(); k-- > 0;) {
          idx[k]++;
          if (idx[k] < keep[k].dim) break;
          idx[k] = 0;
        }
      }
      return out.self_traced();
    }
  }
  return *this;
}

ContractionBudget ContractionBudget::from_env() {
  ContractionBudget b;
  if (const char* s = std::getenv("SETNET_BUDGET_MB")) {
    char* end = nullptr;
    long long mb = std::strtoll(s, &end, 10);
    if (end != s && mb > 0) b.bytes = static_cast<size_t>(mb) << 20;
  }
  return b;
}

DenseTensor contract_pair(const DenseTensor& a, const DenseTensor& b,
                          const ContractionBudget& budget) {
  std::vector<std::string> shared;
  for (const auto& la : a.legs) {
    int j = b.leg_index(la.name);
    if (j < 0) continue;
    if (b.legs[static_cast<size_t>(j)].dim != la.dim)
      throw DimensionMismatch("leg '" + la.name + "' has dimension " + std::to_string(la.dim) +
                              " vs " + std::to_string(b.legs[static_cast<size_t>(j)].dim));
    shared.push_back(la.name);
  }

  std::vector<std::string> a_order, b_order;
  std::vector<Leg> out_legs;
  for (const auto& l : a.legs)
    if (std::find(shared.begin(), shared.end(), l.name) == shared.end()) {
      a_order.push_back(l.name);
      out_legs.push_back(l);
    }
  a_order.insert(a_order.end(), shared.begin(), shared.end());
  b_order = shared;
  for (const auto& l : b.legs)
    if (std::find(shared.begin(), shared.end(), l.name) == shared.end()) {
      b_order.push_back(l.name);
      out_legs.push_back(l);
    }

  check_budget(dims_product(out_legs) + a.size() + b.size(), budget, "contract_pair");
  DenseTensor at = a.transposed(a_order);
  DenseTensor bt = b.transposed(b_order);

  size_t s = 1;
  for (const auto& n : shared) s *= static_cast<size_t>(a.leg_dim(n));
  size_t ra = at.size() / s, cb = bt.size() / s;

  DenseTensor out;
  out.legs = out_legs;
  out.data.resize(ra * cb);
  Eigen::Map<const RowMat> ma(at.data.data(), static_cast<Eigen::Index>(ra),
                              static_cast<Eigen::Index>(s));
  Eigen::Map<const RowMat> mb(bt.data.data(), static_cast<Eigen::Index>(s),
                              static_cast<Eigen::Index>(cb));
  Eigen::Map<RowMat> mo(out.data.data(), static_cast<Eigen::Index>(ra),
                        static_cast<Eigen::Index>(cb));
  mo.noalias() = ma * mb;
  return out;
}

DenseTensor contract(std::vector<DenseTensor> network, const ContractionBudget& budget) {
  if (network.empty()) throw DimensionMismatch("empty network");
  for (auto& t : network) t = t.self_traced();
  {
    std::map<std::string, int> seen;
    for (const auto& t : network)
      for (const auto& l : t.legs)
        if (++seen[l.name] > 2)
          throw DimensionMismatch("leg '" + l.name + "' appears in more than two tensors");
  }

  while (network.size() > 1) {
    // Greedy: pick the pair with the smallest contraction result.
    size_t best_i = 0, best_j = 1;
    size_t best_size = SIZE_MAX;
    bool found_shared = false;
    for (size_t i = 0; i < network.size(); ++i) {
      for (size_t j = i + 1; j < network.size(); ++j) {
        size_t shared = 1, result = 1;
        for (const auto& l : network[i].legs) {
          if (network[j].leg_index(l.name) >= 0)
            shared *= static_cast<size_t>(l.dim);
          else
            result *= static_cast<size_t>(l.dim);
        }
        for (const auto& l : network[j].legs)
          if (network[i].leg_index(l.name) < 0) result *= static_cast<size_t>(l.dim);
        bool has_shared = shared > 1;
        if ((has_shared && !found_shared) ||
            (has_shared == found_shared && result < best_size)) {
          found_shared = found_shared || has_shared;
          best_size = result;
          best_i = i;
          best_j = j;
        }
      }
    }
    DenseTensor merged = contract_pair(network[best_i], network[best_j], budget);
    network.erase(network.begin() + static_cast<long>(best_j));
    network[best_i] = merged.self_traced();
  }
  return network[0];
}

DenseTensor contract(const ContractionPlan& plan, const ContractionBudget& budget) {
  std::vector<DenseTensor> nodes = plan.nodes;
  auto tag = [](int node, const std::string& leg) {
    return "#" + std::to_string(node) + "." + leg;
  };
  for (size_t n = 0; n < nodes.size(); ++n)
    for (auto& l : nodes[n].legs) l.name = tag(static_cast<int>(n), l.name);

  std::vector<char> bonded;
  for (size_t k = 0; k < plan.bonds.size(); ++k) {
    const auto& bd = plan.bonds[k];
    const std::string bond_name = "~bond" + std::to_string(k);
    for (const ContractionPlan::LegRef* ref : {&bd.a, &bd.b}) {
      if (ref->node < 0 || ref->node >= static_cast<int>(nodes.size()))
        throw DimensionMismatch("bond references missing node");
      auto& node = nodes[static_cast<size_t>(ref->node)];
      int i = node.leg_index(tag(ref->node, ref->leg));
      if (i < 0) throw DimensionMismatch("bond references missing leg '" + ref->leg + "'");
      node.legs[static_cast<size_t>(i)].name = bond_name;
    }
  }

  DenseTensor result = contract(std::move(nodes), budget);

  std::vector<std::string> order;
  for (const auto& ref : plan.open) order.push_back(tag(ref.node, ref.leg));
  if (order.size() != result.legs.size())
    throw DimensionMismatch("open legs do not match contraction result");
  result = result.transposed(order);
  for (size_t i = 0; i < result.legs.size(); ++i) result.legs[i].name = plan.open[i].leg;
  return result;
}

DenseTensor apply_leg_operator(const DenseTensor& t, const std::string& leg,
                               const std::vector<std::complex<double>>& op) {
  int pos = t.leg_index(leg);
  if (pos < 0) throw DimensionMismatch("no leg named '" + leg + "'");
  const size_t d = static_cast<size_t>(t.legs[static_cast<size_t>(pos)].dim);
  if (op.size() != d * d) throw DimensionMismatch("operator size does not match leg '" + leg + "'");

  size_t inner = 1, outer = 1;
  for (size_t i = static_cast<size_t>(pos) + 1; i < t.legs.size(); ++i)
    inner *= static_cast<size_t>(t.legs[i].dim);
  for (size_t i = 0; i < static_cast<size_t>(pos); ++i) outer *= static_cast<size_t>(t.legs[i].dim);

  DenseTensor out = t;
  std::fill(out.data.begin(), out.data.end(), std::complex<double>{0.0, 0.0});
  for (size_t o = 0; o < outer; ++o) {
    const size_t base = o * d * inner;
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < d; ++j) {
        const std::complex<double> w = op[i * d + j];
        if (w == std::complex<double>{0.0, 0.0}) continue;
        const size_t dst = base + i * inner, src = base + j * inner;
        for (size_t k = 0; k < inner; ++k) out.data[dst + k] += w * t.data[src + k];
      }
  }
  return out;
}

void dump_tensor(const DenseTensor& t, const std::string& path) {
  nlohmann::json header;
  header["legs"] = nlohmann::json::array();
  for (const auto& l : t.legs) header["legs"].push_back({{"name", l.name}, {"dim", l.dim}});
  const std::string hs = header.dump();

  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f.write("SNTENS01", 8);
  const uint32_t hlen = static_cast<uint32_t>(hs.size());
  f.write(reinterpret_cast<const char*>(&hlen), 4);
  f.write(hs.data(), static_cast<std::streamsize>(hs.size()));
  f.write(reinterpret_cast<const char*>(t.data.data()),
          static_cast<std::streamsize>(t.data.size() * sizeof(std::complex<double>)));
  if (!f) throw Error("short write to '" + path + "'");
}

DenseTensor load_tensor(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "'");
  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, "SNTENS01", 8) != 0)
    throw MalformedTable("'" + path + "' is not a tensor dump");
  uint32_t hlen = 0;
  f.read(reinterpret_cast<char*>(&hlen), 4);
  std::string hs(hlen, '\0');
  f.read(hs.data(), hlen);
  if (!f) throw MalformedTable("truncated tensor header in '" + path + "'");

  DenseTensor t;
  nlohmann::json header = nlohmann::json::parse(hs, nullptr, false);
  if (header.is_discarded() || !header.contains("legs"))
    throw MalformedTable("bad tensor header in '" + path + "'");
  for (const auto& l : header["legs"])
    t.legs.push_back({l.at("name").get<std::string>(), l.at("dim").get<int>()});
  t.data.resize(dims_product(t.legs));
  f.read(reinterpret_cast<char*>(t.data.data()),
         static_cast<std::streamsize>(t.data.size() * sizeof(std::complex<double>)));
  if (!f) throw MalformedTable("truncated tensor data in '" + path + "'");
  return t;
}

}  // namespace setnet
