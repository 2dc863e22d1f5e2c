#include "hso/sparse_family.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace hso {

double DyadicCube::side() const { return std::ldexp(1.0, -level); }

double DyadicCube::measure() const { return std::ldexp(1.0, -level * dim()); }

bool DyadicCube::contains(const DyadicCube& other) const {
  if (other.dim() != dim() || other.level < level) return false;
  int shift = other.level - level;
  for (int d = 0; d < dim(); ++d)
    if ((other.index[static_cast<std::size_t>(d)] >> shift) !=
        index[static_cast<std::size_t>(d)])
      return false;
  return true;
}

bool DyadicCube::contains_point(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  double cells = std::ldexp(1.0, level);
  for (int d = 0; d < dim(); ++d) {
    auto c = static_cast<std::int64_t>(std::floor(x[static_cast<std::size_t>(d)] * cells));
    if (c != index[static_cast<std::size_t>(d)]) return false;
  }
  return true;
}

DyadicCube root_cube(int dim) {
  return DyadicCube{0, std::vector<std::int64_t>(static_cast<std::size_t>(dim), 0)};
}

double GradedSparseFamily::measure(int i) const {
  const DyadicCube& q = cubes[static_cast<std::size_t>(i)];
  if (geometry == FamilyGeometry::CarlesonDisc)
    return box_area(q.level, convention);
  return q.measure();
}

double GradedSparseFamily::scale_of(int i) const {
  return cubes[static_cast<std::size_t>(i)].side();
}

double GradedSparseFamily::original_measure(int i) const {
  int d = cubes.empty() ? 1 : cubes[0].dim();
  if (geometry == FamilyGeometry::CarlesonDisc) return measure(i);
  return measure(i) * std::pow(root_scale, d);
}

bool GradedSparseFamily::contains(int outer, int inner) const {
  const DyadicCube& a = cubes[static_cast<std::size_t>(outer)];
  const DyadicCube& b = cubes[static_cast<std::size_t>(inner)];
  if (geometry == FamilyGeometry::UnitCube) return a.contains(b);
  if (b.level < a.level) return false;
  DyadicArc arc{b.level, b.index[0], system};
  for (int k = b.level; k > a.level; --k) arc = arc.parent();
  return arc.index == a.index[0];
}

namespace {

struct CubeKey {
  int level;
  std::uint64_t packed;
  bool operator==(const CubeKey&) const = default;
};

struct CubeKeyHash {
  std::size_t operator()(const CubeKey& k) const {
    std::uint64_t h = k.packed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(k.level);
    h ^= h >> 32;
    return static_cast<std::size_t>(h);
  }
};

using CubeMap = std::unordered_map<CubeKey, int, CubeKeyHash>;

// Ancestor key of cube i at generation `lev` (geometry aware).
CubeKey ancestor_key(const GradedSparseFamily& f, const DyadicCube& q, int lev) {
  if (f.geometry == FamilyGeometry::CarlesonDisc) {
    DyadicArc arc{q.level, q.index[0], f.system};
    for (int k = q.level; k > lev; --k) arc = arc.parent();
    return CubeKey{lev, static_cast<std::uint64_t>(arc.index)};
  }
  int shift = q.level - lev;
  std::uint64_t key = 0;
  for (std::size_t d = 0; d < q.index.size(); ++d)
    key |= static_cast<std::uint64_t>(q.index[d] >> shift) << (lev * static_cast<int>(d));
  return CubeKey{lev, key};
}

// Peeling via the deepest-ancestor rule: the layer of a cube is one more
// than the layer of its deepest ancestor in the family. Fills layers,
// layer assignment and scales; assumes cubes deduplicated and root present
// at position 0 after sorting by level.
void assign_layers(GradedSparseFamily& f, std::vector<int>* layer_out) {
  // Sort by level, carrying any witness data along.
  std::vector<int> perm(f.cubes.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
    return f.cubes[static_cast<std::size_t>(a)].level <
           f.cubes[static_cast<std::size_t>(b)].level;
  });
  std::vector<DyadicCube> sorted_cubes;
  sorted_cubes.reserve(f.cubes.size());
  for (int i : perm) sorted_cubes.push_back(std::move(f.cubes[static_cast<std::size_t>(i)]));
  f.cubes = std::move(sorted_cubes);
  if (f.witness_measure.size() == perm.size()) {
    std::vector<double> sorted_w(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
      sorted_w[i] = f.witness_measure[static_cast<std::size_t>(perm[i])];
    f.witness_measure = std::move(sorted_w);
  }

  CubeMap map;
  map.reserve(f.cubes.size() * 2);
  for (int i = 0; i < static_cast<int>(f.cubes.size()); ++i) {
    const DyadicCube& q = f.cubes[static_cast<std::size_t>(i)];
    map.emplace(ancestor_key(f, q, q.level), i);
  }

  std::vector<int> layer(f.cubes.size(), 0);
  int max_layer = 0;
  for (int i = 0; i < static_cast<int>(f.cubes.size()); ++i) {
    const DyadicCube& q = f.cubes[static_cast<std::size_t>(i)];
    int parent_layer = -1;
    for (int lev = q.level - 1; lev >= 0; --lev) {
      auto it = map.find(ancestor_key(f, q, lev));
      if (it != map.end()) {
        parent_layer = layer[static_cast<std::size_t>(it->second)];
        break;
      }
    }
    layer[static_cast<std::size_t>(i)] = parent_layer + 1;
    max_layer = std::max(max_layer, parent_layer + 1);
  }

  f.layers.assign(static_cast<std::size_t>(max_layer) + 1, {});
  for (int i = 0; i < static_cast<int>(f.cubes.size()); ++i)
    f.layers[static_cast<std::size_t>(layer[static_cast<std::size_t>(i)])].push_back(i);

  f.scales.resize(f.layers.size());
  for (std::size_t j = 0; j < f.layers.size(); ++j) {
    int deepest = 0;
    for (int i : f.layers[j])
      deepest = std::max(deepest, f.cubes[static_cast<std::size_t>(i)].level);
    f.scales[j] = std::ldexp(1.0, -deepest);
  }
  if (layer_out) *layer_out = std::move(layer);
}

// Index of the deepest family ancestor of each cube (-1 for the root).
std::vector<int> deepest_ancestors(const GradedSparseFamily& f) {
  CubeMap map;
  map.reserve(f.cubes.size() * 2);
  for (int i = 0; i < static_cast<int>(f.cubes.size()); ++i) {
    const DyadicCube& q = f.cubes[static_cast<std::size_t>(i)];
    map.emplace(ancestor_key(f, q, q.level), i);
  }
  std::vector<int> parent(f.cubes.size(), -1);
  for (int i = 0; i < static_cast<int>(f.cubes.size()); ++i) {
    const DyadicCube& q = f.cubes[static_cast<std::size_t>(i)];
    for (int lev = q.level - 1; lev >= 0; --lev) {
      auto it = map.find(ancestor_key(f, q, lev));
      if (it != map.end()) {
        parent[static_cast<std::size_t>(i)] = it->second;
        break;
      }
    }
  }
  return parent;
}

}  // namespace

int GradedSparseFamily::layer_of(int i) const {
  for (std::size_t j = 0; j < layers.size(); ++j)
    for (int k : layers[j])
      if (k == i) return static_cast<int>(j);
  throw std::out_of_range("layer_of: cube not in any layer");
}

GradedSparseFamily layer_decomposition(std::vector<DyadicCube> cubes) {
  if (cubes.empty()) throw std::invalid_argument("layer_decomposition: empty input");
  int dim = cubes.front().dim();
  if (dim < 1) throw std::invalid_argument("layer_decomposition: zero-dimensional cube");
  for (const DyadicCube& q : cubes) {
    if (q.dim() != dim)
      throw std::invalid_argument("layer_decomposition: mixed dimensions");
    if (q.level < 0 || q.level * dim > 62)
      throw std::invalid_argument("layer_decomposition: level out of range");
    std::int64_t cells = std::int64_t{1} << q.level;
    for (std::int64_t c : q.index)
      if (c < 0 || c >= cells)
        throw std::invalid_argument(
            "layer_decomposition: cube not contained in the root cube");
  }

  GradedSparseFamily f;
  f.geometry = FamilyGeometry::UnitCube;
  f.ambient_dim = dim;
  f.cubes = std::move(cubes);

  // Deduplicate, then adjoin the root when absent.
  std::sort(f.cubes.begin(), f.cubes.end(),
            [](const DyadicCube& a, const DyadicCube& b) {
              return std::tie(a.level, a.index) < std::tie(b.level, b.index);
            });
  f.cubes.erase(std::unique(f.cubes.begin(), f.cubes.end()), f.cubes.end());
  if (f.cubes.front().level != 0) f.cubes.insert(f.cubes.begin(), root_cube(dim));

  assign_layers(f, nullptr);
  return f;
}

double degree(const GradedSparseFamily& family) {
  if (family.layers.size() < 2)
    throw std::domain_error(
        "degree: single-layer family (the associated operator is rank one)");
  double best = 0.0;
  for (std::size_t j = 0; j + 1 < family.scales.size(); ++j)
    best = std::max(best, std::log2(family.scales[j] / family.scales[j + 1]));
  return best;
}

double degree_tail(const GradedSparseFamily& family, int tail) {
  if (family.layers.size() < 2)
    throw std::domain_error("degree_tail: single-layer family");
  std::size_t gaps = family.scales.size() - 1;
  std::size_t start = (tail > 0 && static_cast<std::size_t>(tail) < gaps)
                          ? gaps - static_cast<std::size_t>(tail)
                          : 0;
  double best = 0.0;
  for (std::size_t j = start; j < gaps; ++j)
    best = std::max(best, std::log2(family.scales[j] / family.scales[j + 1]));
  return best;
}

WitnessReport sparseness_witness(GradedSparseFamily& family) {
  WitnessReport report;
  family.witness_measure.assign(family.cubes.size(), 0.0);

  if (family.geometry == FamilyGeometry::CarlesonDisc) {
    family.witness_kind = WitnessKind::UpperTent;
    for (int i = 0; i < static_cast<int>(family.cubes.size()); ++i)
      family.witness_measure[static_cast<std::size_t>(i)] =
          tent_area(family.cubes[static_cast<std::size_t>(i)].level, family.convention);
  } else {
    // Residual witness: E(Q) = Q minus the next-layer cubes inside Q. Every
    // deeper cube lies inside a next-layer cube, so the residuals are
    // pairwise disjoint; the measure is |Q| minus the children's measures.
    family.witness_kind = WitnessKind::Residual;
    for (int i = 0; i < static_cast<int>(family.cubes.size()); ++i)
      family.witness_measure[static_cast<std::size_t>(i)] = family.measure(i);
    std::vector<int> parent = deepest_ancestors(family);
    for (int i = 0; i < static_cast<int>(family.cubes.size()); ++i)
      if (parent[static_cast<std::size_t>(i)] >= 0)
        family.witness_measure[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])] -=
            family.measure(i);
  }

  double eta = 1.0;
  bool degenerate = false;
  for (int i = 0; i < static_cast<int>(family.cubes.size()); ++i) {
    double ratio = family.witness_measure[static_cast<std::size_t>(i)] / family.measure(i);
    if (ratio <= 0.0) degenerate = true;
    eta = std::min(eta, ratio);
  }
  family.eta = degenerate ? 0.0 : eta;
  report.eta = family.eta;
  report.sparse = !degenerate;
  report.kind = family.witness_kind;
  return report;
}

ValidationReport validate(const GradedSparseFamily& family, double eta) {
  ValidationReport report;
  auto fail = [&report](std::string msg) {
    report.ok = false;
    report.violations.push_back(std::move(msg));
  };
  if (family.witness_measure.size() != family.cubes.size()) {
    fail("witness data missing");
    return report;
  }
  const double rel = 1e-12;
  for (int i = 0; i < static_cast<int>(family.cubes.size()); ++i) {
    double m = family.measure(i);
    double w = family.witness_measure[static_cast<std::size_t>(i)];
    std::ostringstream id;
    id << "cube " << i << " (level " << family.cubes[static_cast<std::size_t>(i)].level << ")";
    if (w > m * (1.0 + rel)) fail(id.str() + ": E(Q) exceeds Q");
    if (w < eta * m * (1.0 - rel))
      fail(id.str() + ": |E(Q)| < eta |Q|");
  }
  // Packing inequality implied by disjointness: the witness mass below any
  // cube cannot exceed the cube's measure.
  std::vector<int> parent = deepest_ancestors(family);
  std::vector<double> below = family.witness_measure;
  std::vector<int> order(family.cubes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return family.cubes[static_cast<std::size_t>(a)].level >
           family.cubes[static_cast<std::size_t>(b)].level;
  });
  for (int i : order)
    if (parent[static_cast<std::size_t>(i)] >= 0)
      below[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])] +=
          below[static_cast<std::size_t>(i)];
  for (int i = 0; i < static_cast<int>(family.cubes.size()); ++i)
    if (below[static_cast<std::size_t>(i)] > family.measure(i) * (1.0 + rel)) {
      std::ostringstream id;
      id << "cube " << i << ": witness mass below exceeds |Q| (disjointness)";
      fail(id.str());
    }
  return report;
}

GradedSparseFamily family_counterexample(int m) {
  if (m < 1) throw std::invalid_argument("family_counterexample: m must be >= 1");
  if (m > 40) throw std::invalid_argument("family_counterexample: m too large");
  std::vector<DyadicCube> cubes;
  std::int64_t count = std::int64_t{1} << m;
  cubes.reserve(static_cast<std::size_t>(count) + 1);
  cubes.push_back(root_cube(1));
  for (std::int64_t k = 0; k < count; ++k)
    cubes.push_back(DyadicCube{m + 1, {k}});
  GradedSparseFamily f = layer_decomposition(std::move(cubes));
  f.root_scale = 2.0;  // the original root is [0,2)
  sparseness_witness(f);
  return f;
}

GradedSparseFamily family_carleson(int depth, DyadicSystem system,
                                   BoxMeasure convention) {
  if (depth < 0) throw std::invalid_argument("family_carleson: depth must be >= 0");
  if (depth > 30) throw std::invalid_argument("family_carleson: depth too large");
  GradedSparseFamily f;
  f.geometry = FamilyGeometry::CarlesonDisc;
  f.ambient_dim = 2;
  f.system = system;
  f.convention = convention;
  for (int k = 0; k <= depth; ++k) {
    f.layers.push_back({});
    f.scales.push_back(std::ldexp(1.0, -k));
    for (std::int64_t mIdx = 0; mIdx < (std::int64_t{1} << k); ++mIdx) {
      f.layers.back().push_back(static_cast<int>(f.cubes.size()));
      f.cubes.push_back(DyadicCube{k, {mIdx}});
    }
  }
  sparseness_witness(f);
  return f;
}

GradedSparseFamily family_full_tree(int dim, int depth) {
  if (dim < 1 || depth < 0 || dim * depth > 24)
    throw std::invalid_argument("family_full_tree: size out of range");
  std::vector<DyadicCube> cubes;
  for (int k = 0; k <= depth; ++k) {
    std::int64_t side = std::int64_t{1} << k;
    std::vector<std::int64_t> idx(static_cast<std::size_t>(dim), 0);
    while (true) {
      cubes.push_back(DyadicCube{k, idx});
      int d = 0;
      for (; d < dim; ++d) {
        if (++idx[static_cast<std::size_t>(d)] < side) break;
        idx[static_cast<std::size_t>(d)] = 0;
      }
      if (d == dim) break;
    }
  }
  GradedSparseFamily f = layer_decomposition(std::move(cubes));
  sparseness_witness(f);
  return f;
}

double sparse_constant_value(const GradedSparseFamily& family, double t,
                             std::span<const double> x) {
  double total = 0.0;
  for (int i = 0; i < static_cast<int>(family.cubes.size()); ++i)
    if (family.cubes[static_cast<std::size_t>(i)].contains_point(x))
      total += std::pow(family.measure(i), 1.0 - t);
  return total;
}

BlowupReport blowup_report(const GradedSparseFamily& family, double t) {
  if (family.geometry != FamilyGeometry::UnitCube || family.cubes.empty() ||
      family.cubes.front().dim() != 1)
    throw std::invalid_argument("blowup_report: expects a one-dimensional family");
  BlowupReport report;
  // Probe in the partitioned region ([0,1) before rescaling).
  double x_original = 0.3171;
  double x_stored[1] = {x_original / family.root_scale};
  for (int i = 0; i < static_cast<int>(family.cubes.size()); ++i) {
    double m = family.original_measure(i);
    report.mass_linf_to_l1 += std::pow(m, 2.0 - t);
    if (family.cubes[static_cast<std::size_t>(i)].contains_point(x_stored))
      report.value_on_partition += std::pow(m, 1.0 - t);
  }
  int m_levels = family.cubes.back().level - 1;  // partition at stored scale 2^-(m+1)
  report.paper_lower_bound = std::exp2(m_levels * (t - 1.0));
  return report;
}

namespace {

std::string to_hex(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

double from_hex(const std::string& s) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw std::runtime_error("family load: bad float '" + s + "'");
  return v;
}

}  // namespace

void save_family(const GradedSparseFamily& family, std::ostream& out) {
  out << "# hso-family v1\n";
  out << "# geometry " << (family.geometry == FamilyGeometry::UnitCube ? "cube" : "disc") << "\n";
  out << "# system "
      << (family.system == DyadicSystem::Standard ? "standard" : "shifted") << "\n";
  out << "# convention "
      << (family.convention == BoxMeasure::Exact ? "exact" : "arcsq") << "\n";
  out << "# ambient " << family.ambient_dim << "\n";
  out << "# root_scale " << to_hex(family.root_scale) << "\n";
  out << "# witness ";
  switch (family.witness_kind) {
    case WitnessKind::None: out << "none"; break;
    case WitnessKind::Residual: out << "residual"; break;
    case WitnessKind::UpperTent: out << "tent"; break;
  }
  out << "\n# eta " << to_hex(family.eta) << "\n";
  out << "# cubes " << family.cubes.size() << "\n";
  for (const DyadicCube& q : family.cubes) {
    out << q.dim() << ' ' << q.level;
    for (std::int64_t c : q.index) out << ' ' << c;
    out << '\n';
  }
  if (family.witness_kind != WitnessKind::None) {
    out << "# witness_measure " << family.witness_measure.size() << "\n";
    for (double w : family.witness_measure) out << to_hex(w) << '\n';
  }
}

GradedSparseFamily load_family(std::istream& in) {
  GradedSparseFamily f;
  std::string line;
  if (!std::getline(in, line) || line != "# hso-family v1")
    throw std::runtime_error("family load: bad magic line");
  std::size_t cube_count = 0;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) != 0)
      throw std::runtime_error("family load: expected header line, got '" + line + "'");
    std::istringstream hs(line.substr(2));
    std::string key, value;
    hs >> key >> value;
    if (key == "geometry") {
      f.geometry = (value == "disc") ? FamilyGeometry::CarlesonDisc
                                     : FamilyGeometry::UnitCube;
    } else if (key == "system") {
      f.system = (value == "shifted") ? DyadicSystem::ThirdShifted
                                      : DyadicSystem::Standard;
    } else if (key == "convention") {
      f.convention = (value == "arcsq") ? BoxMeasure::ArcSquared : BoxMeasure::Exact;
    } else if (key == "ambient") {
      f.ambient_dim = std::stoi(value);
    } else if (key == "root_scale") {
      f.root_scale = from_hex(value);
    } else if (key == "witness") {
      f.witness_kind = (value == "residual") ? WitnessKind::Residual
                       : (value == "tent")   ? WitnessKind::UpperTent
                                             : WitnessKind::None;
    } else if (key == "eta") {
      f.eta = from_hex(value);
    } else if (key == "cubes") {
      cube_count = std::stoull(value);
      break;
    } else {
      throw std::runtime_error("family load: unknown header key '" + key + "'");
    }
  }
  f.cubes.reserve(cube_count);
  for (std::size_t i = 0; i < cube_count; ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("family load: truncated cube list");
    std::istringstream ls(line);
    int dim = 0, level = 0;
    if (!(ls >> dim >> level) || dim < 1)
      throw std::runtime_error("family load: bad cube line '" + line + "'");
    DyadicCube q;
    q.level = level;
    q.index.resize(static_cast<std::size_t>(dim));
    for (int d = 0; d < dim; ++d)
      if (!(ls >> q.index[static_cast<std::size_t>(d)]))
        throw std::runtime_error("family load: bad cube line '" + line + "'");
    f.cubes.push_back(std::move(q));
  }
  if (f.witness_kind != WitnessKind::None) {
    if (!std::getline(in, line) || line.rfind("# witness_measure", 0) != 0)
      throw std::runtime_error("family load: missing witness block");
    f.witness_measure.resize(f.cubes.size());
    for (std::size_t i = 0; i < f.cubes.size(); ++i) {
      if (!std::getline(in, line))
        throw std::runtime_error("family load: truncated witness block");
      f.witness_measure[i] = from_hex(line);
    }
  }
  assign_layers(f, nullptr);
  return f;
}

void save_family(const GradedSparseFamily& family, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_family: cannot open " + path);
  save_family(family, out);
}

GradedSparseFamily load_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_family: cannot open " + path);
  return load_family(in);
}

}  // namespace hso
