#include "hso/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "detail/parallel.hpp"

namespace hso {

void ensure_admissible_disc_t(double t) {
  if (!(t > 1.0 && t < 1.5))
    throw std::invalid_argument(
        "hypersingular index t must satisfy 1 < t < 3/2 (M_t 1 is integrable "
        "iff t < 3/2)");
}

void ensure_admissible_sparse_t(double t, int n, double eta, double K) {
  if (!(t > 1.0))
    throw std::invalid_argument("hypersingular index t must satisfy t > 1");
  if (!(eta > 0.0 && eta < 1.0) || n < 1 || !(K >= 1.0))
    throw std::invalid_argument("sparse admissibility needs eta in (0,1), n >= 1, K >= 1");
  double upper = 1.0 - std::log2(1.0 - eta) / (n * K);
  if (!(t < upper))
    throw std::invalid_argument(
        "hypersingular index t must satisfy t < 1 - log2(1-eta)/(n K) = " +
        std::to_string(upper));
}

namespace {

// Arc index of the level-k arc containing each angular column.
std::vector<std::vector<std::int64_t>> column_chains(const PolarGrid& grid,
                                                     DyadicSystem system,
                                                     int max_level) {
  std::vector<std::vector<std::int64_t>> cols(static_cast<std::size_t>(max_level) + 1);
  for (int k = 0; k <= max_level; ++k) {
    cols[static_cast<std::size_t>(k)].resize(static_cast<std::size_t>(grid.n_theta));
    for (int j = 0; j < grid.n_theta; ++j)
      cols[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] =
          arc_containing(grid.theta(j), k, system).index;
  }
  return cols;
}

// Deepest resolvable generation per ring: largest k with r >= 1 - 2^-k.
std::vector<int> ring_depths(const PolarGrid& grid, int max_level) {
  std::vector<int> depth(static_cast<std::size_t>(grid.n_r()));
  for (int i = 0; i < grid.n_r(); ++i) {
    double u = 1.0 - grid.r_nodes[static_cast<std::size_t>(i)];
    depth[static_cast<std::size_t>(i)] = std::min(max_level, deepest_level_for_distance(u));
  }
  return depth;
}

void check_level_range(int max_level) {
  if (max_level < 0 || max_level > 26)
    throw std::invalid_argument("max_level must lie in [0, 26]");
}

}  // namespace

BoxIntegralTable box_integrals(const GridFunction& f, DyadicSystem system,
                               int max_level) {
  check_level_range(max_level);
  const PolarGrid& grid = *f.grid;
  BoxIntegralTable table;
  table.system = system;
  table.max_level = max_level;
  table.per_level.resize(static_cast<std::size_t>(max_level) + 1);
  for (int k = 0; k <= max_level; ++k)
    table.per_level[static_cast<std::size_t>(k)].assign(std::size_t{1} << k, 0.0);

  auto cols = column_chains(grid, system, max_level);
  auto depth = ring_depths(grid, max_level);
  for (int i = 0; i < grid.n_r(); ++i) {
    double w = grid.weight(i);
    for (int j = 0; j < grid.n_theta; ++j) {
      double contrib = w * std::abs(f.values[grid.node(i, j)]);
      for (int k = 0; k <= depth[static_cast<std::size_t>(i)]; ++k)
        table.per_level[static_cast<std::size_t>(k)]
                       [static_cast<std::size_t>(cols[static_cast<std::size_t>(k)]
                                                     [static_cast<std::size_t>(j)])] += contrib;
    }
  }
  return table;
}

void ensure_box_resolution(const PolarGrid& grid, DyadicSystem system,
                           int level, int min_nodes) {
  check_level_range(level);
  double cutoff = 1.0 - std::ldexp(1.0, -level);
  std::int64_t radial = std::count_if(
      grid.r_nodes.begin(), grid.r_nodes.end(),
      [cutoff](double r) { return r >= cutoff; });
  std::vector<std::int64_t> per_arc(std::size_t{1} << level, 0);
  for (int j = 0; j < grid.n_theta; ++j)
    ++per_arc[static_cast<std::size_t>(arc_containing(grid.theta(j), level, system).index)];
  std::int64_t worst = radial * *std::min_element(per_arc.begin(), per_arc.end());
  if (worst < min_nodes)
    throw std::invalid_argument(
        "grid cannot resolve generation " + std::to_string(level) + ": a box holds " +
        std::to_string(worst) + " nodes (< " + std::to_string(min_nodes) + ")");
}

GridFunction apply_maximal(const GridFunction& f, DyadicSystem system, double t,
                           int max_level, BoxMeasure convention) {
  ensure_admissible_disc_t(t);
  const PolarGrid& grid = *f.grid;
  ensure_box_resolution(grid, system, max_level);

  BoxIntegralTable table = box_integrals(f, system, max_level);
  auto cols = column_chains(grid, system, max_level);
  auto depth = ring_depths(grid, max_level);
  std::vector<double> inv_t(static_cast<std::size_t>(max_level) + 1);
  for (int k = 0; k <= max_level; ++k)
    inv_t[static_cast<std::size_t>(k)] = std::pow(box_area(k, convention), -t);

  GridFunction out;
  out.grid = f.grid;
  out.values.assign(grid.size(), 0.0);
  detail::parallel_for(static_cast<std::size_t>(grid.n_r()), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      for (int j = 0; j < grid.n_theta; ++j) {
        double best = 0.0;
        for (int k = 0; k <= depth[i]; ++k) {
          double v = table.per_level[static_cast<std::size_t>(k)]
                                    [static_cast<std::size_t>(cols[static_cast<std::size_t>(k)]
                                                                  [static_cast<std::size_t>(j)])] *
                     inv_t[static_cast<std::size_t>(k)];
          best = std::max(best, v);
        }
        out.values[grid.node(static_cast<int>(i), j)] = best;
      }
    }
  });
  return out;
}

namespace {

GridFunction apply_sparse_disc(const GradedSparseFamily& family, double t,
                               const GridFunction& f,
                               const std::vector<int>* subset) {
  if (family.geometry != FamilyGeometry::CarlesonDisc)
    throw std::invalid_argument("apply_sparse: polar overload needs a Carleson family");
  if (!(t > 1.0)) throw std::invalid_argument("apply_sparse: t must be > 1");
  const PolarGrid& grid = *f.grid;
  GridFunction out;
  out.grid = f.grid;
  out.values.assign(grid.size(), 0.0);
  if (family.cubes.empty() || (subset && subset->empty())) return out;

  int max_level = 0;
  auto consider = [&](int i) {
    max_level = std::max(max_level, family.cubes[static_cast<std::size_t>(i)].level);
  };
  if (subset) {
    for (int i : *subset) consider(i);
  } else {
    for (int i = 0; i < static_cast<int>(family.cubes.size()); ++i) consider(i);
  }
  ensure_box_resolution(grid, family.system, max_level, 1);

  // Membership bitmap and per-level weight |Q|^-t (boxes of one generation
  // share their measure).
  std::vector<std::vector<std::uint8_t>> member(static_cast<std::size_t>(max_level) + 1);
  for (int k = 0; k <= max_level; ++k)
    member[static_cast<std::size_t>(k)].assign(std::size_t{1} << k, 0);
  auto mark = [&](int i) {
    const DyadicCube& q = family.cubes[static_cast<std::size_t>(i)];
    member[static_cast<std::size_t>(q.level)][static_cast<std::size_t>(q.index[0])] = 1;
  };
  if (subset) {
    for (int i : *subset) mark(i);
  } else {
    for (int i = 0; i < static_cast<int>(family.cubes.size()); ++i) mark(i);
  }
  std::vector<double> inv_t(static_cast<std::size_t>(max_level) + 1);
  for (int k = 0; k <= max_level; ++k)
    inv_t[static_cast<std::size_t>(k)] = std::pow(box_area(k, family.convention), -t);

  BoxIntegralTable table = box_integrals(f, family.system, max_level);
  auto cols = column_chains(grid, family.system, max_level);
  auto depth = ring_depths(grid, max_level);
  detail::parallel_for(static_cast<std::size_t>(grid.n_r()), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      for (int j = 0; j < grid.n_theta; ++j) {
        double sum = 0.0;
        for (int k = 0; k <= depth[i]; ++k) {
          auto m = static_cast<std::size_t>(
              cols[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]);
          if (member[static_cast<std::size_t>(k)][m])
            sum += table.per_level[static_cast<std::size_t>(k)][m] *
                   inv_t[static_cast<std::size_t>(k)];
        }
        out.values[grid.node(static_cast<int>(i), j)] = sum;
      }
    }
  });
  return out;
}

// Node index range [lo, hi) of cells whose midpoints fall in dyadic slot
// [c 2^-k, (c+1) 2^-k) on an m-cell axis.
std::pair<std::int64_t, std::int64_t> axis_range(std::int64_t c, int k,
                                                 std::int64_t m) {
  std::int64_t P = std::int64_t{1} << k;
  auto ceil_div = [](std::int64_t a, std::int64_t b) { return (a + b - 1) / b; };
  std::int64_t lo = ceil_div(2 * c * m, P) / 2;              // (2i+1) P >= 2 c m
  std::int64_t hi = (ceil_div(2 * (c + 1) * m, P) - 2) / 2;  // (2i+1) P < 2 (c+1) m
  return {std::max<std::int64_t>(0, lo), std::min(m - 1, hi)};
}

CubeGridFunction apply_sparse_cube(const GradedSparseFamily& family, double t,
                                   const CubeGridFunction& f,
                                   const std::vector<int>* subset) {
  if (family.geometry != FamilyGeometry::UnitCube)
    throw std::invalid_argument("apply_sparse: cube overload needs a cube family");
  if (!(t > 1.0)) throw std::invalid_argument("apply_sparse: t must be > 1");
  const CubeGrid& grid = *f.grid;
  if (!family.cubes.empty() && family.cubes.front().dim() != grid.dim)
    throw std::invalid_argument("apply_sparse: family/grid dimension mismatch");

  CubeGridFunction out;
  out.grid = f.grid;
  out.values.assign(grid.size(), 0.0);

  int dim = grid.dim;
  std::int64_t m = grid.cells_per_side;
  std::vector<std::int64_t> strides(static_cast<std::size_t>(dim));
  std::int64_t s = 1;
  for (int d = 0; d < dim; ++d) {
    strides[static_cast<std::size_t>(d)] = s;
    s *= m;
  }

  auto for_each_node = [&](const DyadicCube& q, auto&& fn) {
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
    ranges.reserve(static_cast<std::size_t>(dim));
    for (int d = 0; d < dim; ++d) {
      auto r = axis_range(q.index[static_cast<std::size_t>(d)], q.level, m);
      if (r.first > r.second) return;
      ranges.push_back(r);
    }
    std::vector<std::int64_t> cur(static_cast<std::size_t>(dim));
    for (int d = 0; d < dim; ++d) cur[static_cast<std::size_t>(d)] = ranges[static_cast<std::size_t>(d)].first;
    while (true) {
      std::int64_t node = 0;
      for (int d = 0; d < dim; ++d) node += cur[static_cast<std::size_t>(d)] * strides[static_cast<std::size_t>(d)];
      fn(static_cast<std::size_t>(node));
      int d = 0;
      for (; d < dim; ++d) {
        if (++cur[static_cast<std::size_t>(d)] <= ranges[static_cast<std::size_t>(d)].second) break;
        cur[static_cast<std::size_t>(d)] = ranges[static_cast<std::size_t>(d)].first;
      }
      if (d == dim) break;
    }
  };

  auto process = [&](int i) {
    const DyadicCube& q = family.cubes[static_cast<std::size_t>(i)];
    double integral = 0.0;
    for_each_node(q, [&](std::size_t node) { integral += std::abs(f.values[node]); });
    integral *= grid.cell_weight();
    double contrib = integral * std::pow(family.measure(i), -t);
    if (contrib == 0.0) return;
    for_each_node(q, [&](std::size_t node) { out.values[node] += contrib; });
  };
  if (subset) {
    for (int i : *subset) process(i);
  } else {
    for (int i = 0; i < static_cast<int>(family.cubes.size()); ++i) process(i);
  }
  return out;
}

}  // namespace

GridFunction apply_sparse(const GradedSparseFamily& family, double t,
                          const GridFunction& f) {
  return apply_sparse_disc(family, t, f, nullptr);
}

GridFunction apply_sparse_layer(const GradedSparseFamily& family, int layer,
                                double t, const GridFunction& f) {
  if (layer < 0 || layer >= static_cast<int>(family.layers.size()))
    throw std::out_of_range("apply_sparse_layer: no such layer");
  return apply_sparse_disc(family, t, f, &family.layers[static_cast<std::size_t>(layer)]);
}

CubeGridFunction apply_sparse(const GradedSparseFamily& family, double t,
                              const CubeGridFunction& f) {
  return apply_sparse_cube(family, t, f, nullptr);
}

CubeGridFunction apply_sparse_layer(const GradedSparseFamily& family, int layer,
                                    double t, const CubeGridFunction& f) {
  if (layer < 0 || layer >= static_cast<int>(family.layers.size()))
    throw std::out_of_range("apply_sparse_layer: no such layer");
  return apply_sparse_cube(family, t, f, &family.layers[static_cast<std::size_t>(layer)]);
}

std::vector<CarlesonBox> level_set_decomposition(const GridFunction& f,
                                                 DyadicSystem system, double t,
                                                 double alpha, int max_level,
                                                 BoxMeasure convention) {
  ensure_admissible_disc_t(t);
  if (!(alpha > 0.0))
    throw std::invalid_argument("level_set_decomposition: alpha must be > 0");
  BoxIntegralTable table = box_integrals(f, system, max_level);
  std::vector<double> inv_t(static_cast<std::size_t>(max_level) + 1);
  for (int k = 0; k <= max_level; ++k)
    inv_t[static_cast<std::size_t>(k)] = std::pow(box_area(k, convention), -t);

  std::vector<CarlesonBox> selected;
  std::vector<DyadicArc> stack{DyadicArc{0, 0, system}};
  while (!stack.empty()) {
    DyadicArc arc = stack.back();
    stack.pop_back();
    double value = table.per_level[static_cast<std::size_t>(arc.level)]
                                  [static_cast<std::size_t>(arc.index)] *
                   inv_t[static_cast<std::size_t>(arc.level)];
    if (value > alpha) {
      selected.push_back(carleson_box(arc, convention));
      continue;  // maximal: do not descend
    }
    if (arc.level < max_level) {
      stack.push_back(arc.child(0));
      stack.push_back(arc.child(1));
    }
  }
  return selected;
}

DominationResult sparse_domination_check(double t, const GridFunction& f,
                                         int depth) {
  auto results = sparse_domination_check_batch(t, std::span(&f, 1), depth);
  return results.front();
}

std::vector<DominationResult> sparse_domination_check_batch(
    double t, std::span<const GridFunction> fs, int depth) {
  ensure_admissible_disc_t(t);
  if (fs.empty()) return {};
  for (const GridFunction& f : fs)
    for (double v : f.values)
      if (v < 0.0)
        throw std::invalid_argument("sparse_domination_check: f must be nonnegative");

  GradedSparseFamily standard =
      family_carleson(depth, DyadicSystem::Standard, BoxMeasure::Exact);
  GradedSparseFamily shifted =
      family_carleson(depth, DyadicSystem::ThirdShifted, BoxMeasure::Exact);

  std::vector<GridFunction> numerators = apply_bergman_positive_batch(t, fs);
  std::vector<DominationResult> results(fs.size());
  for (std::size_t n = 0; n < fs.size(); ++n) {
    GridFunction denomA = apply_sparse(standard, t, fs[n]);
    GridFunction denomB = apply_sparse(shifted, t, fs[n]);
    DominationResult r;
    for (std::size_t node = 0; node < numerators[n].values.size(); ++node) {
      double den = denomA.values[node] + denomB.values[node];
      double ratio = (den == 0.0) ? 0.0 : numerators[n].values[node] / den;
      if (ratio > r.sup_ratio) {
        r.sup_ratio = ratio;
        r.argmax_node = node;
      }
    }
    results[n] = r;
  }
  return results;
}

GridOperator make_maximal_operator(std::shared_ptr<const PolarGrid> grid,
                                   DyadicSystem system, double t, int max_level,
                                   BoxMeasure convention) {
  ensure_admissible_disc_t(t);
  ensure_box_resolution(*grid, system, max_level);
  GridOperator op;
  op.spec = OperatorSpec{OperatorKind::Maximal, t};
  op.grid = grid;
  op.apply = [system, t, max_level, convention](const GridFunction& f) {
    return apply_maximal(f, system, t, max_level, convention);
  };
  return op;
}

GridOperator make_sparse_operator(std::shared_ptr<const PolarGrid> grid,
                                  const GradedSparseFamily& family, double t) {
  if (family.eta > 0.0 && family.layers.size() >= 2)
    ensure_admissible_sparse_t(t, family.ambient_dim, family.eta, degree(family));
  else if (!(t > 1.0))
    throw std::invalid_argument("make_sparse_operator: t must be > 1");
  GridOperator op;
  op.spec = OperatorSpec{OperatorKind::Sparse, t};
  op.grid = std::move(grid);
  op.apply = [family, t](const GridFunction& f) { return apply_sparse(family, t, f); };
  return op;
}

GridOperator make_bergman_positive_operator(std::shared_ptr<const PolarGrid> grid,
                                            double t) {
  ensure_admissible_disc_t(t);
  GridOperator op;
  op.spec = OperatorSpec{OperatorKind::BergmanPositive, t};
  op.grid = std::move(grid);
  op.apply = [t](const GridFunction& f) { return apply_bergman_positive(t, f); };
  return op;
}

GridOperator make_bergman_operator(std::shared_ptr<const PolarGrid> grid,
                                   double t) {
  ensure_admissible_disc_t(t);
  GridOperator op;
  op.spec = OperatorSpec{OperatorKind::Bergman, t};
  op.grid = std::move(grid);
  op.apply = [t](const GridFunction& f) {
    ComplexGridFunction k = apply_bergman(t, f);
    GridFunction out;
    out.grid = k.grid;
    out.values.resize(k.values.size());
    for (std::size_t i = 0; i < k.values.size(); ++i)
      out.values[i] = std::abs(k.values[i]);
    return out;
  };
  return op;
}

std::function<double(double, double)> random_test_function(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  struct Mode {
    double amp, power, freq, phase;
  };
  std::vector<Mode> modes(6);
  for (Mode& m : modes) {
    m.amp = unit(rng);
    m.power = std::floor(unit(rng) * 5.0);
    m.freq = 1.0 + std::floor(unit(rng) * 8.0);
    m.phase = unit(rng);
  }
  double floor_level = 0.25 * unit(rng);
  return [modes, floor_level](double r, double u) {
    double v = floor_level;
    for (const Mode& m : modes)
      v += m.amp * std::pow(r, m.power) *
           0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * (m.freq * u + m.phase)));
    return v;
  };
}

}  // namespace hso
