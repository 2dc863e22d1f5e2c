#include "hso/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "hso/weights.hpp"

namespace hso {

namespace {

// Gathers (|value|, weight) pairs sorted by |value| descending.
std::vector<std::pair<double, double>> sorted_levels(
    std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size())
    throw std::invalid_argument("norms: values/weights size mismatch");
  std::vector<std::pair<double, double>> lv(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    lv[i] = {std::abs(values[i]), weights[i]};
  std::sort(lv.begin(), lv.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  return lv;
}

std::vector<double> polar_weights(const PolarGrid& g) {
  std::vector<double> w(g.size());
  for (int i = 0; i < g.n_r(); ++i)
    for (int j = 0; j < g.n_theta; ++j) w[g.node(i, j)] = g.weight(i);
  return w;
}

}  // namespace

double lp_norm(const GridFunction& f, double p, const RadialWeight* weight) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  const PolarGrid& g = *f.grid;
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
  }
  double total = 0.0;
  for (int i = 0; i < g.n_r(); ++i) {
    double scale = g.weight(i);
    if (weight) scale *= (*weight)(g.r_nodes[static_cast<std::size_t>(i)]);
    double ring = 0.0;
    for (int j = 0; j < g.n_theta; ++j)
      ring += std::pow(std::abs(f.values[g.node(i, j)]), p);
    total += ring * scale;
  }
  return std::pow(total, 1.0 / p);
}

double lp_norm(const CubeGridFunction& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
  }
  double total = 0.0;
  for (double v : f.values) total += std::pow(std::abs(v), p);
  return std::pow(total * f.grid->cell_weight(), 1.0 / p);
}

double weak_norm(std::span<const double> values, std::span<const double> weights,
                 double q) {
  if (!(q >= 1.0) || std::isinf(q))
    throw std::invalid_argument("weak_norm: q must lie in [1, inf)");
  auto lv = sorted_levels(values, weights);
  double cum = 0.0, best = 0.0;
  for (const auto& [v, w] : lv) {
    cum += w;
    if (v == 0.0) break;
    best = std::max(best, v * std::pow(cum, 1.0 / q));
  }
  return best;
}

double weak_norm(const GridFunction& f, double q) {
  return weak_norm(f.values, polar_weights(*f.grid), q);
}

double weak_norm(const CubeGridFunction& f, double q) {
  std::vector<double> w(f.values.size(), f.grid->cell_weight());
  return weak_norm(f.values, w, q);
}

double lorentz_p1_norm(std::span<const double> values,
                       std::span<const double> weights, double p) {
  if (!(p >= 1.0) || std::isinf(p))
    throw std::invalid_argument("lorentz_p1_norm: p must lie in [1, inf)");
  auto lv = sorted_levels(values, weights);
  // p int lambda^(p-1) mu(lambda) dlambda, mu constant between sample values:
  // the interval [v_{k+1}, v_k) contributes (cum weight) (v_k^p - v_{k+1}^p).
  double cum = 0.0, total = 0.0;
  for (std::size_t k = 0; k < lv.size(); ++k) {
    cum += lv[k].second;
    double hi = lv[k].first;
    double lo = (k + 1 < lv.size()) ? lv[k + 1].first : 0.0;
    if (hi > lo) total += cum * (std::pow(hi, p) - std::pow(lo, p));
  }
  return total;
}

double lorentz_p1_norm(const GridFunction& f, double p) {
  return lorentz_p1_norm(f.values, polar_weights(*f.grid), p);
}

namespace {

double corner_over(const GradedSparseFamily& family, std::span<const int> subset,
                   double t, NormCorner corner) {
  if (!(t > 1.0)) throw std::invalid_argument("op_norm_corner: t must be > 1");
  switch (corner) {
    case NormCorner::LinfToL1: {
      double s = 0.0;
      for (int i : subset) s += std::pow(family.measure(i), 2.0 - t);
      return s;
    }
    case NormCorner::L1toL1:
    case NormCorner::LinfToLinf:
    case NormCorner::L1toLinf: {
      // Stack values: for each cube, sum the weights of it and its ancestors
      // within the subset; the sup over points is attained on some cube.
      double expo = (corner == NormCorner::L1toLinf) ? -t : 1.0 - t;
      double best = 0.0;
      for (int i : subset) {
        double stack = 0.0;
        for (int a : subset)
          if (family.contains(a, i)) stack += std::pow(family.measure(a), expo);
        best = std::max(best, stack);
      }
      return best;
    }
  }
  throw std::logic_error("op_norm_corner: unknown corner");
}

}  // namespace

double op_norm_corner(const GradedSparseFamily& family, double t,
                      NormCorner corner) {
  std::vector<int> all(family.cubes.size());
  std::iota(all.begin(), all.end(), 0);
  return corner_over(family, all, t, corner);
}

double op_norm_corner_layer(const GradedSparseFamily& family, int layer,
                            double t, NormCorner corner) {
  if (layer < 0 || layer >= static_cast<int>(family.layers.size()))
    throw std::out_of_range("op_norm_corner_layer: no such layer");
  return corner_over(family, family.layers[static_cast<std::size_t>(layer)], t, corner);
}

double weak_opnorm_from_constant(const GridOperator& op, double q) {
  if (!op.spec.positive())
    throw std::invalid_argument(
        "weak_opnorm_from_constant: needs a positive kind; use the positive "
        "Bergman variant");
  GridFunction one = constant_function(op.grid, 1.0);
  return weak_norm(op.apply(one), q);
}

double restricted_probe(const GridOperator& op, double p, double q,
                        std::span<const std::vector<std::size_t>> sets) {
  if (sets.empty())
    throw std::invalid_argument("restricted_probe: no test sets given");
  const PolarGrid& g = *op.grid;
  std::vector<double> node_weight = polar_weights(g);
  double sup = 0.0;
  for (const auto& set : sets) {
    GridFunction ind = constant_function(op.grid, 0.0);
    double measure = 0.0;
    for (std::size_t node : set) {
      ind.values.at(node) = 1.0;
      measure += node_weight[node];
    }
    if (measure == 0.0) continue;
    double value = weak_norm(op.apply(ind), q) / std::pow(measure, 1.0 / p);
    sup = std::max(sup, value);
  }
  return sup;
}

}  // namespace hso
