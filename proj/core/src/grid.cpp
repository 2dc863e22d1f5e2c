#include "hso/grid.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace hso {

double PolarGrid::total_weight() const {
  return std::accumulate(ring_weight.begin(), ring_weight.end(), 0.0);
}

double PolarGrid::cell_diameter(int i) const {
  double radial;
  if (!r_edges.empty()) {
    radial = r_edges[static_cast<std::size_t>(i) + 1] - r_edges[static_cast<std::size_t>(i)];
  } else {
    int n = n_r();
    double lo = (i > 0) ? r_nodes[static_cast<std::size_t>(i - 1)] : 0.0;
    double hi = (i + 1 < n) ? r_nodes[static_cast<std::size_t>(i + 1)] : r_max;
    radial = 0.5 * (hi - lo);
  }
  double arc = 2.0 * std::numbers::pi * r_nodes[static_cast<std::size_t>(i)] / n_theta;
  return radial + arc;
}

namespace {

std::shared_ptr<const PolarGrid> from_edges(std::vector<double> edges,
                                            int n_theta, double r_max,
                                            RadialLayout layout) {
  auto g = std::make_shared<PolarGrid>();
  g->n_theta = n_theta;
  g->r_max = r_max;
  g->layout = layout;
  std::size_t n = edges.size() - 1;
  g->r_nodes.resize(n);
  g->ring_weight.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    g->r_nodes[i] = 0.5 * (edges[i] + edges[i + 1]);
    // normalized measure of the annulus: r_hi^2 - r_lo^2
    g->ring_weight[i] = (edges[i + 1] - edges[i]) * (edges[i + 1] + edges[i]);
  }
  g->r_edges = std::move(edges);
  return g;
}

}  // namespace

std::shared_ptr<const PolarGrid> make_polar_grid(int n_r, int n_theta,
                                                 double r_max,
                                                 RadialLayout layout) {
  if (n_r < 1 || n_theta < 1)
    throw std::invalid_argument("make_polar_grid: n_r, n_theta must be >= 1");
  if (!(r_max > 0.0) || r_max >= 1.0)
    throw std::invalid_argument(
        "make_polar_grid: r_max must lie in (0,1); the operators are singular "
        "at the boundary");

  switch (layout) {
    case RadialLayout::Uniform: {
      std::vector<double> edges(static_cast<std::size_t>(n_r) + 1);
      for (int i = 0; i <= n_r; ++i)
        edges[static_cast<std::size_t>(i)] = r_max * i / n_r;
      return from_edges(std::move(edges), n_theta, r_max, layout);
    }
    case RadialLayout::DyadicAnnuli: {
      // Distribute cells over the annuli covering [0, r_max]; keep at least
      // one cell per annulus and align every dyadic cutoff with an edge.
      int levels = 1;
      while (1.0 - std::ldexp(1.0, -levels) < r_max && levels < 60) ++levels;
      int per = std::max(1, n_r / levels);
      auto g = make_dyadic_polar_grid(levels, per, n_theta);
      return g;
    }
    case RadialLayout::GaussLegendre: {
      gsl_integration_glfixed_table* table =
          gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n_r));
      auto g = std::make_shared<PolarGrid>();
      g->n_theta = n_theta;
      g->r_max = r_max;
      g->layout = layout;
      g->r_nodes.resize(static_cast<std::size_t>(n_r));
      g->ring_weight.resize(static_cast<std::size_t>(n_r));
      for (int i = 0; i < n_r; ++i) {
        double xi, wi;
        gsl_integration_glfixed_point(0.0, r_max, static_cast<std::size_t>(i),
                                      &xi, &wi, table);
        g->r_nodes[static_cast<std::size_t>(i)] = xi;
        g->ring_weight[static_cast<std::size_t>(i)] = 2.0 * xi * wi;
      }
      gsl_integration_glfixed_table_free(table);
      return g;
    }
  }
  throw std::logic_error("make_polar_grid: unknown layout");
}

std::shared_ptr<const PolarGrid> make_dyadic_polar_grid(int levels,
                                                        int cells_per_annulus,
                                                        int n_theta) {
  if (levels < 1 || levels > 60)
    throw std::invalid_argument("make_dyadic_polar_grid: levels must be in [1,60]");
  if (cells_per_annulus < 1 || n_theta < 1)
    throw std::invalid_argument("make_dyadic_polar_grid: counts must be >= 1");
  double r_max = 1.0 - std::ldexp(1.0, -levels);
  std::vector<double> edges;
  edges.reserve(static_cast<std::size_t>(levels) * cells_per_annulus + 1);
  edges.push_back(0.0);
  for (int k = 0; k < levels; ++k) {
    double lo = 1.0 - std::ldexp(1.0, -k);
    double hi = 1.0 - std::ldexp(1.0, -k - 1);
    for (int s = 1; s <= cells_per_annulus; ++s)
      edges.push_back(lo + (hi - lo) * s / cells_per_annulus);
  }
  return from_edges(std::move(edges), n_theta, r_max,
                    RadialLayout::DyadicAnnuli);
}

GridFunction constant_function(std::shared_ptr<const PolarGrid> grid,
                               double value) {
  GridFunction f;
  f.values.assign(grid->size(), value);
  f.grid = std::move(grid);
  return f;
}

GridFunction sample_function(std::shared_ptr<const PolarGrid> grid,
                             const std::function<double(double, double)>& f) {
  GridFunction g;
  g.values.resize(grid->size());
  for (int i = 0; i < grid->n_r(); ++i)
    for (int j = 0; j < grid->n_theta; ++j)
      g.values[grid->node(i, j)] = f(grid->r_nodes[static_cast<std::size_t>(i)],
                                     grid->theta(j));
  g.grid = std::move(grid);
  return g;
}

double integrate(const GridFunction& f) {
  const PolarGrid& g = *f.grid;
  double total = 0.0;
  for (int i = 0; i < g.n_r(); ++i) {
    double ring = 0.0;
    for (int j = 0; j < g.n_theta; ++j) ring += f.values[g.node(i, j)];
    total += ring * g.weight(i);
  }
  return total;
}

std::size_t CubeGrid::size() const {
  std::size_t n = 1;
  for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(cells_per_side);
  return n;
}

double CubeGrid::cell_weight() const {
  return std::pow(static_cast<double>(cells_per_side), -dim);
}

std::shared_ptr<const CubeGrid> make_cube_grid(int dim, int cells_per_side) {
  if (dim < 1 || dim > 6)
    throw std::invalid_argument("make_cube_grid: dim must be in [1,6]");
  if (cells_per_side < 1)
    throw std::invalid_argument("make_cube_grid: cells_per_side must be >= 1");
  double count = std::pow(static_cast<double>(cells_per_side), dim);
  if (count > (1u << 26))
    throw std::invalid_argument("make_cube_grid: grid too large");
  auto g = std::make_shared<CubeGrid>();
  g->dim = dim;
  g->cells_per_side = cells_per_side;
  return g;
}

CubeGridFunction constant_function(std::shared_ptr<const CubeGrid> grid,
                                   double value) {
  CubeGridFunction f;
  f.values.assign(grid->size(), value);
  f.grid = std::move(grid);
  return f;
}

double integrate(const CubeGridFunction& f) {
  double s = std::accumulate(f.values.begin(), f.values.end(), 0.0);
  return s * f.grid->cell_weight();
}

}  // namespace hso
