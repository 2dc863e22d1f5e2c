#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace hso {

/// Radial node placement of a polar quadrature grid.
///  - Uniform:       midpoint rule on equal cells of [0, r_max]
///  - DyadicAnnuli:  equal subdivision of each dyadic annulus
///                   D_k = { 1-2^-k <= r < 1-2^-(k+1) }; cell edges then
///                   coincide with every Carleson-box radial cutoff
///  - GaussLegendre: Gauss-Legendre nodes on [0, r_max]; preferred for
///                   smooth kernel quadrature (Bergman operators)
enum class RadialLayout { Uniform, DyadicAnnuli, GaussLegendre };

/// Tensor-product discretization of the disc |z| <= r_max < 1 carrying the
/// normalized area measure (|disc| = 1, so the grid's total weight is
/// r_max^2). Angular nodes are uniform midpoints in torus coordinates.
struct PolarGrid {
  std::vector<double> r_nodes;
  std::vector<double> ring_weight;  // weight of a full ring, summed over angle
  std::vector<double> r_edges;      // n_r+1 edges; empty for GaussLegendre
  int n_theta = 1;
  double r_max = 0.5;
  RadialLayout layout = RadialLayout::Uniform;

  int n_r() const { return static_cast<int>(r_nodes.size()); }
  std::size_t size() const { return r_nodes.size() * static_cast<std::size_t>(n_theta); }
  std::size_t node(int i, int j) const {
    return static_cast<std::size_t>(i) * n_theta + static_cast<std::size_t>(j);
  }
  /// Torus coordinate of angular column j.
  double theta(int j) const { return (j + 0.5) / n_theta; }
  double weight(int i) const { return ring_weight[static_cast<std::size_t>(i)] / n_theta; }
  double total_weight() const;
  /// Coarse bound on the diameter of cell (i, .): radial extent + arc extent.
  double cell_diameter(int i) const;
};

std::shared_ptr<const PolarGrid> make_polar_grid(
    int n_r, int n_theta, double r_max,
    RadialLayout layout = RadialLayout::Uniform);

/// Dyadic-annuli grid covering levels 0..levels-1 (r_max = 1 - 2^-levels),
/// with `cells_per_annulus` radial cells in each annulus.
std::shared_ptr<const PolarGrid> make_dyadic_polar_grid(int levels,
                                                        int cells_per_annulus,
                                                        int n_theta);

template <class T>
struct BasicGridFunction {
  std::shared_ptr<const PolarGrid> grid;
  std::vector<T> values;

  T& at(int i, int j) { return values[grid->node(i, j)]; }
  const T& at(int i, int j) const { return values[grid->node(i, j)]; }
};

using GridFunction = BasicGridFunction<double>;
using ComplexGridFunction = BasicGridFunction<std::complex<double>>;

GridFunction constant_function(std::shared_ptr<const PolarGrid> grid,
                               double value);
/// Samples f(r, theta) with theta the torus coordinate in [0,1).
GridFunction sample_function(std::shared_ptr<const PolarGrid> grid,
                             const std::function<double(double, double)>& f);

/// Quadrature integral over the grid domain.
double integrate(const GridFunction& f);

/// Uniform tensor grid on [0,1]^dim with m cells per side (midpoint nodes,
/// each of weight m^-dim). Hosts the R^n sparse families.
struct CubeGrid {
  int dim = 1;
  int cells_per_side = 1;

  std::size_t size() const;
  double cell_weight() const;
  /// Coordinate of a node along one axis.
  double coordinate(std::int64_t cell_index) const {
    return (static_cast<double>(cell_index) + 0.5) / cells_per_side;
  }
};

std::shared_ptr<const CubeGrid> make_cube_grid(int dim, int cells_per_side);

struct CubeGridFunction {
  std::shared_ptr<const CubeGrid> grid;
  std::vector<double> values;
};

CubeGridFunction constant_function(std::shared_ptr<const CubeGrid> grid,
                                   double value);
double integrate(const CubeGridFunction& f);

}  // namespace hso
