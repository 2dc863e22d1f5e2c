#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hso/dyadic.hpp"
#include "hso/grid.hpp"
#include "hso/sparse_family.hpp"

namespace hso {

enum class OperatorKind { Maximal, Sparse, SparseLayer, Bergman, BergmanPositive };

/// Admissibility of the hypersingular index.
/// Maximal/Bergman kinds on the disc: 1 < t < 3/2 (M_t 1 is integrable iff
/// t < 3/2). Sparse kinds: 1 < t < 1 - log2(1-eta)/(n K).
void ensure_admissible_disc_t(double t);
void ensure_admissible_sparse_t(double t, int n, double eta, double K);

struct OperatorSpec {
  OperatorKind kind = OperatorKind::Maximal;
  double t = 1.25;
  int layer = -1;  // SparseLayer only

  bool positive() const { return kind != OperatorKind::Bergman; }
};

/// Quadrature integrals of |f| over every dyadic Carleson box up to
/// max_level: table[k][m] = sum of node weights of Q_{k,m} against |f|.
struct BoxIntegralTable {
  DyadicSystem system = DyadicSystem::Standard;
  int max_level = 0;
  std::vector<std::vector<double>> per_level;
};

BoxIntegralTable box_integrals(const GridFunction& f, DyadicSystem system,
                               int max_level);

/// Throws when some box of generation `level` holds fewer than `min_nodes`
/// grid nodes, i.e. the grid cannot resolve that generation.
void ensure_box_resolution(const PolarGrid& grid, DyadicSystem system,
                           int level, int min_nodes = 4);

/// Dyadic hypersingular maximal operator: at each node z the sup over boxes
/// Q containing z, up to generation max_level, of |Q|^-t int_Q |f| dA. The
/// sup is truncated at max_level (callers record this with their outputs);
/// the grid must resolve generation max_level.
GridFunction apply_maximal(const GridFunction& f, DyadicSystem system, double t,
                           int max_level,
                           BoxMeasure convention = BoxMeasure::Exact);

/// Hypersingular sparse operator over a Carleson-box family on the disc.
GridFunction apply_sparse(const GradedSparseFamily& family, double t,
                          const GridFunction& f);
GridFunction apply_sparse_layer(const GradedSparseFamily& family, int layer,
                                double t, const GridFunction& f);

/// Hypersingular sparse operator over a cube family in [0,1]^n.
CubeGridFunction apply_sparse(const GradedSparseFamily& family, double t,
                              const CubeGridFunction& f);
CubeGridFunction apply_sparse_layer(const GradedSparseFamily& family, int layer,
                                    double t, const CubeGridFunction& f);

/// K_2t f(z) = int f(w) (1 - z conj w)^-2t dA(w), principal branch, and the
/// positive variant with kernel |1 - z conj w|^-2t. Evaluated at every grid
/// node by ring convolution (exactly the per-node quadrature sum).
ComplexGridFunction apply_bergman(double t, const GridFunction& f);
GridFunction apply_bergman_positive(double t, const GridFunction& f);

/// Applies K_2t^+ to many functions on one grid, reusing the kernel rings.
std::vector<GridFunction> apply_bergman_positive_batch(
    double t, std::span<const GridFunction> fs);

/// Fraction of the quadrature value of K_2t^+ 1 contributed by near-diagonal
/// nodes (|1 - z conj w| < 4 * cell diameter), at the worst probed node.
/// Returns a warning string when that fraction exceeds 10%.
std::optional<std::string> bergman_resolution_warning(double t,
                                                      const PolarGrid& grid);

struct DominationResult {
  double sup_ratio = 0.0;
  std::size_t argmax_node = 0;
};

/// sup over grid nodes of K_2t^+ f / (A_D^t f + A_D~^t f), the two sparse
/// operators running over all boxes of the standard and 1/3-shifted systems
/// up to `depth`. f must be nonnegative.
DominationResult sparse_domination_check(double t, const GridFunction& f,
                                         int depth);
std::vector<DominationResult> sparse_domination_check_batch(
    double t, std::span<const GridFunction> fs, int depth);

/// Maximal dyadic boxes with |Q|^-t int_Q f dA > alpha, generations
/// 0..max_level. Boxes are pairwise disjoint, every strictly larger box
/// fails the threshold, and the union of the boxes equals the level set
/// { apply_maximal(f) > alpha } node for node.
std::vector<CarlesonBox> level_set_decomposition(const GridFunction& f,
                                                 DyadicSystem system, double t,
                                                 double alpha, int max_level,
                                                 BoxMeasure convention = BoxMeasure::Exact);

/// A positive grid operator bundled with its kind, for the norm probes.
struct GridOperator {
  OperatorSpec spec;
  std::shared_ptr<const PolarGrid> grid;
  std::function<GridFunction(const GridFunction&)> apply;
};

GridOperator make_maximal_operator(std::shared_ptr<const PolarGrid> grid,
                                   DyadicSystem system, double t, int max_level,
                                   BoxMeasure convention = BoxMeasure::Exact);
GridOperator make_sparse_operator(std::shared_ptr<const PolarGrid> grid,
                                  const GradedSparseFamily& family, double t);
GridOperator make_bergman_positive_operator(std::shared_ptr<const PolarGrid> grid,
                                            double t);
/// |K_2t f| as a grid function; kind Bergman (not positive).
GridOperator make_bergman_operator(std::shared_ptr<const PolarGrid> grid,
                                   double t);

/// Deterministic smooth nonnegative test function built from a seed; the
/// same seed yields the same function on every grid, so refinement studies
/// compare like with like.
std::function<double(double, double)> random_test_function(std::uint64_t seed);

}  // namespace hso
