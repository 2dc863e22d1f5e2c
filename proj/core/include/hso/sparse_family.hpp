#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hso/dyadic.hpp"

namespace hso {

/// Dyadic cube in [0,1]^n identified by (level, index vector); side 2^-level,
/// measure 2^(-n level). Two dyadic cubes are nested or disjoint.
struct DyadicCube {
  int level = 0;
  std::vector<std::int64_t> index;  // one entry per dimension, in [0, 2^level)

  int dim() const { return static_cast<int>(index.size()); }
  double side() const;
  double measure() const;
  bool contains(const DyadicCube& other) const;
  bool contains_point(std::span<const double> x) const;

  friend bool operator==(const DyadicCube&, const DyadicCube&) = default;
};

DyadicCube root_cube(int dim);

enum class FamilyGeometry {
  UnitCube,      // cubes in [0,1]^n; measure 2^(-n level)
  CarlesonDisc,  // Carleson boxes over dyadic arcs; measure per BoxMeasure
};

enum class WitnessKind { None, Residual, UpperTent };

/// A finite layered family of dyadic cubes (or Carleson boxes) with its
/// scales, degree data and sparseness witness. Immutable once built.
///
/// Layers come from iterative maximal-cube peeling; the scale of layer j is
/// the smallest side (arc length, for boxes) in the layer, and the degree is
/// the largest log2 drop between consecutive scales.
struct GradedSparseFamily {
  FamilyGeometry geometry = FamilyGeometry::UnitCube;
  int ambient_dim = 1;  // real dimension entering the exponent formulas (disc: 2)
  DyadicSystem system = DyadicSystem::Standard;    // CarlesonDisc only
  BoxMeasure convention = BoxMeasure::Exact;       // CarlesonDisc only
  double root_scale = 1.0;  // affine factor back to the original root cube

  std::vector<DyadicCube> cubes;
  std::vector<std::vector<int>> layers;  // indices into cubes
  std::vector<double> scales;            // side scale of each layer

  WitnessKind witness_kind = WitnessKind::None;
  std::vector<double> witness_measure;  // |E(Q)|, aligned with cubes
  double eta = 0.0;

  std::size_t size() const { return cubes.size(); }
  /// Measure of cube i in the stored normalization.
  double measure(int i) const;
  /// Side scale of cube i (arc length for Carleson boxes).
  double scale_of(int i) const;
  /// Measure of cube i in the original (pre-rescaling) normalization.
  double original_measure(int i) const;
  bool contains(int outer, int inner) const;
  int layer_of(int i) const;
};

/// Peels maximal cubes into layers. The root [0,1]^n is adjoined when absent;
/// cubes must be contained in it. UnitCube geometry.
GradedSparseFamily layer_decomposition(std::vector<DyadicCube> cubes);

/// sup_j log2(scale_j / scale_{j+1}). Throws std::domain_error for a
/// single-layer family (the operator degenerates to rank one).
double degree(const GradedSparseFamily& family);

/// Diagnostic limsup variant of the degree: the largest scale drop over the
/// final `tail` layer gaps only. Not a substitute for degree(); it places no
/// constraint on the initial gaps.
double degree_tail(const GradedSparseFamily& family, int tail);

struct WitnessReport {
  double eta = 0.0;
  bool sparse = false;  // false when some witness set degenerates to measure 0
  WitnessKind kind = WitnessKind::None;
};

/// Constructs the canonical witness and installs it on the family:
///  - UnitCube: E(Q) = Q minus the next-layer cubes inside Q (residual);
///    every deeper cube sits inside a next-layer cube, so the residuals are
///    pairwise disjoint.
///  - CarlesonDisc: E(Q) = the upper tent of Q; tents are pairwise disjoint
///    across the whole system.
/// Returns eta = min |E(Q)|/|Q|; eta = 0 flags the family as not sparse
/// under this witness (e.g. the full dyadic tree, whose residuals vanish).
WitnessReport sparseness_witness(GradedSparseFamily& family);

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Checks the witness data against a claimed sparseness eta: containment
/// |E(Q)| <= |Q|, the ratio |E(Q)| >= eta |Q| per cube, and the packing
/// inequality sum_{Q' subset Q} |E(Q')| <= |Q| implied by disjointness.
ValidationReport validate(const GradedSparseFamily& family, double eta);

/// The two-layer blow-up family: the partition of [0,1) at scale 2^-m plus
/// the root [0,2), rescaled to the unit interval (root_scale = 2). Degree
/// m+1; the canonical witness certifies eta = 1/2.
GradedSparseFamily family_counterexample(int m);

/// All dyadic Carleson boxes of generations 0..depth over one system, as a
/// graded family over the disc. Degree 1. Under the ArcSquared convention the
/// tent witness certifies eta = 1/2 exactly (the exact-measure tent/box ratio
/// varies with the generation and dips to 1/4 at the root).
GradedSparseFamily family_carleson(int depth,
                                   DyadicSystem system = DyadicSystem::Standard,
                                   BoxMeasure convention = BoxMeasure::ArcSquared);

/// [0,1]^dim and all descendants down to `depth`. Graded with degree 1; not
/// sparse (the residual witness vanishes on interior cubes).
GradedSparseFamily family_full_tree(int dim, int depth);

/// Value of the hypersingular sum  sum_{Q
///  containing x} |Q|^(1-t)  at a point
/// of [0,1)^n, i.e. the sparse operator applied to the constant 1, evaluated
/// exactly. Coordinates and measures in the stored normalization.
double sparse_constant_value(const GradedSparseFamily& family, double t,
                             std::span<const double> x);

struct BlowupReport {
  double value_on_partition = 0.0;  // A^t 1 on the partitioned region
  double paper_lower_bound = 0.0;   // 2^{m(t-1)}
  double mass_linf_to_l1 = 0.0;     // sum |Q|^{2-t}, original normalization
};

/// Exact blow-up figures for family_counterexample(m), reported in the
/// original [0,2) normalization.
BlowupReport blowup_report(const GradedSparseFamily& family, double t);

/// Line-based serialization: header lines `# key value`, then one cube per
/// line as `n k i1 ... in`. Doubles are written as hex floats, so the
/// round-trip is bit exact.
void save_family(const GradedSparseFamily& family, std::ostream& out);
GradedSparseFamily load_family(std::istream& in);
void save_family(const GradedSparseFamily& family, const std::string& path);
GradedSparseFamily load_family(const std::string& path);

}  // namespace hso
