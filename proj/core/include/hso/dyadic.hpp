#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace hso {

/// The two dyadic systems on the torus T ~ [0,1).
///
/// Standard:     D_k  = { [m/2^k, (m+1)/2^k) }
/// ThirdShifted: D~_k = { [2^-k (m + (-1)^k/3), 2^-k (m+1 + (-1)^k/3)) mod 1 }
///
/// The shifted offsets are nested (each level-k endpoint is a level-(k+1)
/// endpoint) and tile the torus, so D~ is a genuine dyadic system. Together
/// the two grids have the covering property: every arc J is contained in an
/// arc of D or D~ of length at most 6|J|, because the level-k boundary points
/// of the two grids interlace with gaps >= 2^-k/3.
enum class DyadicSystem { Standard, ThirdShifted };

/// Measure convention for Carleson boxes. With arc length l = 2^-k the exact
/// normalized area of Q_I is l^2(2-l); the literature often writes |Q_I| = l^2.
enum class BoxMeasure { Exact, ArcSquared };

struct DyadicArc {
  int level = 0;
  std::int64_t index = 0;
  DyadicSystem system = DyadicSystem::Standard;

  double length() const;
  /// Left endpoint in [0,1).
  double lower() const;
  /// Membership of a torus coordinate (wrapped mod 1).
  bool contains(double theta) const;
  DyadicArc parent() const;
  DyadicArc child(int which) const;  // 0 = left, 1 = right

  friend bool operator==(const DyadicArc&, const DyadicArc&) = default;
};

/// The unique arc of generation `level` containing `theta`.
DyadicArc arc_containing(double theta, int level, DyadicSystem system);

/// Ancestor chain: one arc per generation 0..max_level, nested decreasingly.
std::vector<DyadicArc> arcs_containing(double theta, int max_level,
                                       DyadicSystem system);

/// |Q_I| for an arc of generation `level`. Exact: l^2(2-l), with l = 2^-level.
/// The value is exactly representable in double for level <= 52.
double box_area(int level, BoxMeasure convention = BoxMeasure::Exact);

/// |Q_I^up| for an arc of generation `level`. Exact: l^2(1 - 3l/4).
/// Under ArcSquared the conventional value l^2/2 is used.
double tent_area(int level, BoxMeasure convention = BoxMeasure::Exact);

/// Carleson box over a dyadic arc: { z : z/|z| in I, 1-|I| <= |z| < 1 },
/// with the upper tent reaching only to 1-|I|/2.
struct CarlesonBox {
  DyadicArc arc;
  double area = 1.0;
  double tent = 0.25;
};

CarlesonBox carleson_box(const DyadicArc& arc,
                         BoxMeasure convention = BoxMeasure::Exact);

/// Definitional membership: z/|z| in I and 1-|I| <= |z| < 1.
bool box_membership(std::complex<double> z, const CarlesonBox& box);

/// Smallest-area dyadic box, over either system, containing both z and w.
/// The area satisfies area <= C |1 - z conj(w)|^2 with a modest absolute
/// constant (measured < 16 over random pairs; the level-0 box always works).
CarlesonBox find_common_box(std::complex<double> z, std::complex<double> w,
                            BoxMeasure convention = BoxMeasure::Exact);

/// Torus coordinate of arg(z) in [0,1); 0 for z = 0.
double torus_coordinate(std::complex<double> z);

/// Deepest generation k with 2^-k >= u, for u in (0,1]. This is the depth of
/// the deepest Carleson box containing a point at distance u from the
/// boundary.
int deepest_level_for_distance(double u);

}  // namespace hso
