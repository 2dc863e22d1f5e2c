#include "hso/dyadic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hso {

namespace {

// Offset of the ambient system at generation k, in units of the arc length.
double shift_offset(DyadicSystem system, int level) {
  if (system == DyadicSystem::Standard) return 0.0;
  return (level % 2 == 0) ? 1.0 / 3.0 : -1.0 / 3.0;
}

double wrap_unit(double x) {
  double y = x - std::floor(x);
  if (y >= 1.0) y -= 1.0;  // guard against x == -eps rounding to 1.0
  return y;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

double DyadicArc::length() const { return std::ldexp(1.0, -level); }

double DyadicArc::lower() const {
  return wrap_unit((static_cast<double>(index) + shift_offset(system, level)) *
                   length());
}

bool DyadicArc::contains(double theta) const {
  if (level == 0) return true;
  double d = wrap_unit(theta - lower());
  return d < length();
}

DyadicArc DyadicArc::parent() const {
  if (level == 0) throw std::logic_error("DyadicArc: root has no parent");
  int k = level - 1;  // parent generation
  std::int64_t e = 0;
  if (system == DyadicSystem::ThirdShifted) e = (k % 2 == 0) ? 1 : -1;
  // Children of (k, m) are (k+1, 2m + e) and (k+1, 2m + e + 1), mod 2^(k+1).
  std::int64_t cells = std::int64_t{1} << k;
  std::int64_t m = floor_mod(index - e, 2 * cells);
  return DyadicArc{k, (m >> 1) % cells, system};
}

DyadicArc DyadicArc::child(int which) const {
  if (which != 0 && which != 1)
    throw std::invalid_argument("DyadicArc::child: which must be 0 or 1");
  std::int64_t e = 0;
  if (system == DyadicSystem::ThirdShifted) e = (level % 2 == 0) ? 1 : -1;
  std::int64_t cells = std::int64_t{1} << (level + 1);
  return DyadicArc{level + 1, floor_mod(2 * index + e + which, cells), system};
}

DyadicArc arc_containing(double theta, int level, DyadicSystem system) {
  if (level < 0) throw std::invalid_argument("arc_containing: level < 0");
  if (level == 0) return DyadicArc{0, 0, system};
  double t = wrap_unit(theta);
  std::int64_t cells = std::int64_t{1} << level;
  double x = t * static_cast<double>(cells) - shift_offset(system, level);
  auto m = static_cast<std::int64_t>(std::floor(x));
  m = floor_mod(m, cells);
  DyadicArc arc{level, m, system};
  // Rounding at an arc boundary can land one cell off; fix by neighbor check.
  if (!arc.contains(t)) {
    for (std::int64_t d : {std::int64_t{-1}, std::int64_t{1}}) {
      DyadicArc n{level, floor_mod(m + d, cells), system};
      if (n.contains(t)) return n;
    }
    throw std::logic_error("arc_containing: membership repair failed");
  }
  return arc;
}

std::vector<DyadicArc> arcs_containing(double theta, int max_level,
                                       DyadicSystem system) {
  if (max_level < 0) throw std::invalid_argument("arcs_containing: max_level < 0");
  std::vector<DyadicArc> chain;
  chain.reserve(static_cast<std::size_t>(max_level) + 1);
  for (int k = 0; k <= max_level; ++k)
    chain.push_back(arc_containing(theta, k, system));
  return chain;
}

double box_area(int level, BoxMeasure convention) {
  double l = std::ldexp(1.0, -level);
  if (convention == BoxMeasure::ArcSquared) return l * l;
  return l * l * (2.0 - l);
}

double tent_area(int level, BoxMeasure convention) {
  double l = std::ldexp(1.0, -level);
  if (convention == BoxMeasure::ArcSquared) return 0.5 * l * l;
  return l * l * (1.0 - 0.75 * l);
}

CarlesonBox carleson_box(const DyadicArc& arc, BoxMeasure convention) {
  return CarlesonBox{arc, box_area(arc.level, convention),
                     tent_area(arc.level, convention)};
}

bool box_membership(std::complex<double> z, const CarlesonBox& box) {
  double r = std::abs(z);
  if (r >= 1.0) return false;
  if (r < 1.0 - box.arc.length()) return false;
  return box.arc.contains(torus_coordinate(z));
}

double torus_coordinate(std::complex<double> z) {
  if (z == 0.0) return 0.0;
  return wrap_unit(std::arg(z) / (2.0 * std::numbers::pi));
}

int deepest_level_for_distance(double u) {
  if (!(u > 0.0) || u > 1.0)
    throw std::invalid_argument("deepest_level_for_distance: u must be in (0,1]");
  int e = std::ilogb(u);  // u in [2^e, 2^(e+1))
  return (u == std::ldexp(1.0, e)) ? -e : -e - 1;
}

CarlesonBox find_common_box(std::complex<double> z, std::complex<double> w,
                            BoxMeasure convention) {
  double rz = std::abs(z), rw = std::abs(w);
  if (rz >= 1.0 || rw >= 1.0)
    throw std::invalid_argument("find_common_box: points must lie in the open disc");
  double tz = torus_coordinate(z), tw = torus_coordinate(w);
  double rmin = std::min(rz, rw);
  int radial_cap = (rmin < 1e-300) ? 0 : deepest_level_for_distance(1.0 - rmin);

  DyadicArc best{0, 0, DyadicSystem::Standard};
  for (DyadicSystem system :
       {DyadicSystem::Standard, DyadicSystem::ThirdShifted}) {
    if (radial_cap == 0) break;
    for (int k = 1; k <= radial_cap; ++k) {
      DyadicArc arc = arc_containing(tz, k, system);
      if (!arc.contains(tw)) break;  // deeper arcs are subsets
      if (k > best.level) best = arc;
    }
  }
  return carleson_box(best, convention);
}

}  // namespace hso
