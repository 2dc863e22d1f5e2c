#pragma once

#include <memory>
#include <span>
#include <vector>

#include "hso/grid.hpp"

namespace hso {

/// Radial weight w(|z|) on the disc: either the power weight (1-r)^gamma in
/// closed form, or tabulated samples interpolated piecewise-linearly.
/// Weights must stay bounded away from 0 on [0, 1/2); only the behavior near
/// the boundary is structurally interesting.
class RadialWeight {
 public:
  static RadialWeight power(double gamma);
  static RadialWeight tabulated(std::vector<double> r, std::vector<double> w);

  double operator()(double r) const;
  bool is_power() const { return power_; }
  double gamma() const;

  /// int omega(r)^s dr over { r : 1-r in [u_lo, u_hi] }; +inf when the
  /// integral diverges at the boundary (u_lo = 0).
  double integral_pow(double u_lo, double u_hi, double s) const;
  /// Same against the normalized area measure over the full angle:
  /// int omega^s 2(1-u) du.
  double integral_pow_area(double u_lo, double u_hi, double s) const;

 private:
  RadialWeight() = default;
  bool power_ = true;
  double gamma_ = 0.0;
  std::vector<double> knots_r_, knots_w_;
};

/// Boundary annuli D_k = { 1-2^-k <= |z| < 1-2^-(k-1)... } indexed per the
/// distance-to-boundary coordinate u = 1-|z| in (2^-(k+1), 2^-k].
struct Annulus {
  double u_lo, u_hi;
};
Annulus annulus(int k);
/// Exact normalized measure |D_k| = 2^-(k+1) (2 - 3 2^-(k+1)).
double annulus_measure(int k);

enum class Verdict { Bounded, Unbounded, Inconclusive };

struct EndpointReport {
  std::vector<double> a;             // a_k = 2^k int_{D_k} omega^{-(3-2t)/(2t-2)} dr
  std::vector<double> partial_sums;
  double sup = 0.0;
  Verdict verdict = Verdict::Inconclusive;
};

/// Weak endpoint criterion: M_t is L^{1/(3-2t)}(w) -> L^{1,inf} bounded iff
/// sup_k a_k < inf. The verdict applies a documented tail test: geometric
/// tails decide by their ratio, non-increasing tails are Bounded, anything
/// else is Inconclusive (numerics cannot certify divergence).
EndpointReport endpoint_weak_condition(const RadialWeight& w, double t, int k_max);

/// Strong endpoint criterion: under the Bekolle-Bonami hypothesis, bounded
/// into L^1 iff sum_k a_k < inf. Geometric tails with ratio < 1 are Bounded,
/// ratio >= 1 (including flat) Unbounded, non-geometric tails Inconclusive.
EndpointReport endpoint_strong_condition(const RadialWeight& w, double t, int k_max);

/// Radial Bekolle-Bonami constant estimate:
/// max over h in the schedule of
///   (h^-1 int_{1-h}^1 w)(h^-1 int_{1-h}^1 w^{-1/(l-1)})^{l-1}.
/// +inf when a window integral diverges. For power weights the windows are
/// h-independent and finite exactly when -1 < gamma < l-1.
double bekolle_bonami(const RadialWeight& w, double l,
                      std::span<const double> h_schedule);

/// The endpoint extremal functions sampled on a grid:
///   f_k = w^{-(3-2t)/(2t-2)} 1_{D_k}
///   f_N = sum_{k<=N} 2^{k(3-2t)} w^{-(3-2t)/(2t-2)} 1_{D_k}
/// Throws when an annulus involved holds fewer than 4 radial nodes.
GridFunction extremal_fk(const RadialWeight& w, double t, int k,
                         std::shared_ptr<const PolarGrid> grid);
GridFunction extremal_fN(const RadialWeight& w, double t, int N,
                         std::shared_ptr<const PolarGrid> grid);

struct ExtremalRatio {
  double maximal_l1 = 0.0;  // ||M_t f_N||_1
  double f_norm = 0.0;      // ||f_N||_{L^{1/(3-2t)}(w)}
  double ratio = 0.0;
};

/// ||M_t f_N||_1 / ||f_N||_{L^{1/(3-2t)}(w)} evaluated exactly: f_N is a
/// radial step function over dyadic annuli, so every box integral, the
/// maximal function (a step function over the same annuli) and both norms
/// reduce to closed annulus integrals. No grid: valid to N = 64 and beyond.
ExtremalRatio extremal_ratio(const RadialWeight& w, double t, int N);

}  // namespace hso
