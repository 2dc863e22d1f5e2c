#pragma once

#include <string>
#include <utility>
#include <vector>

namespace hso {

/// A point (1/p, 1/q) of the exponent square [0,1]^2; 1/inf = 0.
struct ExponentPoint {
  double ip = 0.0;
  double iq = 0.0;

  friend bool operator==(const ExponentPoint&, const ExponentPoint&) = default;
};

/// Best proven bound at an exponent point. Strong above the critical line,
/// nothing below it; on the line the class depends on the operator kind.
enum class BoundClass { Strong, WeakLine, RestrictedEndpoint, Unbounded };

/// Maximal-type operators carry a weak-type bound along the whole closed
/// critical segment; singular (sparse/Bergman) kinds are only restricted
/// weak type at the iq = 1 endpoint, and weak type elsewhere on the line.
enum class OperatorFamilyKind { Maximal, Singular };

/// Upper end of the admissible t range: 1 - log2(1-eta)/(n K).
double admissible_t_upper(int n, double eta, double K);

/// Critical-line slope sigma = n K (t-1) / (-log2(1-eta)). Throws when t
/// is outside (1, admissible_t_upper).
double critical_slope(int n, double t, double eta, double K);

/// Classification of a point against the critical line iq - ip = sigma.
/// Points within 1e-9 of the line count as on it.
BoundClass classify(ExponentPoint point, double sigma, OperatorFamilyKind kind);

struct BourgainResult {
  double theta = 0.0;
  ExponentPoint point;
  double constant = 0.0;  // M1^theta M2^(1-theta), the bound's shape
};

/// Interpolation of two geometric layer-norm envelopes
///   ||T_j||_{p1->q1} <= M1 2^{beta1 j},  ||T_j||_{p2->q2} <= M2 2^{-beta2 j}
/// into a restricted weak-type point for T = sum T_j:
///   theta = beta2/(beta1+beta2), 1/p = theta/p1 + (1-theta)/p2, same for q.
/// Exponents p, q may be infinite.
BourgainResult bourgain_combine(double beta1, double M1, double p1, double q1,
                                double beta2, double M2, double p2, double q2);

struct LayerNormSeries {
  std::vector<int> layer;
  std::vector<double> value;
  std::string corner_label;
};

struct LayerFit {
  double slope = 0.0;      // log2(value) per layer
  double intercept = 0.0;  // log2(value) at layer 0
  double residual = 0.0;   // rms residual in log2 space
};

/// Least-squares fit of log2(value) against the layer index.
LayerFit fit_layer_exponent(const LayerNormSeries& series);

/// The two labeled endpoints of the critical segment clipped to the square:
/// (0, sigma) and (1-sigma, 1).
std::pair<ExponentPoint, ExponentPoint> region_endpoints(double sigma);

/// Classification over a uniform lattice of [0,1]^2 (resolution points per
/// axis), with the two segment endpoints appended so they appear exactly.
std::vector<std::pair<ExponentPoint, BoundClass>> region_samples(
    double sigma, OperatorFamilyKind kind, int resolution);

}  // namespace hso
