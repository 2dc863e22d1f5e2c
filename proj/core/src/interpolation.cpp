#include "hso/interpolation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hso {

double admissible_t_upper(int n, double eta, double K) {
  if (n < 1 || !(eta > 0.0 && eta < 1.0) || !(K >= 1.0))
    throw std::invalid_argument(
        "admissible_t_upper: need n >= 1, eta in (0,1), K >= 1");
  return 1.0 - std::log2(1.0 - eta) / (n * K);
}

double critical_slope(int n, double t, double eta, double K) {
  double upper = admissible_t_upper(n, eta, K);
  if (!(t > 1.0 && t < upper))
    throw std::invalid_argument(
        "critical_slope: t must satisfy 1 < t < 1 - log2(1-eta)/(nK) = " +
        std::to_string(upper));
  return n * K * (t - 1.0) / (-std::log2(1.0 - eta));
}

BoundClass classify(ExponentPoint point, double sigma, OperatorFamilyKind kind) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("classify: sigma must be > 0");
  const double line_tol = 1e-9;
  double gap = point.iq - point.ip - sigma;
  if (gap > line_tol) return BoundClass::Strong;
  if (gap < -line_tol) return BoundClass::Unbounded;
  // On the critical line. Strong type fails there; the best proven bound is
  // weak type, except at iq = 1 where singular kinds are only restricted.
  if (kind == OperatorFamilyKind::Singular && std::abs(point.iq - 1.0) <= line_tol)
    return BoundClass::RestrictedEndpoint;
  return BoundClass::WeakLine;
}

BourgainResult bourgain_combine(double beta1, double M1, double p1, double q1,
                                double beta2, double M2, double p2, double q2) {
  if (!(beta1 > 0.0) || !(beta2 > 0.0))
    throw std::invalid_argument("bourgain_combine: rates beta must be > 0");
  if (!(M1 > 0.0) || !(M2 > 0.0))
    throw std::invalid_argument("bourgain_combine: norms M must be > 0");
  auto inv = [](double p) {
    if (std::isinf(p)) return 0.0;
    if (!(p >= 1.0))
      throw std::invalid_argument("bourgain_combine: exponents must be >= 1");
    return 1.0 / p;
  };
  BourgainResult r;
  r.theta = beta2 / (beta1 + beta2);
  r.point.ip = r.theta * inv(p1) + (1.0 - r.theta) * inv(p2);
  r.point.iq = r.theta * inv(q1) + (1.0 - r.theta) * inv(q2);
  r.constant = std::pow(M1, r.theta) * std::pow(M2, 1.0 - r.theta);
  return r;
}

LayerFit fit_layer_exponent(const LayerNormSeries& series) {
  std::size_t n = series.layer.size();
  if (n != series.value.size() || n < 3)
    throw std::invalid_argument("fit_layer_exponent: need >= 3 aligned samples");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(series.value[i] > 0.0))
      throw std::invalid_argument("fit_layer_exponent: values must be > 0");
    double x = series.layer[i];
    double y = std::log2(series.value[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = n * sxx - sx * sx;
  LayerFit fit;
  if (denom == 0.0) {
    fit.slope = 0.0;
    fit.intercept = sy / static_cast<double>(n);
  } else {
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / static_cast<double>(n);
  }
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double resid = std::log2(series.value[i]) - (fit.intercept + fit.slope * series.layer[i]);
    rss += resid * resid;
  }
  fit.residual = std::sqrt(rss / static_cast<double>(n));
  return fit;
}

std::pair<ExponentPoint, ExponentPoint> region_endpoints(double sigma) {
  return {ExponentPoint{0.0, sigma}, ExponentPoint{1.0 - sigma, 1.0}};
}

std::vector<std::pair<ExponentPoint, BoundClass>> region_samples(
    double sigma, OperatorFamilyKind kind, int resolution) {
  if (resolution < 2)
    throw std::invalid_argument("region_samples: resolution must be >= 2");
  std::vector<std::pair<ExponentPoint, BoundClass>> samples;
  samples.reserve(static_cast<std::size_t>(resolution) * resolution + 2);
  for (int a = 0; a < resolution; ++a)
    for (int b = 0; b < resolution; ++b) {
      ExponentPoint p{static_cast<double>(a) / (resolution - 1),
                      static_cast<double>(b) / (resolution - 1)};
      samples.emplace_back(p, classify(p, sigma, kind));
    }
  auto [lineEnd, restrictedEnd] = region_endpoints(sigma);
  for (ExponentPoint p : {lineEnd, restrictedEnd}) {
    if (p.ip < 0.0 || p.ip > 1.0 || p.iq < 0.0 || p.iq > 1.0) continue;
    bool present = false;
    for (const auto& s : samples)
      if (s.first == p) {
        present = true;
        break;
      }
    if (!present) samples.emplace_back(p, classify(p, sigma, kind));
  }
  return samples;
}

}  // namespace hso
