#include "hso/weights.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hso/dyadic.hpp"
#include "hso/operators.hpp"

namespace hso {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double weight_exponent(double t) {
  // Exponent of 1/omega in both endpoint criteria and in the extremals.
  return (3.0 - 2.0 * t) / (2.0 * t - 2.0);
}

}  // namespace

RadialWeight RadialWeight::power(double gamma) {
  RadialWeight w;
  w.power_ = true;
  w.gamma_ = gamma;
  return w;
}

RadialWeight RadialWeight::tabulated(std::vector<double> r, std::vector<double> w) {
  if (r.size() != w.size() || r.size() < 2)
    throw std::invalid_argument("RadialWeight: need >= 2 (r, w) samples");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i > 0 && !(r[i] > r[i - 1]))
      throw std::invalid_argument("RadialWeight: radii must be strictly increasing");
    if (!(r[i] >= 0.0) || r[i] >= 1.0)
      throw std::invalid_argument("RadialWeight: radii must lie in [0,1)");
    if (!(w[i] >= 0.0))
      throw std::invalid_argument("RadialWeight: weight values must be >= 0");
  }
  RadialWeight out;
  out.power_ = false;
  out.knots_r_ = std::move(r);
  out.knots_w_ = std::move(w);
  // Floor on [0, 1/2): the criteria integrate omega^{-s} there.
  for (double rr = 0.0; rr < 0.5; rr += 1.0 / 64.0)
    if (!(out(rr) > 0.0))
      throw std::invalid_argument("RadialWeight: must be bounded below on [0,1/2)");
  return out;
}

double RadialWeight::operator()(double r) const {
  if (power_) return std::pow(1.0 - r, gamma_);
  if (r <= knots_r_.front()) return knots_w_.front();
  if (r >= knots_r_.back()) return knots_w_.back();
  auto it = std::upper_bound(knots_r_.begin(), knots_r_.end(), r);
  std::size_t hi = static_cast<std::size_t>(it - knots_r_.begin());
  std::size_t lo = hi - 1;
  double s = (r - knots_r_[lo]) / (knots_r_[hi] - knots_r_[lo]);
  return knots_w_[lo] + s * (knots_w_[hi] - knots_w_[lo]);
}

double RadialWeight::gamma() const {
  if (!power_) throw std::logic_error("RadialWeight: not a power weight");
  return gamma_;
}

double RadialWeight::integral_pow(double u_lo, double u_hi, double s) const {
  if (!(u_lo >= 0.0 && u_hi > u_lo && u_hi <= 1.0))
    throw std::invalid_argument("integral_pow: need 0 <= u_lo < u_hi <= 1");
  if (power_) {
    double a = gamma_ * s;  // integrand u^a in u = 1-r
    if (u_lo == 0.0 && a <= -1.0) return kInf;
    if (std::abs(a + 1.0) < 1e-14) return std::log(u_hi / u_lo);
    return (std::pow(u_hi, a + 1.0) - std::pow(u_lo, a + 1.0)) / (a + 1.0);
  }
  auto integrand = [this, s](double u) { return std::pow((*this)(1.0 - u), s); };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, u_lo, u_hi, 12, 1e-12);
}

double RadialWeight::integral_pow_area(double u_lo, double u_hi, double s) const {
  if (!(u_lo >= 0.0 && u_hi > u_lo && u_hi <= 1.0))
    throw std::invalid_argument("integral_pow_area: need 0 <= u_lo < u_hi <= 1");
  if (power_) {
    double a = gamma_ * s;  // integrand u^a 2(1-u)
    if (u_lo == 0.0 && a <= -1.0) return kInf;
    auto mono = [&](double e) {  // int u^e du
      if (std::abs(e + 1.0) < 1e-14) return std::log(u_hi / u_lo);
      return (std::pow(u_hi, e + 1.0) - std::pow(u_lo, e + 1.0)) / (e + 1.0);
    };
    return 2.0 * (mono(a) - mono(a + 1.0));
  }
  auto integrand = [this, s](double u) {
    return std::pow((*this)(1.0 - u), s) * 2.0 * (1.0 - u);
  };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, u_lo, u_hi, 12, 1e-12);
}

Annulus annulus(int k) {
  if (k < 0) throw std::invalid_argument("annulus: k must be >= 0");
  return Annulus{std::ldexp(1.0, -k - 1), std::ldexp(1.0, -k)};
}

double annulus_measure(int k) {
  double h = std::ldexp(1.0, -k - 1);
  return h * (2.0 - 3.0 * h);
}

namespace {

std::vector<double> compute_a(const RadialWeight& w, double t, int k_max) {
  ensure_admissible_disc_t(t);
  if (k_max < 4)
    throw std::invalid_argument("endpoint condition: k_max must be >= 4");
  double s = -weight_exponent(t);
  std::vector<double> a(static_cast<std::size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) {
    Annulus d = annulus(k);
    a[static_cast<std::size_t>(k)] =
        std::exp2(k) * w.integral_pow(d.u_lo, d.u_hi, s);
  }
  return a;
}

// Tail classification shared by both criteria. Ratios over the last half of
// the sequence; a tail is "geometric" when the ratios agree to 1e-6.
struct TailShape {
  bool has_inf = false;
  bool geometric = false;
  double rate = 1.0;       // geometric tails only
  bool nonincreasing = false;
};

TailShape tail_shape(std::span<const double> a) {
  TailShape shape;
  for (double v : a)
    if (std::isinf(v)) shape.has_inf = true;
  if (shape.has_inf || a.size() < 4) return shape;
  std::size_t start = a.size() / 2;
  double rmin = kInf, rmax = 0.0;
  for (std::size_t k = start; k + 1 < a.size(); ++k) {
    if (a[k] <= 0.0) return shape;
    double rho = a[k + 1] / a[k];
    rmin = std::min(rmin, rho);
    rmax = std::max(rmax, rho);
  }
  shape.nonincreasing = rmax <= 1.0 + 1e-9;
  if (rmax - rmin <= 1e-6 * rmax) {
    shape.geometric = true;
    shape.rate = 0.5 * (rmin + rmax);
  }
  return shape;
}

}  // namespace

EndpointReport endpoint_weak_condition(const RadialWeight& w, double t, int k_max) {
  EndpointReport report;
  report.a = compute_a(w, t, k_max);
  report.sup = *std::max_element(report.a.begin(), report.a.end());
  TailShape shape = tail_shape(report.a);
  if (shape.has_inf) {
    report.verdict = Verdict::Unbounded;
    report.sup = kInf;
  } else if (shape.geometric) {
    report.verdict = (shape.rate <= 1.0 + 1e-9) ? Verdict::Bounded : Verdict::Unbounded;
  } else if (shape.nonincreasing) {
    report.verdict = Verdict::Bounded;
  } else {
    report.verdict = Verdict::Inconclusive;
  }
  return report;
}

EndpointReport endpoint_strong_condition(const RadialWeight& w, double t, int k_max) {
  EndpointReport report;
  report.a = compute_a(w, t, k_max);
  report.partial_sums.resize(report.a.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < report.a.size(); ++k) {
    acc += report.a[k];
    report.partial_sums[k] = acc;
  }
  report.sup = *std::max_element(report.a.begin(), report.a.end());
  TailShape shape = tail_shape(report.a);
  if (shape.has_inf) {
    report.verdict = Verdict::Unbounded;
    report.sup = kInf;
  } else if (shape.geometric) {
    report.verdict = (shape.rate < 1.0 - 1e-9) ? Verdict::Bounded : Verdict::Unbounded;
  } else {
    report.verdict = Verdict::Inconclusive;
  }
  return report;
}

double bekolle_bonami(const RadialWeight& w, double l,
                      std::span<const double> h_schedule) {
  if (!(l > 1.0)) throw std::invalid_argument("bekolle_bonami: l must be > 1");
  if (h_schedule.empty())
    throw std::invalid_argument("bekolle_bonami: empty window schedule");
  double best = 0.0;
  for (double h : h_schedule) {
    if (!(h > 0.0 && h < 1.0))
      throw std::invalid_argument("bekolle_bonami: windows must lie in (0,1)");
    double first = w.integral_pow(0.0, h, 1.0) / h;
    double second = w.integral_pow(0.0, h, -1.0 / (l - 1.0)) / h;
    double value = first * std::pow(second, l - 1.0);
    best = std::max(best, value);
  }
  return best;
}

namespace {

void check_annulus_resolution(const PolarGrid& grid, int k) {
  Annulus d = annulus(k);
  int count = 0;
  for (double r : grid.r_nodes) {
    double u = 1.0 - r;
    if (u > d.u_lo && u <= d.u_hi) ++count;
  }
  if (count < 4)
    throw std::invalid_argument("extremal function: annulus " + std::to_string(k) +
                                " holds " + std::to_string(count) +
                                " radial nodes (< 4)");
}

}  // namespace

GridFunction extremal_fk(const RadialWeight& w, double t, int k,
                         std::shared_ptr<const PolarGrid> grid) {
  ensure_admissible_disc_t(t);
  check_annulus_resolution(*grid, k);
  double s = -weight_exponent(t);
  Annulus d = annulus(k);
  return sample_function(std::move(grid), [&w, s, d](double r, double) {
    double u = 1.0 - r;
    if (u > d.u_lo && u <= d.u_hi) return std::pow(w(r), s);
    return 0.0;
  });
}

GridFunction extremal_fN(const RadialWeight& w, double t, int N,
                         std::shared_ptr<const PolarGrid> grid) {
  ensure_admissible_disc_t(t);
  for (int k = 0; k <= N; ++k) check_annulus_resolution(*grid, k);
  double s = -weight_exponent(t);
  return sample_function(std::move(grid), [&w, s, t, N](double r, double) {
    double u = 1.0 - r;
    if (!(u > 0.0)) return 0.0;
    int k = deepest_level_for_distance(u);
    if (k > N) return 0.0;
    return std::exp2(k * (3.0 - 2.0 * t)) * std::pow(w(r), s);
  });
}

ExtremalRatio extremal_ratio(const RadialWeight& w, double t, int N) {
  ensure_admissible_disc_t(t);
  if (N < 0) throw std::invalid_argument("extremal_ratio: N must be >= 0");
  double s = -weight_exponent(t);

  // A_k = int_{D_k} omega^{-(3-2t)/(2t-2)} dA (full annulus, area measure).
  std::vector<double> A(static_cast<std::size_t>(N) + 1);
  for (int k = 0; k <= N; ++k) {
    Annulus d = annulus(k);
    A[static_cast<std::size_t>(k)] = w.integral_pow_area(d.u_lo, d.u_hi, s);
  }

  ExtremalRatio out;
  // ||f_N||: ( sum_k 2^k A_k )^{3-2t}.
  double sum = 0.0;
  for (int k = 0; k <= N; ++k) sum += std::exp2(k) * A[static_cast<std::size_t>(k)];
  out.f_norm = std::pow(sum, 3.0 - 2.0 * t);

  // Box integral at generation j: 2^-j sum_{k>=j} 2^{k(3-2t)} A_k; the
  // maximal function is constant on each annulus with value
  // V_i = max_{j <= min(i,N)} |Q_j|^-t 2^-j B_j.
  std::vector<double> B(static_cast<std::size_t>(N) + 1, 0.0);
  double acc = 0.0;
  for (int k = N; k >= 0; --k) {
    acc += std::exp2(k * (3.0 - 2.0 * t)) * A[static_cast<std::size_t>(k)];
    B[static_cast<std::size_t>(k)] = acc;
  }
  double running_max = 0.0, l1 = 0.0;
  for (int i = 0; i <= N; ++i) {
    double candidate = std::pow(box_area(i), -t) * std::exp2(-i) * B[static_cast<std::size_t>(i)];
    running_max = std::max(running_max, candidate);
    l1 += running_max * annulus_measure(i);
  }
  double tail = std::ldexp(1.0, -N - 1) * (2.0 - std::ldexp(1.0, -N - 1));
  l1 += running_max * tail;
  out.maximal_l1 = l1;
  out.ratio = out.maximal_l1 / out.f_norm;
  return out;
}

}  // namespace hso
