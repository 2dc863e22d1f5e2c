#pragma once

#include <span>
#include <vector>

#include "hso/grid.hpp"
#include "hso/operators.hpp"
#include "hso/sparse_family.hpp"
#include "hso/weights_fwd.hpp"

namespace hso {

/// Lorentz exponents used here: only L^{p,1} and L^{p,inf} enter the theory.
struct LorentzExponent {
  double p = 1.0;
  bool weak = false;  // false: L^{p,1}, true: L^{p,inf}
};

/// Quadrature p-norm, optionally against a radial weight (the weight scales
/// the measure). p = inf gives max |f|.
double lp_norm(const GridFunction& f, double p,
               const RadialWeight* weight = nullptr);
double lp_norm(const CubeGridFunction& f, double p);

/// sup_lambda lambda |{|f| > lambda}|^{1/q}, computed exactly on the discrete
/// measure: the sup is attained at sample values.
double weak_norm(const GridFunction& f, double q);
double weak_norm(const CubeGridFunction& f, double q);
double weak_norm(std::span<const double> values, std::span<const double> weights,
                 double q);

/// The layer-cake functional p int_0^inf lambda^(p-1) |{|f| > lambda}| dlambda,
/// evaluated exactly (piecewise polynomial between sorted sample values). On
/// a discrete measure it coincides with the p-th power of lp_norm; the
/// restricted-weak-type probes below use the indicator characterization
/// instead of this functional.
double lorentz_p1_norm(const GridFunction& f, double p);
double lorentz_p1_norm(std::span<const double> values,
                       std::span<const double> weights, double p);

/// Exact corner operator norms of the positive kernel
/// K(x,y) = sum_Q 1_Q(x) 1_Q(y) |Q|^-t, computed combinatorially:
///   L1->L1   = sup_y sum_{Q contains y} |Q|^{1-t}
///   Linf->L1 = sum_Q |Q|^{2-t}
///   Linf->Linf = L1->L1 (the kernel is symmetric)
///   L1->Linf = sup_x sum_{Q contains x} |Q|^-t
enum class NormCorner { L1toL1, LinfToL1, LinfToLinf, L1toLinf };

double op_norm_corner(const GradedSparseFamily& family, double t, NormCorner corner);
double op_norm_corner_layer(const GradedSparseFamily& family, int layer,
                            double t, NormCorner corner);

/// ||T 1||_{L^{q,inf}}; for a positive operator this equals the operator norm
/// L^inf -> L^{q,inf} since |Tf| <= ||f||_inf T1 pointwise. Rejects the
/// non-positive Bergman kind (use the positive variant).
double weak_opnorm_from_constant(const GridOperator& op, double q);

/// sup over the given test sets E (node index lists) of
/// weak_norm(T 1_E, q) / |E|^{1/p}: a lower bound for the restricted
/// weak-type (p,q) constant.
double restricted_probe(const GridOperator& op, double p, double q,
                        std::span<const std::vector<std::size_t>> sets);

}  // namespace hso
