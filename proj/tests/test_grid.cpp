#include "hso/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"

using namespace hso;

TEST_CASE("single-cell grid carries the full measure r_max^2") {
  auto g = make_polar_grid(1, 1, 0.5);
  REQUIRE(g->size() == 1);
  CHECK(g->weight(0) == 0.25);
  CHECK(g->total_weight() == 0.25);
}

TEST_CASE("weight sum equals r_max^2 for every layout") {
  auto uniform = make_polar_grid(256, 256, 0.999);
  CHECK(uniform->total_weight() == doctest::Approx(0.998001).epsilon(1e-12));

  auto gl = make_polar_grid(64, 16, 0.999, RadialLayout::GaussLegendre);
  CHECK(gl->total_weight() == doctest::Approx(0.999 * 0.999).epsilon(1e-13));

  auto dyadic = make_dyadic_polar_grid(8, 4, 32);
  double rm = dyadic->r_max;
  CHECK(rm == 1.0 - std::exp2(-8));
  CHECK(dyadic->total_weight() == doctest::Approx(rm * rm).epsilon(1e-13));
}

TEST_CASE("make_polar_grid rejects r_max >= 1") {
  CHECK_THROWS_AS(make_polar_grid(8, 8, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_polar_grid(8, 8, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(make_polar_grid(0, 8, 0.5), std::invalid_argument);
}

TEST_CASE("radial oracle: integral of (1-|z|^2)^{-1/2} against closed form") {
  // Closed form: int_0^R (1-r^2)^{-1/2} 2r dr = 2(1 - sqrt(1-R^2)).
  const double r_max = 0.999;
  const double exact = 2.0 * (1.0 - std::sqrt(1.0 - r_max * r_max));
  auto integrand = [](double r, double) {
    return 1.0 / std::sqrt(1.0 - r * r);
  };

  auto g = make_polar_grid(2048, 64, r_max);
  double approx = integrate(sample_function(g, integrand));
  CHECK(std::abs(approx - exact) / exact < 1e-3);

  SUBCASE("refinement halves the error or better") {
    auto coarse = make_polar_grid(512, 64, r_max);
    auto fine = make_polar_grid(1024, 64, r_max);
    double ec = std::abs(integrate(sample_function(coarse, integrand)) - exact);
    double ef = std::abs(integrate(sample_function(fine, integrand)) - exact);
    CHECK(ef <= 0.5 * ec * 1.05);
  }

  SUBCASE("Gauss-Legendre reaches the same value with far fewer nodes") {
    auto gl = make_polar_grid(128, 8, r_max, RadialLayout::GaussLegendre);
    double v = integrate(sample_function(gl, integrand));
    CHECK(std::abs(v - exact) / exact < 1e-3);
  }
}

TEST_CASE("dyadic layout aligns cell edges with annulus boundaries") {
  auto g = make_dyadic_polar_grid(6, 4, 8);
  for (int k = 0; k <= 6; ++k) {
    double cutoff = 1.0 - std::exp2(-k);
    bool found = false;
    for (double e : g->r_edges)
      if (e == cutoff) found = true;
    CHECK(found);
  }
}

TEST_CASE("grid functions: constant and sampled") {
  auto g = make_polar_grid(64, 16, 0.9);
  auto one = constant_function(g, 1.0);
  CHECK(integrate(one) == doctest::Approx(0.81).epsilon(1e-13));

  auto radial = sample_function(g, [](double r, double) { return r; });
  // int r dA = int_0^R 2 r^2 dr = (2/3) R^3; midpoint error is O(h^2).
  CHECK(integrate(radial) == doctest::Approx(2.0 / 3.0 * 0.729).epsilon(1e-4));
}

TEST_CASE("cube grid basics") {
  auto g = make_cube_grid(2, 8);
  CHECK(g->size() == 64);
  CHECK(g->cell_weight() == doctest::Approx(1.0 / 64.0).epsilon(1e-15));
  auto f = constant_function(g, 3.0);
  CHECK(integrate(f) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK_THROWS_AS(make_cube_grid(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_cube_grid(2, 1 << 14), std::invalid_argument);
}
