#include "doctest.h"

#include "geokern/specfun.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

using namespace geokern::specfun;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.7724538509055160273;

// Magnitude sum of the explicit-series terms: the alternating sum can only
// be expected to match the recurrence to roundoff relative to this scale.
double explicit_term_sum(PolyId id, double lambda, int m, double t) {
  if (m == 0) return 1.0;
  double s = 0.0;
  for (int k = 0; 2 * k <= m; ++k) {
    double lg;
    if (id == PolyId::Chebyshev)
      lg = std::lgamma(m - k) - std::lgamma(k + 1.0) -
           std::lgamma(m - 2 * k + 1.0);
    else
      lg = std::lgamma(lambda + m - k) - std::lgamma(lambda) -
           std::lgamma(k + 1.0) - std::lgamma(m - 2 * k + 1.0);
    s += std::exp(lg) * std::pow(std::abs(2.0 * t), m - 2 * k);
  }
  if (id == PolyId::Chebyshev) s *= 0.5 * m;
  return s;
}
}

TEST_CASE("degree-0 and degree-1 polynomials") {
  CHECK(eval_poly(PolyId::Gegenbauer, 1.0, 0, 0.37) == doctest::Approx(1.0));
  CHECK(eval_poly(PolyId::Gegenbauer, 1.0, 1, 0.5) == doctest::Approx(1.0));
  CHECK(eval_poly(PolyId::Chebyshev, 0.0, 2, 0.0) == doctest::Approx(-1.0));
  CHECK(eval_poly(PolyId::Chebyshev, 0.0, 3, std::cos(0.7)) ==
        doctest::Approx(std::cos(2.1)));
}

TEST_CASE("classical closed forms") {
  // C^1_2(t) = 4t^2 - 1, C^{1/2}_3(t) = (5t^3 - 3t)/2 (Legendre).
  CHECK(eval_poly(PolyId::Gegenbauer, 1.0, 2, 0.3) == doctest::Approx(-0.64));
  CHECK(eval_poly(PolyId::Gegenbauer, 0.5, 3, 0.5) ==
        doctest::Approx((5.0 * 0.125 - 1.5) / 2.0));
  // Chebyshev outside [-1,1] still satisfies T_2 = 2t^2 - 1.
  CHECK(eval_poly(PolyId::Chebyshev, 0.0, 2, 1.7) ==
        doctest::Approx(2.0 * 1.7 * 1.7 - 1.0));
}

TEST_CASE("explicit sum agrees with the recurrence") {
  std::vector<double> ts = {-2.0, -1.3, -0.6, 0.0, 0.35, 0.9, 1.7, 2.0};
  for (double lambda : {0.5, 1.0, 2.5}) {
    for (int m = 0; m <= 20; ++m) {
      for (double t : ts) {
        double a = eval_poly(PolyId::Gegenbauer, lambda, m, t);
        double b = eval_poly_explicit(PolyId::Gegenbauer, lambda, m, t);
        CHECK(std::abs(a - b) <=
              1e-10 * std::max(1.0, std::abs(a)) +
                  1e-13 * explicit_term_sum(PolyId::Gegenbauer, lambda, m, t));
      }
    }
  }
  for (int m = 0; m <= 20; ++m)
    for (double t : ts) {
      double a = eval_poly(PolyId::Chebyshev, 0.0, m, t);
      double b = eval_poly_explicit(PolyId::Chebyshev, 0.0, m, t);
      CHECK(std::abs(a - b) <=
            1e-10 * std::max(1.0, std::abs(a)) +
                1e-13 * explicit_term_sum(PolyId::Chebyshev, 0.0, m, t));
    }
}

TEST_CASE("parity in t") {
  for (double lambda : {0.5, 1.5})
    for (int m : {1, 2, 3, 6})
      for (double t : {0.2, 0.77, 1.9}) {
        double plus = eval_poly(PolyId::Gegenbauer, lambda, m, t);
        double minus = eval_poly(PolyId::Gegenbauer, lambda, m, -t);
        CHECK(minus == doctest::Approx((m % 2 ? -1.0 : 1.0) * plus));
      }
}

TEST_CASE("bound on [-1,1] by the endpoint value") {
  // |C^lambda_m(t)| <= C^lambda_m(1) on [-1,1], any parity.
  for (double lambda : {0.5, 1.0, 2.0})
    for (int m : {2, 3, 4, 5}) {
      double c = eval_poly(PolyId::Gegenbauer, lambda, m, 1.0);
      for (int i = -20; i <= 20; ++i) {
        double t = i / 20.0;
        double bound = c + 1e-14;
        CHECK(std::abs(eval_poly(PolyId::Gegenbauer, lambda, m, t)) <= bound);
      }
    }
}

TEST_CASE("lambda validation") {
  CHECK_THROWS_AS(eval_poly(PolyId::Gegenbauer, 0.0, 2, 0.5),
                  std::domain_error);
  CHECK_THROWS_AS(eval_poly(PolyId::Gegenbauer, -0.5, 2, 0.5),
                  std::domain_error);
  CHECK_THROWS_AS(norm_const(0.0, 2), std::domain_error);
  CHECK_THROWS_AS(norm_const(-0.75, 1), std::domain_error);
}

TEST_CASE("normalization constants") {
  CHECK(norm_const(0.5, 0) == doctest::Approx(0.5));
  CHECK(norm_const(0.5, 2) == doctest::Approx(0.5));
  CHECK(norm_const(1.0, 1) == doctest::Approx(kSqrtPi / 2.0));
}

TEST_CASE("gamma function") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0));
  CHECK(gamma_fn(5.0) == doctest::Approx(24.0));
  CHECK(gamma_fn(0.5) == doctest::Approx(kSqrtPi).epsilon(1e-12));
  for (double x = 0.1; x <= 30.0; x += 0.7)
    CHECK(gamma_fn(x + 1.0) ==
          doctest::Approx(x * gamma_fn(x)).epsilon(1e-12));
  CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_fn(-3.0), std::domain_error);
}

TEST_CASE("complex log gamma") {
  CHECK(std::abs(std::exp(log_gamma({5.0, 0.0})) - 24.0) < 1e-10);
  std::complex<double> z{2.0, 3.0};
  std::complex<double> lhs = log_gamma(z + 1.0) - log_gamma(z);
  CHECK(std::abs(lhs - std::log(z)) < 1e-10);
}

TEST_CASE("harmonic dimension") {
  CHECK(harmonic_dim(3, 2) == 5);
  CHECK(harmonic_dim(2, 7) == 2);
  CHECK(harmonic_dim(3, 0) == 1);
  CHECK(harmonic_dim(3, 1) == 3);
  CHECK(harmonic_dim(4, 2) == 9);
  CHECK(harmonic_dim(2, 0) == 1);
}

TEST_CASE("polynomial L2 norms") {
  CHECK(poly_l2_norm2(PolyId::Chebyshev, 0.0, 0) == doctest::Approx(kPi));
  CHECK(poly_l2_norm2(PolyId::Chebyshev, 0.0, 3) == doctest::Approx(kPi / 2));
  CHECK(poly_l2_norm2(PolyId::Gegenbauer, 1.0, 0) == doctest::Approx(kPi / 2));
  // Legendre: h_m = 2/(2m+1).
  CHECK(poly_l2_norm2(PolyId::Gegenbauer, 0.5, 2) == doctest::Approx(0.4));
}

TEST_CASE("sphere areas") {
  CHECK(sphere_area(2) == doctest::Approx(2.0 * kPi));
  CHECK(sphere_area(3) == doctest::Approx(4.0 * kPi));
  CHECK(sphere_area(4) == doctest::Approx(2.0 * kPi * kPi));
}
