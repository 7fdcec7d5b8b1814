#include "doctest.h"

#include "geokern/fracint.hpp"
#include "geokern/nullspace.hpp"
#include "geokern/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace geokern::fracint;
namespace quad = geokern::quad;
namespace ns = geokern::nullspace;

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

std::vector<double> log_grid(double a, double b, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i)
    g.push_back(a * std::pow(b / a, double(i) / (n - 1)));
  return g;
}

Profile zero_profile() {
  Profile z;
  z.eval = [](double) { return 0.0; };
  z.zero_exponent = 0.0;
  z.infinity_exponent = 100.0;
  z.support = {{1.0, 2.0}};
  return z;
}

} // namespace

TEST_CASE("right-sided operator closed form at m = 0") {
  // lambda = 1/2, m = 0 reduces to 2 * integral_t^inf e^{-r^2} r dr = e^{-t^2}
  OperatorParams p{0.5, 0, Side::Right, false};
  CHECK(gc_apply(p, Profile::gaussian(), 1.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
  CHECK(gc_apply(p, Profile::gaussian(), 0.4) ==
        doctest::Approx(std::exp(-0.16)).epsilon(1e-10));
}

TEST_CASE("chebyshev operator against an independent oracle") {
  // (T^1_- e^{-r})(t) = (2/sqrt(pi)) t K_0(t), via r = t cosh v.
  double t = 0.8;
  OperatorParams p{0.0, 1, Side::Right, false};
  double val = gc_apply(p, Profile::exp_decay(), t);
  auto bessel = quad::integrate_semi_infinite(
      [t](double v) { return std::exp(-t * std::cosh(v)); }, 0.0);
  REQUIRE(bessel.converged);
  CHECK(val == doctest::Approx(2.0 / kSqrtPi * t * bessel.value).epsilon(1e-8));
}

TEST_CASE("right-sided annihilation sweep") {
  auto grid = log_grid(0.1, 10.0, 10);
  for (double lambda : {0.0, 0.5, 1.0, 1.5})
    for (int m = 2; m <= 6; ++m) {
      OperatorParams p{lambda, m, Side::Right, false};
      for (int k = m - 2; k >= 0; k -= 2) {
        Profile f = Profile::power(-2.0 * lambda - k - 2.0);
        for (double t : grid) {
          double v = gc_apply(p, f, t);
          double mass = gc_unsigned_mass(p, f, t);
          REQUIRE(mass > 0.0);
          CHECK(std::abs(v) <= 1e-7 * mass);
        }
      }
    }
}

TEST_CASE("left-sided annihilation sweep") {
  auto grid = log_grid(0.1, 10.0, 10);
  for (double lambda : {0.0, 0.5, 1.0, 1.5})
    for (int m = 2; m <= 6; ++m) {
      OperatorParams p{lambda, m, Side::Left, false};
      for (int k = m - 2; k >= 0; k -= 2) {
        Profile f = Profile::power(double(k));
        for (double t : grid) {
          double v = gc_apply(p, f, t);
          double mass = gc_unsigned_mass(p, f, t);
          REQUIRE(mass > 0.0);
          CHECK(std::abs(v) <= 1e-7 * mass);
        }
      }
    }
}

TEST_CASE("no annihilation at m = 0, 1") {
  auto grid = log_grid(0.3, 3.0, 8);
  for (double lambda : {0.0, 0.5, 1.0})
    for (int m : {0, 1})
      for (auto side : {Side::Right, Side::Left}) {
        OperatorParams p{lambda, m, side, false};
        double peak = 0.0;
        for (double t : grid)
          peak = std::max(peak, std::abs(gc_apply(p, Profile::gaussian(), t)));
        CHECK(peak > 1e-3);
      }
}

TEST_CASE("riemann-liouville integral") {
  CHECK(rl_integral(1.0, Profile::exp_decay(), 0.3) ==
        doctest::Approx(std::exp(-0.3)).epsilon(1e-9));
  CHECK(rl_integral(2.0, Profile::exp_decay(), 1.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
  CHECK(rl_integral(0.5, Profile::exp_decay(), 0.0) ==
        doctest::Approx(1.0).epsilon(1e-9));
  // e^{-t} is an eigenfunction of I^alpha with eigenvalue 1
  CHECK(rl_integral(0.5, Profile::exp_decay(), 0.7) ==
        doctest::Approx(std::exp(-0.7)).epsilon(1e-9));
}

TEST_CASE("riemann-liouville derivative") {
  CHECK(rl_derivative(1.0, Profile::exp_decay(), 0.5) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-7));
  CHECK(rl_derivative(0.5, Profile::exp_decay(), 0.7) ==
        doctest::Approx(std::exp(-0.7)).epsilon(1e-6));
}

TEST_CASE("derivative inverts the integral") {
  // the inner integral is evaluated tighter than the finite-difference
  // step noise it has to support
  quad::QuadratureSpec tight;
  tight.rel_tol = 1e-13;
  tight.abs_tol = 1e-15;
  for (double alpha : {0.5, 1.0, 2.0})
    for (double t : {0.5, 1.0, 2.0}) {
      Profile g;
      g.eval = [alpha, tight](double s) {
        return rl_integral(alpha, Profile::gaussian(), s, tight);
      };
      g.zero_exponent = 0.0;
      g.infinity_exponent = 50.0;
      double back = rl_derivative(alpha, g, t);
      double want = std::exp(-t * t);
      CHECK(std::abs(back - want) <= 1e-6 * std::abs(want));
    }
}

TEST_CASE("composition identity") {
  CHECK(compose_identity_residual(0.5, 2, Profile::gaussian(),
                                  {0.5, 1.0, 1.5}) <= 1e-6);
  CHECK(compose_identity_residual(0.0, 3, Profile::exp_decay(), {1.0, 2.0}) <=
        1e-6);
  CHECK(compose_identity_residual(0.5, 2, zero_profile(), {1.0, 1.5}) <=
        1e-12);
}

TEST_CASE("reflection identities") {
  Profile f;
  f.eval = [](double t) { return std::exp(-t - 1.0 / t); };
  f.zero_exponent = 50.0;
  f.infinity_exponent = 50.0;
  std::vector<double> grid = {0.5, 1.0, 2.0};
  auto r1 = reflect(ReflectMap::LeftFromRight_unstarred, 0.5, 2, f, grid);
  CHECK(r1.max_residual <= 1e-8);
  auto r2 = reflect(ReflectMap::LeftFromRight_starred, 0.5, 2, f, grid);
  CHECK(r2.max_residual <= 1e-8);
}

TEST_CASE("reflection carries the left null family to the right one") {
  // f = 1 is left-null at m = 2; its reflection t^{-2 lambda - 2} is
  // right-null, so both evaluation routes of the identity vanish against
  // their own unsigned mass.
  auto r = reflect(ReflectMap::LeftFromRight_unstarred, 0.5, 2,
                   Profile::power(0.0), {0.5, 1.0, 2.0});
  OperatorParams left{0.5, 2, Side::Left, false};
  OperatorParams right{0.5, 2, Side::Right, false};
  for (double t : {0.5, 1.0, 2.0}) {
    double lm = gc_unsigned_mass(left, Profile::power(0.0), t);
    CHECK(std::abs(gc_apply(left, Profile::power(0.0), t)) <= 1e-10 * lm);
    double rm = gc_unsigned_mass(right, r.transformed, 1.0 / t);
    CHECK(std::abs(gc_apply(right, r.transformed, 1.0 / t)) <= 1e-10 * rm);
  }
}

TEST_CASE("mellin symbol closed forms") {
  CHECK(mellin_symbol(0.5, 2, {3.0, 0.0}).real() ==
        doctest::Approx(1.25).epsilon(1e-12));
  CHECK(mellin_symbol(0.5, 0, {1.0, 0.0}).real() ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(mellin_symbol(0.5, 2, {0.5, 0.0}), std::domain_error);
}

TEST_CASE("mellin symbol vs numeric transform") {
  for (auto [lambda, m] :
       std::vector<std::pair<double, int>>{{0.5, 2}, {1.0, 3}}) {
    double z = m + 1.0;
    double sym = mellin_symbol(lambda, m, {z, 0.0}).real();
    double num = mellin_symbol_numeric(lambda, m, z);
    CHECK(std::abs(sym - num) <= 1e-7 * std::abs(sym));
  }
}

TEST_CASE("mellin symbol sign change at the first null exponent") {
  for (int m : {2, 3}) {
    double z0 = m - 3.0;
    double a = mellin_symbol_continued(0.5, m, {z0 - 0.2, 0.0}).real();
    double b = mellin_symbol_continued(0.5, m, {z0 + 0.2, 0.0}).real();
    CHECK(a * b < 0.0);
  }
}

TEST_CASE("operator output is smooth") {
  OperatorParams p{0.5, 2, Side::Right, false};
  auto g = [&](double t) { return gc_apply(p, Profile::gaussian(), t); };
  for (double t : {0.5, 1.5, 3.0}) {
    double h = 1e-3;
    double d2a = (g(t + h) - 2.0 * g(t) + g(t - h)) / (h * h);
    h *= 0.5;
    double d2b = (g(t + h) - 2.0 * g(t) + g(t - h)) / (h * h);
    CHECK(std::abs(d2a) < 100.0);
    CHECK(std::abs(d2a - d2b) <= 5e-3 * std::max(1.0, std::abs(d2b)));
  }
}

TEST_CASE("psi reconstruction round trip") {
  quad::QuadratureSpec loose;
  loose.rel_tol = 1e-7;
  loose.abs_tol = 1e-9;

  SUBCASE("zero input") {
    auto r = reconstruct_psi(0.5, 2, zero_profile());
    for (double t : {0.5, 1.2, 1.8, 3.0}) CHECK(std::abs(r.psi(t)) <= 1e-12);
  }

  SUBCASE("unprojected bump is rejected") {
    CHECK_THROWS_AS(reconstruct_psi(0.5, 2, Profile::bump(1.0, 2.0)),
                    std::domain_error);
  }

  SUBCASE("gegenbauer case") {
    auto phi = ns::project_to_moment_space(Profile::bump(1.0, 2.0), 2, 0.5);
    auto r = reconstruct_psi(0.5, 2, phi);
    OperatorParams right{0.5, 2, Side::Right, false};
    for (double t : {1.1, 1.35, 1.6, 1.85}) {
      double back = gc_apply(right, r.psi, t, loose);
      CHECK(std::abs(back - phi(t)) <= 1e-5);
    }
    for (double t : {2.1, 2.8, 5.0}) CHECK(std::abs(r.psi(t)) <= 1e-8);
  }

  SUBCASE("chebyshev case") {
    auto phi = ns::project_to_moment_space(Profile::bump(1.0, 2.0), 2, 0.0);
    auto r = reconstruct_psi(0.0, 2, phi);
    OperatorParams right{0.0, 2, Side::Right, false};
    for (double t : {1.2, 1.5, 1.8}) {
      double back = gc_apply(right, r.psi, t, loose);
      CHECK(std::abs(back - phi(t)) <= 1e-4);
    }
    for (double t : {2.2, 4.0}) CHECK(std::abs(r.psi(t)) <= 1e-7);
  }
}

TEST_CASE("norm weights") {
  WeightSpec kappa{WeightSpec::Kind::KappaLeft, 0.75, 2};
  CHECK(kappa(0.3) == doctest::Approx(1.0));
  kappa.m = 3;
  CHECK(kappa(0.3) == doctest::Approx(0.3));
  kappa.lambda = 0.0;
  CHECK(kappa(0.3) == doctest::Approx(0.3 * (1.0 + std::abs(std::log(0.3)))));
  kappa.lambda = -0.25;
  CHECK(kappa(0.3) == doctest::Approx(std::pow(0.3, 0.5)));

  WeightSpec kt{WeightSpec::Kind::KappaTildeRight, 0.75, 2};
  CHECK(kt(2.0) == doctest::Approx(std::pow(2.0, 1.5)));
  kt.m = 3;
  CHECK(kt(2.0) == doctest::Approx(std::pow(2.0, 0.5)));
  kt.lambda = 0.0;
  CHECK(kt(2.0) ==
        doctest::Approx(std::pow(2.0, -1.0) * (1.0 + std::abs(std::log(2.0)))));
  kt.lambda = -0.25;
  CHECK(kt(2.0) == doctest::Approx(0.5));
}

TEST_CASE("integrability preconditions") {
  // right side needs decay q > 2 lambda + 1 - eta
  OperatorParams right{0.5, 2, Side::Right, false};
  CHECK_THROWS_AS(check_preconditions(right, Profile::power(-1.0)),
                  std::domain_error);
  // left side needs zero exponent > -1 - eta
  OperatorParams left{0.5, 2, Side::Left, false};
  CHECK_THROWS_AS(check_preconditions(left, Profile::power(-2.5)),
                  std::domain_error);
  // starred right needs q > m - 1
  OperatorParams sright{0.5, 3, Side::Right, true};
  CHECK_THROWS_AS(check_preconditions(sright, Profile::power(-1.0)),
                  std::domain_error);
  // compact support short-circuits the decay conditions
  CHECK_NOTHROW(check_preconditions(right, Profile::bump(1.0, 2.0)));
  CHECK_NOTHROW(check_preconditions(left, Profile::bump(1.0, 2.0)));
}

TEST_CASE("profile declarations are sampled") {
  CHECK_NOTHROW(validate_profile(Profile::gaussian()));
  CHECK_NOTHROW(validate_profile(Profile::exp_decay()));
  CHECK_NOTHROW(validate_profile(Profile::power(-2.0)));
  CHECK_NOTHROW(validate_profile(Profile::bump(0.5, 3.0)));
  Profile lying;
  lying.eval = [](double t) { return 1.0 / (t * t); };
  lying.zero_exponent = 0.0; // actual growth is t^-2
  lying.infinity_exponent = 2.0;
  CHECK_THROWS_AS(validate_profile(lying), std::domain_error);
}

TEST_CASE("profile factories") {
  auto b = Profile::bump(1.0, 2.0);
  CHECK(b(1.5) == doctest::Approx(1.0));
  CHECK(b(0.99) == 0.0);
  CHECK(b(2.01) == 0.0);
  REQUIRE(b.support.has_value());
  CHECK(b.support->first == doctest::Approx(1.0));
  CHECK(b.support->second == doctest::Approx(2.0));

  auto s = Profile::sum({{2.0, Profile::power(-2.0)}, {-1.0, Profile::gaussian()}});
  CHECK(s(2.0) == doctest::Approx(2.0 * 0.25 - std::exp(-4.0)));
}
