#include "geokern/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace geokern::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Lanczos g = 7, n = 9 coefficients (Godfrey/Pugh tabulation).
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

std::complex<double> log_gamma_core(std::complex<double> z) {
  // Requires Re z > 1/2; principal branch.
  z -= 1.0;
  std::complex<double> acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z + double(i));
  std::complex<double> t = z + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(acc);
}

bool is_nonpositive_integer(double x) {
  return x <= 0.0 && x == std::floor(x);
}

double binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::int64_t i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

} // namespace

std::complex<double> log_gamma(std::complex<double> z) {
  if (z.real() < 0.5) {
    // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
    if (z.imag() == 0.0 && is_nonpositive_integer(z.real()))
      throw std::domain_error("log_gamma: pole at nonpositive integer " +
                              std::to_string(z.real()));
    return std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma_core(1.0 - z);
  }
  return log_gamma_core(z);
}

double gamma_fn(double x) {
  if (is_nonpositive_integer(x))
    throw std::domain_error("gamma_fn: pole at nonpositive integer " +
                            std::to_string(x));
  if (x < 0.5) {
    // Real reflection keeps the sign explicit.
    return kPi / (std::sin(kPi * x) * gamma_fn(1.0 - x));
  }
  std::complex<double> lg = log_gamma_core(std::complex<double>(x, 0.0));
  return std::exp(lg.real());
}

double eval_poly(PolyId id, double lambda, int m, double t) {
  if (m < 0) throw std::domain_error("eval_poly: m must be >= 0");
  if (id == PolyId::Chebyshev) {
    if (std::abs(t) <= 1.0) return std::cos(m * std::acos(t));
    double p0 = 1.0, p1 = t;
    if (m == 0) return p0;
    for (int k = 2; k <= m; ++k) {
      double p2 = 2.0 * t * p1 - p0;
      p0 = p1;
      p1 = p2;
    }
    return p1;
  }
  if (!(lambda > -0.5) || lambda == 0.0)
    throw std::domain_error("eval_poly: Gegenbauer requires lambda > -1/2, lambda != 0");
  double p0 = 1.0, p1 = 2.0 * lambda * t;
  if (m == 0) return p0;
  for (int k = 2; k <= m; ++k) {
    double p2 = (2.0 * t * (k + lambda - 1.0) * p1 - (k + 2.0 * lambda - 2.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double eval_poly_explicit(PolyId id, double lambda, int m, double t) {
  if (m < 0) throw std::domain_error("eval_poly_explicit: m must be >= 0");
  if (m == 0) return 1.0;
  int M = m / 2;
  double sum = 0.0;
  for (int j = 0; j <= M; ++j) {
    double coef;
    if (id == PolyId::Chebyshev) {
      // lim_{lambda->0} Gamma(m-j+lambda)/Gamma(lambda) = 0 except through the
      // classical closed form T_m(t) = (m/2) sum_j (-1)^j (m-j-1)!/(j!(m-2j)!) (2t)^(m-2j).
      coef = 0.5 * m * std::pow(-1.0, j) * gamma_fn(double(m - j)) /
             (gamma_fn(double(j + 1)) * gamma_fn(double(m - 2 * j + 1)));
      coef *= std::pow(2.0, m - 2 * j);
    } else {
      if (!(lambda > -0.5) || lambda == 0.0)
        throw std::domain_error("eval_poly_explicit: lambda > -1/2, lambda != 0 required");
      coef = std::pow(-1.0, j) * std::pow(2.0, m - 2 * j) *
             gamma_fn(m - j + lambda) /
             (gamma_fn(lambda) * gamma_fn(double(j + 1)) * gamma_fn(double(m - 2 * j + 1)));
    }
    sum += coef * std::pow(t, m - 2 * j);
  }
  return sum;
}

double norm_const(double lambda, int m) {
  if (!(lambda > -0.5) || lambda == 0.0)
    throw std::domain_error("norm_const: requires lambda > -1/2, lambda != 0");
  if (m < 0) throw std::domain_error("norm_const: m must be >= 0");
  // Gamma(2 lambda + m) / Gamma(2 lambda) as a rising product avoids the
  // 1/Gamma cancellation trouble for small |lambda|.
  double rising = 1.0;
  for (int k = 0; k < m; ++k) rising *= 2.0 * lambda + k;
  return rising * gamma_fn(lambda + 0.5) / (2.0 * gamma_fn(double(m + 1)));
}

std::int64_t harmonic_dim(int n, int m) {
  if (n < 2) throw std::domain_error("harmonic_dim: requires n >= 2");
  if (m < 0) throw std::domain_error("harmonic_dim: requires m >= 0");
  if (m == 0) return 1;
  if (n == 2) return 2;
  // (n + 2m - 2) (n + m - 3)! / (m! (n-2)!) = (n + 2m - 2) C(n+m-3, m) / (n - 2)
  double v = double(n + 2 * m - 2) * binomial(n + m - 3, m) / double(n - 2);
  return std::int64_t(std::llround(v));
}

double poly_l2_norm2(PolyId id, double lambda, int m) {
  if (id == PolyId::Chebyshev) return m == 0 ? kPi : kPi / 2.0;
  double g = gamma_fn(lambda);
  double rising = 1.0; // Gamma(m + 2 lambda)/Gamma(2 lambda)
  for (int k = 0; k < m; ++k) rising *= 2.0 * lambda + k;
  return kPi * std::pow(2.0, 1.0 - 2.0 * lambda) * rising * gamma_fn(2.0 * lambda) /
         (gamma_fn(double(m + 1)) * (m + lambda) * g * g);
}

double sphere_area(int n) {
  if (n < 1) throw std::domain_error("sphere_area: requires n >= 1");
  return 2.0 * std::pow(kPi, 0.5 * n) / gamma_fn(0.5 * n);
}

} // namespace geokern::specfun
