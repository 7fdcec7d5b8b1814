#include "geokern/harmonics.hpp"

#include "geokern/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace geokern::harmonics {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_unit(const Vec& theta, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += theta[i] * theta[i];
  if (std::abs(s - 1.0) > 1e-12)
    throw std::domain_error("eval_harmonic: direction is not a unit vector");
}

// Orthonormal real basis on S^2: mu = m+1 is the M=0 element, mu < m+1 the
// sin branch, mu > m+1 the cos branch.
double eval_s2_basis(int m, int mu, const Vec& theta) {
  double ct = std::clamp(theta[2], -1.0, 1.0);
  double phi = std::atan2(theta[1], theta[0]);
  int M = mu - m - 1; // in [-m, m]
  int aM = std::abs(M);
  double logfac = std::lgamma(double(m - aM + 1)) - std::lgamma(double(m + aM + 1));
  double norm = std::sqrt((2.0 * m + 1.0) / (4.0 * kPi) * std::exp(logfac));
  double p = std::assoc_legendre(unsigned(m), unsigned(aM), ct);
  if (M == 0) return norm * p;
  double ang = M > 0 ? std::cos(aM * phi) : std::sin(aM * phi);
  return std::sqrt(2.0) * norm * p * ang;
}

} // namespace

double dot(const Vec& a, const Vec& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec normalized(const Vec& a) {
  double s = norm(a);
  if (s == 0.0) throw std::domain_error("normalized: zero vector");
  return {a[0] / s, a[1] / s, a[2] / s, a[3] / s};
}

SphericalHarmonic SphericalHarmonic::basis(int n, int m, int mu) {
  SphericalHarmonic y;
  y.n = n;
  y.m = m;
  y.mu = mu;
  y.kind = HarmonicKind::FullBasis;
  return y;
}

SphericalHarmonic SphericalHarmonic::zonal(int n, int m, const Vec& axis) {
  SphericalHarmonic y;
  y.n = n;
  y.m = m;
  y.mu = 1;
  y.kind = HarmonicKind::Zonal;
  y.axis = normalized(axis);
  return y;
}

double eval_harmonic(const SphericalHarmonic& Y, const Vec& theta) {
  if (Y.n < 2) throw std::domain_error("eval_harmonic: requires n >= 2");
  if (Y.m < 0) throw std::domain_error("eval_harmonic: requires m >= 0");
  check_unit(theta, Y.n);

  if (Y.kind == HarmonicKind::Zonal) {
    double lambda = 0.5 * (Y.n - 2);
    auto id = Y.n == 2 ? specfun::PolyId::Chebyshev : specfun::PolyId::Gegenbauer;
    double h = specfun::poly_l2_norm2(id, lambda, Y.m);
    double c = dot(Y.axis, theta);
    return specfun::eval_poly(id, lambda, Y.m, std::clamp(c, -1.0, 1.0)) /
           std::sqrt(specfun::sphere_area(Y.n - 1) * h);
  }

  std::int64_t d = specfun::harmonic_dim(Y.n, Y.m);
  if (Y.mu < 1 || Y.mu > d) {
    std::ostringstream msg;
    msg << "eval_harmonic: mu = " << Y.mu << " outside 1.." << d;
    throw std::domain_error(msg.str());
  }
  if (Y.n == 2) {
    if (Y.m == 0) return 1.0 / std::sqrt(2.0 * kPi);
    double phi = std::atan2(theta[1], theta[0]);
    return (Y.mu == 1 ? std::cos(Y.m * phi) : std::sin(Y.m * phi)) / std::sqrt(kPi);
  }
  if (Y.n == 3) return eval_s2_basis(Y.m, Y.mu, theta);
  throw std::domain_error(
      "eval_harmonic: FullBasis supports n in {2,3}; use Zonal for higher n");
}

double SeparableFunction::eval_space(const Vec& x) const {
  double r = 0.0;
  for (int i = 0; i < harmonic.n; ++i) r += x[i] * x[i];
  r = std::sqrt(r);
  if (r == 0.0) throw std::domain_error("eval_space: undefined at the origin");
  Vec theta{0, 0, 0, 0};
  for (int i = 0; i < harmonic.n; ++i) theta[i] = x[i] / r;
  return profile(r) * eval_harmonic(harmonic, theta);
}

double SeparableFunction::eval_cylinder(const Vec& theta, double t) const {
  double v;
  if (t > 0.0) {
    v = profile(t);
  } else if (t < 0.0) {
    v = profile(-t);
    if (harmonic.m % 2 != 0) v = -v;
  } else {
    v = harmonic.m % 2 != 0 ? 0.0 : profile(0.0);
  }
  return v * eval_harmonic(harmonic, theta);
}

double fourier_laplace_coeff(const std::function<double(const Vec&, double)>& f,
                             const SphericalHarmonic& Y, double r,
                             const quad::QuadratureSpec& spec) {
  int n = Y.n;
  if (n != 2 && n != 3)
    throw std::domain_error("fourier_laplace_coeff: sphere quadrature needs n in {2,3}");
  auto g = [&](const std::array<double, 3>& p) {
    Vec theta{p[0], p[1], n == 3 ? p[2] : 0.0, 0.0};
    return f(theta, r) * eval_harmonic(Y, theta);
  };
  quad::IntegrationReport rep = quad::integrate_sphere(n, g, spec);
  return rep.value * specfun::sphere_area(n);
}

} // namespace geokern::harmonics
