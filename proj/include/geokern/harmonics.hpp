#pragma once

#include "geokern/fracint.hpp"
#include "geokern/quadrature.hpp"

#include <array>
#include <functional>

namespace geokern::harmonics {

/// Fixed-size point type covering R^n for n <= 4 and spheres embedded in it;
/// unused trailing components are zero.
using Vec = std::array<double, 4>;

inline Vec make_vec(double x, double y, double z = 0.0, double w = 0.0) {
  return {x, y, z, w};
}

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);
Vec normalized(const Vec& a);

enum class HarmonicKind { FullBasis, Zonal };

/// A real spherical harmonic of degree m on S^{n-1} (subset of R^n).
/// FullBasis supports n in {2,3} with mu indexing 1..d_n(m); Zonal supports
/// any n >= 2 and is the normalized Gegenbauer (Chebyshev for n=2) polynomial
/// of axis . theta.
struct SphericalHarmonic {
  int n = 3;
  int m = 0;
  int mu = 1;
  HarmonicKind kind = HarmonicKind::FullBasis;
  Vec axis = {0.0, 0.0, 1.0, 0.0};

  static SphericalHarmonic basis(int n, int m, int mu);
  static SphericalHarmonic zonal(int n, int m, const Vec& axis);
};

/// Evaluate at a unit vector (|theta| = 1 within 1e-12, first n components).
double eval_harmonic(const SphericalHarmonic& Y, const Vec& theta);

enum class Orientation {
  SpaceFunction,   // f(x) = u(|x|) Y(x/|x|) on R^n
  CylinderFunction // phi(theta, t) = v(t) Y(theta), v(-t) = (-1)^m v(t)
};

/// Separable building block for all transforms: a radial/axial profile times
/// a spherical harmonic.
struct SeparableFunction {
  fracint::Profile profile;
  SphericalHarmonic harmonic;
  Orientation orientation = Orientation::SpaceFunction;

  double eval_space(const Vec& x) const;
  /// The cylinder evaluation extends the profile to t < 0 by the parity rule
  /// v(-t) = (-1)^m v(t).
  double eval_cylinder(const Vec& theta, double t) const;
};

/// Coefficient c(r) = integral_{S^{n-1}} f(r theta) Y(theta) dtheta against
/// the unnormalized surface measure.
double fourier_laplace_coeff(const std::function<double(const Vec&, double)>& f,
                             const SphericalHarmonic& Y, double r,
                             const quad::QuadratureSpec& spec = {});

} // namespace geokern::harmonics
