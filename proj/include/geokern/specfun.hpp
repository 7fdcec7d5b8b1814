#pragma once

#include <complex>
#include <cstdint>

namespace geokern::specfun {

enum class PolyId { Gegenbauer, Chebyshev };

/// Evaluate C^lambda_m(t) (Gegenbauer) or T_m(t) (Chebyshev, first kind)
/// by the three-term recurrence.  For Chebyshev the closed form
/// cos(m*acos t) is used on [-1,1].  lambda is ignored for Chebyshev.
/// Gegenbauer requires lambda > -1/2, lambda != 0.
double eval_poly(PolyId id, double lambda, int m, double t);

/// Same polynomials through the explicit finite sum
///   sum_j (-1)^j 2^(m-2j) Gamma(m-j+lambda) / (Gamma(lambda) j! (m-2j)!) t^(m-2j)
/// (Chebyshev: the lambda -> 0 limit).  Used as a cross-check.
double eval_poly_explicit(PolyId id, double lambda, int m, double t);

/// Normalization constant
///   c_{lambda,m} = Gamma(2 lambda + m) Gamma(lambda + 1/2) / (2 m! Gamma(2 lambda)),
/// lambda > -1/2, lambda != 0.
double norm_const(double lambda, int m);

/// Gamma function on the real line (Lanczos approximation, reflection for
/// x < 1/2).  Accurate to at least 12 significant digits away from poles;
/// throws std::domain_error at nonpositive integers.
double gamma_fn(double x);

/// log Gamma for complex argument (principal branch), Lanczos g = 7.
std::complex<double> log_gamma(std::complex<double> z);

/// Dimension of the space of spherical harmonics of degree m on S^(n-1):
///   d_n(m) = (n + 2m - 2)(n + m - 3)! / (m! (n - 2)!),
/// with d_n(0) = 1 and d_2(m) = 2 for m >= 1.
std::int64_t harmonic_dim(int n, int m);

/// Squared L^2 norm of C^lambda_m on [-1,1] with weight (1-t^2)^(lambda-1/2):
///   h_m = pi 2^(1-2 lambda) Gamma(m+2 lambda) / (m! (m+lambda) Gamma(lambda)^2).
/// Chebyshev (lambda = 0 operators): pi for m = 0, pi/2 otherwise.
double poly_l2_norm2(PolyId id, double lambda, int m);

/// Surface area of S^(n-1): sigma_{n-1} = 2 pi^(n/2) / Gamma(n/2).
double sphere_area(int n);

} // namespace geokern::specfun
