#pragma once

#include "geokern/fracint.hpp"
#include "geokern/harmonics.hpp"
#include "geokern/quadrature.hpp"

#include <optional>

namespace geokern::transforms {

using harmonics::Vec;

enum class Path { Intertwine, DirectOracle };

enum class RegionSide { Exterior, Interior };

/// Metadata for exterior/interior problems: |x| > a (or |t| > a) vs < a.
/// Chooses evaluation grids and precondition checks; the transform formulas
/// themselves do not depend on it.
struct Region {
  double a = 0.0;
  RegionSide side = RegionSide::Exterior;
};

/// Unoriented hyperplane {x : x . theta = t} in R^n.  (theta, t) and
/// (-theta, -t) denote the same plane; canonical() picks t >= 0 with a
/// positive leading component of theta when t = 0.
struct Hyperplane {
  Vec theta = {1.0, 0.0, 0.0, 0.0};
  double t = 0.0;
  int n = 2;

  static Hyperplane canonical(const Vec& theta, double t, int n);
};

struct TransformResult {
  double value = 0.0;
  double unsigned_mass = 0.0; // same integral with |integrand|
  quad::IntegrationReport report;
};

/// Hyperplane Radon transform of a separable function u(|x|) Y_m(x/|x|).
/// Intertwine reduces to the one-dimensional left-sided operator through the
/// dual transform of |t|^{-n} f(theta/t); DirectOracle integrates over the
/// plane (n in {2,3}) and is the convergence probe for threshold profiles.
TransformResult radon(const harmonics::SeparableFunction& f,
                      const Hyperplane& plane, Path path,
                      const quad::QuadratureSpec& spec = {});

/// Dual Radon transform (normalized sphere average of phi(theta, x.theta))
/// of a cylinder function v(t) Y_m(theta).
TransformResult dual_radon(const harmonics::SeparableFunction& phi,
                           const Vec& x, Path path,
                           const quad::QuadratureSpec& spec = {});

/// Mean of f over the sphere of radius |x| centered at x (spheres through
/// the origin).
TransformResult cormack_quinto(const harmonics::SeparableFunction& f,
                               const Vec& x, Path path,
                               const quad::QuadratureSpec& spec = {});

/// A function on S^n (subset of R^{n+1}) of the form
/// f(omega sin(phi) + e_{n+1} cos(phi)) = F(phi) Y_m(omega), where phi is the
/// angle from the pole e_{n+1} and omega lies on the equator S^{n-1}.
struct SphereFunction {
  fracint::Profile colat; // F(phi) on (0, pi); for even functions (0, pi/2]
                          // suffices and the rest follows by parity
  harmonics::SphericalHarmonic harmonic;
  bool even = false; // f(-eta) = f(eta)
  /// Exact closed form of the stereographic pullback profile, when known
  /// (pure powers for the kernel families); the fast paths prefer it.
  std::optional<fracint::Profile> radial_pullback;

  double eval(const Vec& eta) const;
};

/// sin^{-n}(phi) cot^{m-2j}(phi) Y_{m,mu}: the Funk null family.
SphereFunction funk_kernel_element(int n, int m, int j, int mu);
/// (1 - cos phi)^{1-n} tan^{n+m-2j}(phi/2) Y_{m,mu}: the slice null family.
SphereFunction slice_kernel_element(int n, int m, int j, int mu);

/// Funk transform: normalized average of f over the great subsphere
/// orthogonal to theta (a point of S^n).  Requires f even.  Intertwine uses
/// the Radon transform of (1+|x|^2)^{-n/2} f((x+e_{n+1})/|x+e_{n+1}|);
/// DirectOracle (n=2) is great-circle quadrature.
TransformResult funk(const SphereFunction& f, const Vec& theta, Path path,
                     const quad::QuadratureSpec& spec = {});

/// Spherical slice transform: unnormalized integral of f over the
/// (n-1)-sphere through the pole e_{n+1} with center direction theta (in
/// S^{n-1}) and angular radius psi in (0, pi/2].  Intertwine evaluates the
/// Radon transform of the stereographic pullback at offset t = cot(psi).
TransformResult slice(const SphereFunction& f, const Vec& theta, double psi,
                      Path path, const quad::QuadratureSpec& spec = {});

/// Lorentz product [x,y] = -x1 y1 - x2 y2 + x3 y3 (n = 2 signature).
double lorentz(const Vec& a, const Vec& b);

/// Point of the hyperboloid model H^2 ([x,x] = 1, x3 > 0), polar form
/// x = theta sinh(r) + e3 cosh(r).
struct HyperbolicPoint {
  Vec x = {0.0, 0.0, 1.0, 0.0};
  static HyperbolicPoint from_polar(double r, double angle);
};

/// Geodesic parameter on the dual hyperboloid ([xi,xi] = -1): the geodesic
/// is {x in H^2 : [x,xi] = 0}; dist is its hyperbolic distance from e3.
struct GeodesicDual {
  Vec xi = {1.0, 0.0, 0.0, 0.0};
  static GeodesicDual from_polar(double dist, double angle);
};

/// Totally geodesic transform on H^2: arclength integral of
/// u(r) Y_m(theta) over the geodesic determined by xi.  Direct quadrature in
/// the arclength parameter with tail closure for power-law profiles.
TransformResult hyperbolic_geodesic(const harmonics::SeparableFunction& f,
                                    const GeodesicDual& xi,
                                    const quad::QuadratureSpec& spec = {});

/// Projection R^n -> S^n_+, mu(x) = (x + e_{n+1})/|x + e_{n+1}|.
Vec map_mu(const Vec& x, int n);
/// Inverse stereographic map R^n -> S^n minus the pole,
/// nu(x) = (2x + (|x|^2 - 1) e_{n+1})/(|x|^2 + 1).
Vec map_nu(const Vec& x, int n);
/// Stereographic projection from the pole, x = eta' / (1 - eta_{n+1}).
Vec map_nu_inverse(const Vec& eta, int n);

/// (A phi)(x) = |x|^{-n} phi(x/|x|, 1/|x|): cylinder -> space.
harmonics::SeparableFunction map_A(const harmonics::SeparableFunction& phi);
/// (B f)(theta, t) = |t|^{-n} f(theta/t): space -> cylinder.
harmonics::SeparableFunction map_B(const harmonics::SeparableFunction& f);

} // namespace geokern::transforms
