#pragma once

#include "geokern/quadrature.hpp"

#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace geokern::fracint {

enum class Side { Right, Left };

/// Parameters of the fractional-integral family.  lambda = 0 selects the
/// Chebyshev operators (kernel T_m, prefactor 2/sqrt(pi)); otherwise the
/// Gegenbauer operators with kernel C^lambda_m and prefactor 1/c_{lambda,m}.
struct OperatorParams {
  double lambda = 0.5;
  int m = 0;
  Side side = Side::Right;
  bool starred = false;
};

/// A function on (0, infinity) with declared endpoint behavior:
///   f(t) ~ t^zero_exponent      as t -> 0+
///   f(t) ~ t^(-infinity_exponent) as t -> infinity
/// pure_power_tail marks f(t) = coefficient * t^exponent beyond the
/// truncation radius; global_pure_power marks that form on all of (0,inf),
/// which lets operator quadrature absorb the power into the Jacobi weight.
struct Profile {
  std::function<double(double)> eval;
  double zero_exponent = 0.0;
  double infinity_exponent = std::numeric_limits<double>::infinity();
  std::optional<quad::PowerTail> pure_power_tail;
  bool global_pure_power = false;
  std::optional<std::pair<double, double>> support;

  double operator()(double t) const { return eval(t); }

  static Profile gaussian();           // exp(-t^2)
  static Profile exp_decay();          // exp(-t)
  static Profile power(double p, double coefficient = 1.0); // c * t^p
  /// Smooth bump supported on [a,b]: exp(-1/((t-a)(b-t))) scaled to peak 1.
  static Profile bump(double a, double b);
  static Profile sum(std::vector<std::pair<double, Profile>> terms);
};

/// Weight functions of the norm estimates:
///   KappaLeft        kappa_{lambda,m}(t):  1 (m even); t^(1+2 lambda)
///                    (m odd, -1/2<lambda<0); t(1+|log t|) (m odd, lambda=0);
///                    t (m odd, lambda>0)
///   KappaTildeRight  kappa~_{lambda,m}(t): t^(2 lambda) (m even); t^(-1)
///                    (m odd, -1/2<lambda<0); t^(2 lambda-1)(1+|log t|)
///                    (m odd, lambda=0); t^(2 lambda-1) (m odd, lambda>0)
struct WeightSpec {
  enum class Kind { KappaLeft, KappaTildeRight } kind;
  double lambda = 0.0;
  int m = 0;
  double operator()(double t) const;
};

/// Throws std::domain_error naming the violated convergence condition for the
/// declared profile exponents (right side: integral-at-infinity conditions;
/// left side: integral-at-zero conditions).
void check_preconditions(const OperatorParams& params, const Profile& f);

/// Samples the profile near both endpoints and throws std::domain_error if
/// the observed growth contradicts the declared exponents (|f(t)|/t^z must
/// stay bounded as t -> 0+, |f(t)| t^q as t -> infinity).
void validate_profile(const Profile& f);

struct ApplyResult {
  double value = 0.0;
  quad::IntegrationReport report;
};

/// Apply one of the eight operators at the point x > 0.  All of them reduce
/// to an integral over s in (0,1) against the Jacobi weight (1-s)^(lambda-1/2)
/// (right side: s = x/r; left side: t = x s); globally-pure-power profiles
/// move their residual power into the Jacobi weight at s = 0, making the
/// null-function integrals exact up to rounding.
ApplyResult gc_apply_report(const OperatorParams& params, const Profile& f,
                            double x, const quad::QuadratureSpec& spec = {});
double gc_apply(const OperatorParams& params, const Profile& f, double x,
                const quad::QuadratureSpec& spec = {});

/// Same quadrature with |integrand|: the unsigned mass against which
/// annihilation residuals are measured.
double gc_unsigned_mass(const OperatorParams& params, const Profile& f,
                        double x, const quad::QuadratureSpec& spec = {});

/// Right-sided Riemann-Liouville integral
///   (I^alpha f)(t) = (1/Gamma(alpha)) integral_t^inf f(s) (s-t)^(alpha-1) ds.
double rl_integral(double alpha, const Profile& f, double t,
                   const quad::QuadratureSpec& spec = {});

/// Right-sided Riemann-Liouville derivative D^alpha = (-d/dt)^M I^(M-alpha),
/// M = ceil(alpha); central differences with Richardson extrapolation.
double rl_derivative(double alpha, const Profile& f, double t,
                     const quad::QuadratureSpec& spec = {});

/// Max over the grid of |(*G G f)(t) - 2^(2 lambda+1) (I^(2 lambda+1) f)(t)|
/// relative to the right-hand side.
double compose_identity_residual(double lambda, int m, const Profile& f,
                                 const std::vector<double>& t_grid,
                                 const quad::QuadratureSpec& spec = {});

enum class ReflectMap { LeftFromRight_unstarred, LeftFromRight_starred };

struct ReflectResult {
  Profile transformed;   // f1(t) = t^(-2 lambda-2) f(1/t)  (unstarred)
                         // f2(t) = t^(-1) f(1/t)           (starred)
  double max_residual;   // identity checked on the grid
};

/// Reflection between the left and right operators:
///   (G_+ f)(r)  = r^(-1)       (G_- f1)(1/r)
///   (*G_+ f)(r) = r^(2 lambda) (*G_- f2)(1/r)
ReflectResult reflect(ReflectMap side_map, double lambda, int m,
                      const Profile& f, const std::vector<double>& r_grid,
                      const quad::QuadratureSpec& spec = {});

/// Mellin multiplier of the starred right operator,
///   g~(z) = Gamma((z+1-m)/2) Gamma(lambda+(z+1+m)/2) /
///           [Gamma(lambda+(z+1)/2) Gamma(lambda+(z+2)/2)],
/// valid for Re z > m-1 (throws outside).  The _continued variant evaluates
/// the same Gamma ratio as a meromorphic function wherever it is finite.
std::complex<double> mellin_symbol(double lambda, int m, std::complex<double> z);
std::complex<double> mellin_symbol_continued(double lambda, int m,
                                             std::complex<double> z);

/// Direct quadrature of integral_0^1 g(s) s^(z-1) ds for the kernel
/// g(s) = K s (1-s^2)^(lambda-1/2) P_m(1/s); the numeric cross-check of
/// mellin_symbol (real z > m-1).
double mellin_symbol_numeric(double lambda, int m, double z,
                             const quad::QuadratureSpec& spec = {});

/// Moment integral_0^inf t^power phi(t) dt of a compactly supported profile.
double moment(const Profile& phi, double power,
              const quad::QuadratureSpec& spec = {});

struct PsiResult {
  Profile psi;
  double support_bound; // psi vanishes beyond this point
};

/// Inversion on the moment space: psi = 2^(-2 lambda-1) D^(2 lambda+1) *G phi
/// for phi smooth with compact support in (0,inf) and vanishing moments
/// integral t^(m-2k) phi(t) dt = 0, 1 <= k <= floor(m/2) (checked; throws).
/// G psi reproduces phi; psi vanishes beyond phi's support.
PsiResult reconstruct_psi(double lambda, int m, const Profile& phi,
                          const quad::QuadratureSpec& spec = {});

} // namespace geokern::fracint
