#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace geokern::quad {

enum class Rule { GaussJacobi, GaussLegendre, TanhSinh };
enum class Endpoint { Lower, Upper };

struct QuadratureSpec {
  Rule rule = Rule::GaussLegendre;
  int nodes = 16;                    // starting node count for the doubling loop
  double singularity_exponent = 0.0; // declared endpoint exponent (semi-infinite)
  double truncation_radius = 50.0;   // used with analytic power tails
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_nodes = 1 << 15;
};

struct IntegrationReport {
  double value = 0.0;
  double error_estimate = 0.0;
  long long nodes_used = 0;
  bool converged = false;
};

struct PowerTail {
  double coefficient = 0.0; // f(x) ~ coefficient * x^exponent as x -> infinity
  double exponent = 0.0;    // must be < -1 for the closed-form tail
};

using Fn = std::function<double(double)>;

/// Nodes/weights of the n-point Gauss-Jacobi rule on [-1,1] for the weight
/// (1-x)^alpha (1+x)^beta, alpha, beta > -1.  Tables are cached per
/// (alpha, beta, n); cache access is synchronized.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};
const GaussRule& gauss_jacobi(int n, double alpha, double beta);
const GaussRule& gauss_legendre(int n);

/// integral_a^b g(x) * weight dx where weight = (b-x)^alpha (Endpoint::Upper)
/// or (x-a)^alpha (Endpoint::Lower) is supplied by the rule; g is the smooth
/// factor.  Node doubling until two successive estimates agree.
IntegrationReport integrate_singular_endpoint(const Fn& g, double a, double b,
                                              double alpha, Endpoint endpoint,
                                              const QuadratureSpec& spec = {});

/// integral_0^1 s^beta (1-s)^alpha g(s) ds with both exponents carried by a
/// Gauss-Jacobi rule; g is the smooth factor.
IntegrationReport integrate_jacobi01(const Fn& g, double alpha, double beta,
                                     const QuadratureSpec& spec = {});

/// integral_a^infinity f(x) dx.  Default route maps x = a + u/(1-u) onto a
/// Gauss-Legendre rule of (0,1) with node doubling.  When `tail` is given the
/// integral is truncated at spec.truncation_radius and closed with the exact
/// integral of coefficient * x^exponent.  A nonzero spec.singularity_exponent
/// declares f = (x-a)^sigma * (smooth) near a and routes the first unit
/// interval through the endpoint-singular rule.
IntegrationReport integrate_semi_infinite(const Fn& f, double a,
                                          const QuadratureSpec& spec = {},
                                          std::optional<PowerTail> tail = {});

/// Finite-interval double-exponential (tanh-sinh) rule; tolerates integrable
/// endpoint singularities on either side.  Used as the independent oracle
/// engine.
IntegrationReport integrate_tanh_sinh(const Fn& f, double a, double b,
                                      const QuadratureSpec& spec = {});

/// Normalized mean over S^(n-1), n in {2,3}: trapezoid rule on the circle,
/// Gauss-Legendre (cosine of colatitude) x trapezoid (azimuth) product on S^2.
using SphereFn = std::function<double(const std::array<double, 3>&)>;
IntegrationReport integrate_sphere(int n, const SphereFn& g,
                                   const QuadratureSpec& spec = {});

} // namespace geokern::quad
