#include "geokern/quadrature.hpp"

#include "geokern/specfun.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace geokern::quad {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Recurrence coefficients of the monic Jacobi polynomials for
// (1-x)^alpha (1+x)^beta: diagonal a_k and squared off-diagonal b_k.
double jacobi_a(int k, double alpha, double beta) {
  if (k == 0) return (beta - alpha) / (alpha + beta + 2.0);
  double s = 2.0 * k + alpha + beta;
  return (beta * beta - alpha * alpha) / (s * (s + 2.0));
}

double jacobi_b(int k, double alpha, double beta) {
  // k >= 1
  if (k == 1)
    return 4.0 * (1.0 + alpha) * (1.0 + beta) /
           ((2.0 + alpha + beta) * (2.0 + alpha + beta) * (3.0 + alpha + beta));
  double s = 2.0 * k + alpha + beta;
  return 4.0 * k * (k + alpha) * (k + beta) * (k + alpha + beta) /
         (s * s * (s + 1.0) * (s - 1.0));
}

double jacobi_mu0(double alpha, double beta) {
  return std::pow(2.0, alpha + beta + 1.0) * specfun::gamma_fn(alpha + 1.0) *
         specfun::gamma_fn(beta + 1.0) / specfun::gamma_fn(alpha + beta + 2.0);
}

GaussRule build_gauss_jacobi(int n, double alpha, double beta) {
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) diag[k] = jacobi_a(k, alpha, beta);
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(jacobi_b(k, alpha, beta));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  GaussRule rule;
  rule.x.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);

  // w_i = mu0 / sum_k p_k(x_i)^2 over the orthonormal polynomials.
  double mu0 = jacobi_mu0(alpha, beta);
  rule.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = rule.x[i];
    double pm1 = 0.0, p = 1.0 / std::sqrt(mu0);
    double sum = p * p;
    for (int k = 0; k + 1 < n; ++k) {
      double pnext = ((x - diag[k]) * p - (k > 0 ? sub[k - 1] : 0.0) * pm1) / sub[k];
      pm1 = p;
      p = pnext;
      sum += p * p;
    }
    rule.w[i] = 1.0 / sum;
  }
  return rule;
}

std::map<std::tuple<long long, long long, int>, GaussRule>& rule_cache() {
  static std::map<std::tuple<long long, long long, int>, GaussRule> cache;
  return cache;
}
std::mutex& rule_mutex() {
  static std::mutex m;
  return m;
}

long long key_of(double v) {
  long long k;
  static_assert(sizeof(k) == sizeof(v));
  std::memcpy(&k, &v, sizeof(k));
  return k;
}

bool agreed(double current, double previous, const QuadratureSpec& spec) {
  double diff = std::abs(current - previous);
  return diff <= std::max(spec.abs_tol, spec.rel_tol * std::abs(current));
}

} // namespace

const GaussRule& gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw std::domain_error("gauss_jacobi: n must be >= 1");
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw std::domain_error("gauss_jacobi: weight exponents must exceed -1");
  auto key = std::make_tuple(key_of(alpha), key_of(beta), n);
  std::lock_guard<std::mutex> lock(rule_mutex());
  auto it = rule_cache().find(key);
  if (it == rule_cache().end())
    it = rule_cache().emplace(key, build_gauss_jacobi(n, alpha, beta)).first;
  return it->second;
}

const GaussRule& gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

IntegrationReport integrate_jacobi01(const Fn& g, double alpha, double beta,
                                     const QuadratureSpec& spec) {
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw std::domain_error("integrate_jacobi01: exponents must exceed -1");
  IntegrationReport rep;
  double prev = std::numeric_limits<double>::quiet_NaN();
  double scale = std::pow(0.5, alpha + beta + 1.0);
  // Building an n-point rule costs O(n^2), so the doubling loop stops early
  // and hands anything still unresolved to tanh-sinh, which needs no rule.
  const int gauss_cap = std::min(spec.max_nodes, 2048);
  for (int n = std::max(spec.nodes, 4); n <= gauss_cap; n *= 2) {
    const GaussRule& rule = gauss_jacobi(n, alpha, beta);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += rule.w[i] * g(0.5 * (1.0 + rule.x[i]));
    acc *= scale;
    rep.nodes_used += n;
    rep.error_estimate = std::abs(acc - prev);
    rep.value = acc;
    if (!std::isnan(prev) && agreed(acc, prev, spec)) {
      rep.converged = true;
      return rep;
    }
    prev = acc;
  }
  auto weighted = [&](double s) {
    return std::pow(s, beta) * std::pow(1.0 - s, alpha) * g(s);
  };
  QuadratureSpec wide = spec;
  wide.max_nodes = std::max(spec.max_nodes, 1 << 17);
  IntegrationReport ts = integrate_tanh_sinh(weighted, 0.0, 1.0, wide);
  ts.nodes_used += rep.nodes_used;
  return ts;
}

IntegrationReport integrate_singular_endpoint(const Fn& g, double a, double b,
                                              double alpha, Endpoint endpoint,
                                              const QuadratureSpec& spec) {
  if (!(b > a)) throw std::domain_error("integrate_singular_endpoint: requires b > a");
  if (!(alpha > -1.0))
    throw std::domain_error("integrate_singular_endpoint: alpha must exceed -1");
  double h = b - a;
  if (spec.rule == Rule::TanhSinh) {
    auto full = [&](double x) {
      double d = endpoint == Endpoint::Upper ? b - x : x - a;
      return g(x) * std::pow(d, alpha);
    };
    return integrate_tanh_sinh(full, a, b, spec);
  }
  // Gauss-Jacobi route: weight (1-x)^alpha at Upper, (1+x)^alpha at Lower.
  double au = endpoint == Endpoint::Upper ? alpha : 0.0;
  double bl = endpoint == Endpoint::Lower ? alpha : 0.0;
  auto smooth = [&](double s) { return g(a + h * s); };
  IntegrationReport rep = integrate_jacobi01(smooth, au, bl, spec);
  rep.value *= std::pow(h, alpha + 1.0);
  rep.error_estimate *= std::pow(h, alpha + 1.0);
  return rep;
}

IntegrationReport integrate_tanh_sinh(const Fn& f, double a, double b,
                                      const QuadratureSpec& spec) {
  if (!(b > a)) throw std::domain_error("integrate_tanh_sinh: requires b > a");
  double h = 0.5 * (b - a);
  const double umax = 3.8;
  IntegrationReport rep;
  double prev = std::numeric_limits<double>::quiet_NaN();
  double step = 0.5;
  double acc = 0.0;
  // Level 0 seeds the trapezoid sum; refinements add midpoints only.
  auto term = [&](double u) {
    double sh = 0.5 * kPi * std::sinh(u);
    // Offset from the near endpoint, 1 - |tanh(sh)| without the cancellation
    // that would otherwise pin nodes to the endpoint once tanh saturates.
    double q = std::exp(-2.0 * std::abs(sh));
    double delta = h * 2.0 * q / (1.0 + q);
    double x = u < 0.0 ? a + delta : b - delta;
    if (x <= a || x >= b) return 0.0; // underflowed into an endpoint
    double ch = std::cosh(sh);
    double w = 0.5 * kPi * std::cosh(u) / (ch * ch);
    double v = f(x) * w;
    return std::isfinite(v) ? v : 0.0;
  };
  acc = term(0.0);
  for (double u = step; u <= umax; u += step) acc += term(u) + term(-u);
  prev = acc * step * h;
  long long evals = static_cast<long long>(2 * umax / step) + 1;
  while (evals < spec.max_nodes) {
    step *= 0.5;
    double add = 0.0;
    for (double u = step; u <= umax; u += 2.0 * step) {
      add += term(u) + term(-u);
      evals += 2;
    }
    acc = acc + add;
    double cur = acc * step * h;
    rep.nodes_used = evals;
    rep.error_estimate = std::abs(cur - prev);
    rep.value = cur;
    if (agreed(cur, prev, spec)) {
      rep.converged = true;
      break;
    }
    prev = cur;
  }
  return rep;
}

IntegrationReport integrate_semi_infinite(const Fn& f, double a,
                                          const QuadratureSpec& spec,
                                          std::optional<PowerTail> tail) {
  IntegrationReport rep;
  if (spec.singularity_exponent != 0.0) {
    // Declared algebraic behavior at a: f = (x-a)^sigma * smooth near a.
    double sigma = spec.singularity_exponent;
    auto smooth = [&](double x) {
      double d = x - a;
      return d > 0.0 ? f(x) / std::pow(d, sigma) : 0.0;
    };
    IntegrationReport head =
        integrate_singular_endpoint(smooth, a, a + 1.0, sigma, Endpoint::Lower, spec);
    QuadratureSpec rest = spec;
    rest.singularity_exponent = 0.0;
    IntegrationReport tail_rep = integrate_semi_infinite(f, a + 1.0, rest, tail);
    rep.value = head.value + tail_rep.value;
    rep.error_estimate = head.error_estimate + tail_rep.error_estimate;
    rep.nodes_used = head.nodes_used + tail_rep.nodes_used;
    rep.converged = head.converged && tail_rep.converged;
    return rep;
  }
  if (tail) {
    if (!(tail->exponent < -1.0))
      throw std::domain_error("integrate_semi_infinite: power tail needs exponent < -1");
    double R = std::max(spec.truncation_radius, a + 1.0);
    double closure =
        -tail->coefficient * std::pow(R, tail->exponent + 1.0) / (tail->exponent + 1.0);
    // Finite part on [a, R] via the substitution x = a + (R-a) s.
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int n = std::max(spec.nodes, 4); n <= spec.max_nodes; n *= 2) {
      const GaussRule& rule = gauss_legendre(n);
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        double s = 0.5 * (1.0 + rule.x[i]);
        acc += rule.w[i] * f(a + (R - a) * s);
      }
      acc *= 0.5 * (R - a);
      rep.nodes_used += n;
      rep.error_estimate = std::abs(acc - prev);
      rep.value = acc + closure;
      if (!std::isnan(prev) && agreed(acc, prev, spec)) {
        rep.converged = true;
        break;
      }
      prev = acc;
    }
    return rep;
  }
  // x = a + u/(1-u); Gauss-Legendre nodes stay interior so the endpoint is
  // never touched, which lets divergent integrands show up as nonconvergence.
  auto mapped = [&](double u) {
    double om = 1.0 - u;
    double v = f(a + u / om) / (om * om);
    return std::isfinite(v) ? v : 0.0;
  };
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int n = std::max(spec.nodes, 4); n <= spec.max_nodes; n *= 2) {
    const GaussRule& rule = gauss_legendre(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += rule.w[i] * mapped(0.5 * (1.0 + rule.x[i]));
    acc *= 0.5;
    rep.nodes_used += n;
    rep.error_estimate = std::abs(acc - prev);
    rep.value = acc;
    if (!std::isnan(prev) && agreed(acc, prev, spec)) {
      rep.converged = true;
      break;
    }
    prev = acc;
  }
  return rep;
}

IntegrationReport integrate_sphere(int n, const SphereFn& g,
                                   const QuadratureSpec& spec) {
  if (n != 2 && n != 3)
    throw std::domain_error("integrate_sphere: n must be 2 or 3");
  IntegrationReport rep;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int N = std::max(spec.nodes, 4); N <= spec.max_nodes; N *= 2) {
    double acc = 0.0;
    if (n == 2) {
      for (int i = 0; i < N; ++i) {
        double phi = 2.0 * kPi * (i + 0.5) / N;
        acc += g({std::cos(phi), std::sin(phi), 0.0});
      }
      acc /= N;
      rep.nodes_used += N;
    } else {
      const GaussRule& rule = gauss_legendre(N);
      int Nphi = 2 * N;
      for (int i = 0; i < N; ++i) {
        double cth = rule.x[i];
        double sth = std::sqrt(std::max(0.0, 1.0 - cth * cth));
        double ring = 0.0;
        for (int j = 0; j < Nphi; ++j) {
          double phi = 2.0 * kPi * (j + 0.5) / Nphi;
          ring += g({sth * std::cos(phi), sth * std::sin(phi), cth});
        }
        acc += rule.w[i] * ring / Nphi;
      }
      acc *= 0.5;
      rep.nodes_used += (long long)N * Nphi;
    }
    rep.error_estimate = std::abs(acc - prev);
    rep.value = acc;
    if (!std::isnan(prev) && agreed(acc, prev, spec)) {
      rep.converged = true;
      break;
    }
    prev = acc;
  }
  return rep;
}

} // namespace geokern::quad
