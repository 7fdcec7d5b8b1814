#include "geokern/fracint.hpp"

#include "geokern/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace geokern::fracint {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

specfun::PolyId poly_id(double lambda) {
  return lambda == 0.0 ? specfun::PolyId::Chebyshev : specfun::PolyId::Gegenbauer;
}

// Prefactor of the family: 1/c_{lambda,m}, or 2/sqrt(pi) for the Chebyshev
// operators.
double prefactor(double lambda, int m) {
  if (lambda == 0.0) return 2.0 / std::sqrt(kPi);
  return 1.0 / specfun::norm_const(lambda, m);
}

void check_params(const OperatorParams& p) {
  if (!(p.lambda > -0.5))
    throw std::domain_error("gc_apply: requires lambda > -1/2");
  if (p.m < 0) throw std::domain_error("gc_apply: requires m >= 0");
}

double kernel_poly(double lambda, int m, double arg) {
  return specfun::eval_poly(poly_id(lambda), lambda, m, arg);
}

// s^m * P_m(1/s): a polynomial in s^2, evaluated stably for s in (0,1].
double reversed_kernel(double lambda, int m, double s) {
  return std::pow(s, m) * kernel_poly(lambda, m, 1.0 / s);
}

struct Integrand {
  quad::Fn smooth;     // smooth factor against the Jacobi weight
  double alpha;        // exponent at s = 1
  double beta;         // exponent at s = 0
  double prefix;       // multiplies the (0,1) integral
};

// All eight operators as integral_0^1 s^beta (1-s)^alpha * smooth(s) ds times
// prefix.  For globally-pure-power profiles the residual power of s moves
// into beta and `smooth` stays analytic on [0,1].
Integrand build_integrand(const OperatorParams& p, const Profile& f, double x,
                          bool unsigned_mass) {
  const double lam = p.lambda;
  const int m = p.m;
  const int par = m % 2; // lowest power of s in P_m(s)
  const double K = prefactor(lam, m);
  Integrand out;
  out.alpha = lam - 0.5;
  out.prefix = unsigned_mass ? std::abs(K) : K;

  const bool pure = f.global_pure_power && f.pure_power_tail.has_value();
  const double pc = pure ? f.pure_power_tail->coefficient : 0.0;
  const double pp = pure ? f.pure_power_tail->exponent : 0.0;
  // The pure-power factor scales the whole integral; kept out of `smooth` so
  // an annihilated integral reads as zero at the quadrature's own scale
  // instead of as cancellation noise under a large multiplier.
  if (pure) out.prefix *= pc * std::pow(x, pp);

  auto absify = [unsigned_mass](double v) { return unsigned_mass ? std::abs(v) : v; };

  if (p.side == Side::Right && !p.starred) {
    out.prefix *= std::pow(x, 2.0 * lam + 1.0);
    if (pure) {
      out.beta = -2.0 * lam - 2.0 - pp + par;
      out.smooth = [=](double s) {
        double poly = par ? kernel_poly(lam, m, s) / s : kernel_poly(lam, m, s);
        return absify(std::pow(1.0 + s, lam - 0.5) * poly);
      };
    } else {
      out.beta = 0.0;
      out.smooth = [=, &f](double s) {
        return absify(std::pow(1.0 + s, lam - 0.5) * kernel_poly(lam, m, s) *
                      std::pow(s, -2.0 * lam - 2.0) * f(x / s));
      };
    }
  } else if (p.side == Side::Right && p.starred) {
    if (pure) {
      out.beta = -double(m) - pp;
      out.smooth = [=](double s) {
        return absify(std::pow(1.0 + s, lam - 0.5) * reversed_kernel(lam, m, s));
      };
    } else {
      out.beta = 0.0;
      out.smooth = [=, &f](double s) {
        return absify(std::pow(1.0 + s, lam - 0.5) * reversed_kernel(lam, m, s) *
                      std::pow(s, -double(m)) * f(x / s));
      };
    }
  } else if (p.side == Side::Left && !p.starred) {
    if (pure) {
      out.beta = pp + par;
      out.smooth = [=](double s) {
        double poly = par ? kernel_poly(lam, m, s) / s : kernel_poly(lam, m, s);
        return absify(std::pow(1.0 + s, lam - 0.5) * poly);
      };
    } else {
      out.beta = par;
      out.smooth = [=, &f](double s) {
        double poly = par ? kernel_poly(lam, m, s) / s : kernel_poly(lam, m, s);
        return absify(std::pow(1.0 + s, lam - 0.5) * poly * f(x * s));
      };
    }
  } else { // Left, starred
    out.prefix *= std::pow(x, 2.0 * lam + 1.0);
    if (pure) {
      out.beta = pp + 1.0 - double(m);
      out.smooth = [=](double s) {
        return absify(std::pow(1.0 + s, lam - 0.5) * reversed_kernel(lam, m, s));
      };
    } else {
      out.beta = 0.0;
      out.smooth = [=, &f](double s) {
        return absify(std::pow(1.0 + s, lam - 0.5) * reversed_kernel(lam, m, s) *
                      std::pow(s, 1.0 - double(m)) * f(x * s));
      };
    }
  }
  return out;
}

} // namespace

double WeightSpec::operator()(double t) const {
  bool even = m % 2 == 0;
  if (kind == Kind::KappaLeft) {
    if (even) return 1.0;
    if (lambda < 0.0) return std::pow(t, 1.0 + 2.0 * lambda);
    if (lambda == 0.0) return t * (1.0 + std::abs(std::log(t)));
    return t;
  }
  if (even) return std::pow(t, 2.0 * lambda);
  if (lambda < 0.0) return 1.0 / t;
  if (lambda == 0.0) return std::pow(t, 2.0 * lambda - 1.0) * (1.0 + std::abs(std::log(t)));
  return std::pow(t, 2.0 * lambda - 1.0);
}

Profile Profile::gaussian() {
  Profile p;
  p.eval = [](double t) { return std::exp(-t * t); };
  p.zero_exponent = 0.0;
  p.infinity_exponent = kInf;
  return p;
}

Profile Profile::exp_decay() {
  Profile p;
  p.eval = [](double t) { return std::exp(-t); };
  p.zero_exponent = 0.0;
  p.infinity_exponent = kInf;
  return p;
}

Profile Profile::power(double pw, double coefficient) {
  Profile p;
  p.eval = [=](double t) { return coefficient * std::pow(t, pw); };
  p.zero_exponent = pw;
  p.infinity_exponent = -pw;
  p.pure_power_tail = quad::PowerTail{coefficient, pw};
  p.global_pure_power = true;
  return p;
}

Profile Profile::bump(double a, double b) {
  if (!(0.0 <= a && a < b))
    throw std::domain_error("Profile::bump: requires 0 <= a < b");
  double mid = 0.5 * (a + b);
  double peak = std::exp(-1.0 / ((mid - a) * (b - mid)));
  Profile p;
  p.eval = [=](double t) {
    if (t <= a || t >= b) return 0.0;
    return std::exp(-1.0 / ((t - a) * (b - t))) / peak;
  };
  p.zero_exponent = 0.0;
  p.infinity_exponent = kInf;
  p.support = std::make_pair(a, b);
  return p;
}

Profile Profile::sum(std::vector<std::pair<double, Profile>> terms) {
  if (terms.empty()) throw std::domain_error("Profile::sum: empty term list");
  Profile p;
  auto shared = std::make_shared<std::vector<std::pair<double, Profile>>>(std::move(terms));
  p.eval = [shared](double t) {
    double acc = 0.0;
    for (const auto& [w, q] : *shared) acc += w * q.eval(t);
    return acc;
  };
  p.zero_exponent = kInf;
  p.infinity_exponent = kInf;
  bool all_support = true;
  double lo = kInf, hi = -kInf;
  for (const auto& [w, q] : *shared) {
    p.zero_exponent = std::min(p.zero_exponent, q.zero_exponent);
    p.infinity_exponent = std::min(p.infinity_exponent, q.infinity_exponent);
    if (q.support) {
      lo = std::min(lo, q.support->first);
      hi = std::max(hi, q.support->second);
    } else {
      all_support = false;
    }
  }
  if (all_support) p.support = std::make_pair(lo, hi);
  return p;
}

void validate_profile(const Profile& f) {
  if (!f.eval) throw std::domain_error("validate_profile: profile has no eval");
  auto grows = [](const std::vector<double>& ratios) {
    double first = ratios.front(), last = ratios.back();
    return last > 50.0 * std::max(first, 1e-12) && last > 1.0;
  };
  if (std::isfinite(f.zero_exponent)) {
    std::vector<double> ratios;
    for (double t : {0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001})
      ratios.push_back(std::abs(f(t)) / std::pow(t, f.zero_exponent));
    if (grows(ratios))
      throw std::domain_error(
          "validate_profile: sampled growth near 0 exceeds the declared "
          "zero_exponent");
  }
  if (std::isfinite(f.infinity_exponent)) {
    std::vector<double> ratios;
    for (double t : {10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0})
      ratios.push_back(std::abs(f(t)) * std::pow(t, f.infinity_exponent));
    if (grows(ratios))
      throw std::domain_error(
          "validate_profile: sampled decay at infinity is slower than the "
          "declared infinity_exponent");
  }
}

void check_preconditions(const OperatorParams& p, const Profile& f) {
  check_params(p);
  int eta = p.m % 2;
  std::ostringstream msg;
  if (p.side == Side::Right) {
    if (f.support && std::isfinite(f.support->second)) return; // compact support
    double q = f.infinity_exponent;
    if (!p.starred) {
      if (!(q > 2.0 * p.lambda + 1.0 - eta)) {
        msg << "right-sided convergence condition violated: decay exponent " << q
            << " must exceed 2*lambda+1-eta = " << 2.0 * p.lambda + 1.0 - eta;
        throw std::domain_error(msg.str());
      }
    } else {
      if (!(q > double(p.m) - 1.0)) {
        msg << "starred right-sided convergence condition violated: decay exponent "
            << q << " must exceed m-1 = " << p.m - 1;
        throw std::domain_error(msg.str());
      }
    }
  } else {
    if (f.support && f.support->first > 0.0) return;
    double z = f.zero_exponent;
    if (!p.starred) {
      if (!(z > -1.0 - eta)) {
        msg << "left-sided convergence condition violated: zero exponent " << z
            << " must exceed -1-eta = " << -1.0 - eta;
        throw std::domain_error(msg.str());
      }
    } else {
      if (!(z > double(p.m) - 2.0)) {
        msg << "starred left-sided convergence condition violated: zero exponent "
            << z << " must exceed m-2 = " << p.m - 2;
        throw std::domain_error(msg.str());
      }
    }
  }
}

ApplyResult gc_apply_report(const OperatorParams& p, const Profile& f, double x,
                            const quad::QuadratureSpec& spec) {
  check_preconditions(p, f);
  if (!(x > 0.0)) throw std::domain_error("gc_apply: requires x > 0");
  Integrand ig = build_integrand(p, f, x, false);
  if (!(ig.beta > -1.0))
    throw std::domain_error("gc_apply: profile power incompatible with operator "
                            "(endpoint exponent at s=0 not integrable)");
  ApplyResult res;
  res.report = quad::integrate_jacobi01(ig.smooth, ig.alpha, ig.beta, spec);
  res.value = ig.prefix * res.report.value;
  res.report.value = res.value;
  res.report.error_estimate *= std::abs(ig.prefix);
  return res;
}

double gc_apply(const OperatorParams& p, const Profile& f, double x,
                const quad::QuadratureSpec& spec) {
  ApplyResult res = gc_apply_report(p, f, x, spec);
  if (!res.report.converged) {
    std::ostringstream msg;
    msg << "gc_apply: quadrature did not converge (value " << res.value
        << ", error estimate " << res.report.error_estimate << ", nodes "
        << res.report.nodes_used << ")";
    throw std::runtime_error(msg.str());
  }
  return res.value;
}

double gc_unsigned_mass(const OperatorParams& p, const Profile& f, double x,
                        const quad::QuadratureSpec& spec) {
  check_preconditions(p, f);
  if (!(x > 0.0)) throw std::domain_error("gc_unsigned_mass: requires x > 0");
  Integrand ig = build_integrand(p, f, x, true);
  // |smooth| has kinks at the positive roots of the kernel polynomial (the
  // starred variants see the polynomial reversed, with no roots inside the
  // interval).  Splitting there keeps each piece analytic, so the small
  // cached rules converge instead of the doubling loop grinding on a kink.
  std::vector<double> cuts;
  if (!p.starred && p.m >= 2) {
    const auto& roots = quad::gauss_jacobi(p.m, p.lambda - 0.5, p.lambda - 0.5).x;
    for (double r : roots)
      if (r > 1e-12 && r < 1.0 - 1e-12) cuts.push_back(r);
    std::sort(cuts.begin(), cuts.end());
  }
  if (cuts.empty()) {
    quad::IntegrationReport rep =
        quad::integrate_jacobi01(ig.smooth, ig.alpha, ig.beta, spec);
    return std::abs(ig.prefix) * rep.value;
  }
  double total = 0.0;
  double lo = 0.0;
  for (std::size_t i = 0; i <= cuts.size(); ++i) {
    double hi = i < cuts.size() ? cuts[i] : 1.0;
    if (i == 0) {
      auto g = [&](double u) {
        double s = hi * u;
        return std::pow(1.0 - s, ig.alpha) * ig.smooth(s);
      };
      total += std::pow(hi, ig.beta + 1.0) *
               quad::integrate_jacobi01(g, 0.0, ig.beta, spec).value;
    } else if (i == cuts.size()) {
      double w = 1.0 - lo;
      auto g = [&](double u) {
        double s = 1.0 - w * u;
        return std::pow(s, ig.beta) * ig.smooth(s);
      };
      total += std::pow(w, ig.alpha + 1.0) *
               quad::integrate_jacobi01(g, 0.0, ig.alpha, spec).value;
    } else {
      double w = hi - lo;
      auto g = [&](double u) {
        double s = lo + w * u;
        return std::pow(s, ig.beta) * std::pow(1.0 - s, ig.alpha) * ig.smooth(s);
      };
      total += w * quad::integrate_jacobi01(g, 0.0, 0.0, spec).value;
    }
    lo = hi;
  }
  return std::abs(ig.prefix) * total;
}

double rl_integral(double alpha, const Profile& f, double t,
                   const quad::QuadratureSpec& spec) {
  if (!(alpha > 0.0)) throw std::domain_error("rl_integral: requires alpha > 0");
  double ga = specfun::gamma_fn(alpha);
  if (f.support) {
    double b = f.support->second;
    if (t >= b) return 0.0;
    double L = b - t;
    auto smooth = [&](double v) { return f(t + L * v); };
    quad::IntegrationReport rep =
        quad::integrate_jacobi01(smooth, 0.0, alpha - 1.0, spec);
    return std::pow(L, alpha) * rep.value / ga;
  }
  double L = std::max(1.0, t);
  auto head_smooth = [&](double v) { return f(t + L * v); };
  quad::IntegrationReport head =
      quad::integrate_jacobi01(head_smooth, 0.0, alpha - 1.0, spec);
  auto tail_fn = [&](double u) { return f(t + u) * std::pow(u, alpha - 1.0); };
  std::optional<quad::PowerTail> tail;
  if (f.pure_power_tail && f.pure_power_tail->exponent + alpha - 1.0 < -1.0)
    tail = quad::PowerTail{f.pure_power_tail->coefficient,
                           f.pure_power_tail->exponent + alpha - 1.0};
  quad::IntegrationReport rest = quad::integrate_semi_infinite(tail_fn, L, spec, tail);
  return (std::pow(L, alpha) * head.value + rest.value) / ga;
}

double rl_derivative(double alpha, const Profile& f, double t,
                     const quad::QuadratureSpec& spec) {
  if (!(alpha > 0.0)) throw std::domain_error("rl_derivative: requires alpha > 0");
  int M = int(std::ceil(alpha));
  bool integer_order = double(M) == alpha;
  std::function<double(double)> g;
  if (integer_order) {
    g = [&](double tau) { return f(tau); };
  } else {
    g = [&, M](double tau) { return rl_integral(double(M) - alpha, f, tau, spec); };
  }
  double noise = integer_order ? 1e-15 : 1e-12;
  double h = std::pow(noise, 1.0 / (4.0 + M)) * std::max(1.0, std::abs(t));
  if (t > 0.0) h = std::min(h, 0.2 * t); // keep the stencil inside (0, inf)

  auto stencil = [&](double hh) -> double {
    switch (M) {
      case 1:
        return (g(t + hh) - g(t - hh)) / (2.0 * hh);
      case 2:
        return (g(t + hh) - 2.0 * g(t) + g(t - hh)) / (hh * hh);
      case 3:
        return (g(t + 2.0 * hh) - 2.0 * g(t + hh) + 2.0 * g(t - hh) - g(t - 2.0 * hh)) /
               (2.0 * hh * hh * hh);
      case 4:
        return (g(t + 2.0 * hh) - 4.0 * g(t + hh) + 6.0 * g(t) - 4.0 * g(t - hh) +
                g(t - 2.0 * hh)) /
               (hh * hh * hh * hh);
      default:
        throw std::domain_error("rl_derivative: order ceil(alpha) > 4 unsupported");
    }
  };
  auto richardson = [&](double hh) {
    return (4.0 * stencil(0.5 * hh) - stencil(hh)) / 3.0;
  };
  double r1 = richardson(h);
  double r2 = richardson(0.5 * h);
  if (std::abs(r2 - r1) > std::max(1e-5, 1e-4 * std::abs(r2))) {
    std::ostringstream msg;
    msg << "rl_derivative: step-halving disagreement " << std::abs(r2 - r1)
        << " at t = " << t << "; widen the quadrature spec or smooth the profile";
    throw std::runtime_error(msg.str());
  }
  double sign = (M % 2 == 0) ? 1.0 : -1.0;
  return sign * r2;
}

double compose_identity_residual(double lambda, int m, const Profile& f,
                                 const std::vector<double>& t_grid,
                                 const quad::QuadratureSpec& spec) {
  if (m < 2)
    throw std::domain_error("compose_identity_residual: requires m >= 2");
  bool compact = f.support && std::isfinite(f.support->second);
  if (!compact && !(f.infinity_exponent > 2.0 * lambda + m)) {
    std::ostringstream msg;
    msg << "compose_identity_residual: decay exponent " << f.infinity_exponent
        << " must exceed 2*lambda+m = " << 2.0 * lambda + m;
    throw std::domain_error(msg.str());
  }
  OperatorParams inner{lambda, m, Side::Right, false};
  OperatorParams outer{lambda, m, Side::Right, true};
  Profile g;
  g.eval = [=, &f](double r) { return gc_apply(inner, f, r, spec); };
  g.zero_exponent = 0.0;
  g.infinity_exponent = std::isfinite(f.infinity_exponent)
                            ? f.infinity_exponent - 2.0 * lambda - 1.0
                            : f.infinity_exponent;
  double worst = 0.0;
  for (double t : t_grid) {
    double lhs = gc_apply(outer, g, t, spec);
    double rhs = std::pow(2.0, 2.0 * lambda + 1.0) *
                 rl_integral(2.0 * lambda + 1.0, f, t, spec);
    double rel = std::abs(lhs - rhs) / (std::abs(rhs) + spec.abs_tol);
    worst = std::max(worst, rel);
  }
  return worst;
}

ReflectResult reflect(ReflectMap side_map, double lambda, int m,
                      const Profile& f, const std::vector<double>& r_grid,
                      const quad::QuadratureSpec& spec) {
  const bool starred = side_map == ReflectMap::LeftFromRight_starred;
  ReflectResult out;
  Profile& t = out.transformed;
  double z0 = f.zero_exponent, q = f.infinity_exponent;
  auto fcopy = std::make_shared<Profile>(f);
  if (!starred) {
    t.eval = [=](double s) { return std::pow(s, -2.0 * lambda - 2.0) * fcopy->eval(1.0 / s); };
    t.zero_exponent = q - 2.0 * lambda - 2.0;
    t.infinity_exponent = z0 + 2.0 * lambda + 2.0;
    if (f.global_pure_power && f.pure_power_tail) {
      t.global_pure_power = true;
      t.pure_power_tail = quad::PowerTail{f.pure_power_tail->coefficient,
                                          -2.0 * lambda - 2.0 - f.pure_power_tail->exponent};
    }
  } else {
    t.eval = [=](double s) { return fcopy->eval(1.0 / s) / s; };
    t.zero_exponent = q - 1.0;
    t.infinity_exponent = z0 + 1.0;
    if (f.global_pure_power && f.pure_power_tail) {
      t.global_pure_power = true;
      t.pure_power_tail =
          quad::PowerTail{f.pure_power_tail->coefficient, -1.0 - f.pure_power_tail->exponent};
    }
  }
  if (f.support && f.support->first > 0.0 && std::isfinite(f.support->second))
    t.support = std::make_pair(1.0 / f.support->second, 1.0 / f.support->first);

  OperatorParams left{lambda, m, Side::Left, starred};
  OperatorParams right{lambda, m, Side::Right, starred};
  out.max_residual = 0.0;
  for (double r : r_grid) {
    double lhs = gc_apply(left, f, r, spec);
    double rhs = starred
                     ? std::pow(r, 2.0 * lambda) * gc_apply(right, t, 1.0 / r, spec)
                     : gc_apply(right, t, 1.0 / r, spec) / r;
    double rel = std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-14});
    out.max_residual = std::max(out.max_residual, rel);
  }
  return out;
}

std::complex<double> mellin_symbol_continued(double lambda, int m,
                                             std::complex<double> z) {
  if (!(lambda > -0.5))
    throw std::domain_error("mellin_symbol: requires lambda > -1/2");
  using C = std::complex<double>;
  C a = 0.5 * (z + 1.0 - double(m));
  C b = lambda + 0.5 * (z + 1.0 + double(m));
  C c = lambda + 0.5 * (z + 1.0);
  C d = lambda + 0.5 * (z + 2.0);
  return std::exp(specfun::log_gamma(a) + specfun::log_gamma(b) -
                  specfun::log_gamma(c) - specfun::log_gamma(d));
}

std::complex<double> mellin_symbol(double lambda, int m, std::complex<double> z) {
  if (!(z.real() > double(m) - 1.0)) {
    std::ostringstream msg;
    msg << "mellin_symbol: Re z = " << z.real() << " outside the half-plane Re z > "
        << m - 1;
    throw std::domain_error(msg.str());
  }
  return mellin_symbol_continued(lambda, m, z);
}

double mellin_symbol_numeric(double lambda, int m, double z,
                             const quad::QuadratureSpec& spec) {
  if (!(z > double(m) - 1.0))
    throw std::domain_error("mellin_symbol_numeric: requires z > m-1");
  double K = prefactor(lambda, m);
  auto smooth = [=](double s) {
    return std::pow(1.0 + s, lambda - 0.5) * reversed_kernel(lambda, m, s);
  };
  quad::IntegrationReport rep =
      quad::integrate_jacobi01(smooth, lambda - 0.5, z - double(m), spec);
  return K * rep.value;
}

double moment(const Profile& phi, double power, const quad::QuadratureSpec& spec) {
  if (!phi.support)
    throw std::domain_error("moment: profile must declare compact support");
  auto [a, b] = *phi.support;
  auto fn = [&](double t) { return std::pow(t, power) * phi(t); };
  quad::IntegrationReport rep = quad::integrate_tanh_sinh(fn, a, b, spec);
  return rep.value;
}

namespace {

double unsigned_moment(const Profile& phi, double power,
                       const quad::QuadratureSpec& spec) {
  auto [a, b] = *phi.support;
  auto fn = [&](double t) { return std::pow(t, power) * std::abs(phi(t)); };
  quad::IntegrationReport rep = quad::integrate_tanh_sinh(fn, a, b, spec);
  return rep.value;
}

} // namespace

PsiResult reconstruct_psi(double lambda, int m, const Profile& phi,
                          const quad::QuadratureSpec& spec) {
  if (!phi.support)
    throw std::domain_error("reconstruct_psi: phi must have compact support");
  auto [a, b] = *phi.support;
  if (!(a > 0.0))
    throw std::domain_error("reconstruct_psi: support must stay away from 0");
  int M = m / 2;
  for (int k = 1; k <= M; ++k) {
    double mk = moment(phi, double(m - 2 * k), spec);
    double mass = unsigned_moment(phi, double(m - 2 * k), spec);
    if (std::abs(mk) > 1e-9 * std::max(mass, 1e-30)) {
      std::ostringstream msg;
      msg << "reconstruct_psi: moment condition violated for power " << m - 2 * k
          << " (relative moment " << std::abs(mk) / std::max(mass, 1e-30) << ")";
      throw std::domain_error(msg.str());
    }
  }
  OperatorParams star{lambda, m, Side::Right, true};
  auto phicopy = std::make_shared<Profile>(phi);
  Profile h;
  h.eval = [=](double t) {
    if (t >= b) return 0.0;
    return gc_apply(star, *phicopy, t, spec);
  };
  h.zero_exponent = 1.0 - double(m);
  h.infinity_exponent = kInf;
  h.support = std::make_pair(0.0, b);

  double alpha = 2.0 * lambda + 1.0;
  double scale = std::pow(2.0, -alpha);
  auto hptr = std::make_shared<Profile>(h);
  PsiResult out;
  out.support_bound = b;
  out.psi.eval = [=](double t) {
    return scale * rl_derivative(alpha, *hptr, t, spec);
  };
  out.psi.zero_exponent = 0.0;
  out.psi.infinity_exponent = kInf;
  out.psi.support = std::make_pair(0.0, b);
  return out;
}

} // namespace geokern::fracint
