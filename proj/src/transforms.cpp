#include "geokern/transforms.hpp"

#include "geokern/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace geokern::transforms {

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec axpy(double a, const Vec& x, double b, const Vec& y) {
  return {a * x[0] + b * y[0], a * x[1] + b * y[1], a * x[2] + b * y[2],
          a * x[3] + b * y[3]};
}

Vec scale(double a, const Vec& x) {
  return {a * x[0], a * x[1], a * x[2], a * x[3]};
}

double dot_n(const Vec& a, const Vec& b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double norm_n(const Vec& a, int n) { return std::sqrt(dot_n(a, a, n)); }

double dual_factor(double lambda) {
  return std::tgamma(lambda + 1.0) / std::sqrt(kPi);
}

/// Unit vector orthogonal to theta (n components), deterministic choice.
Vec any_perp(const Vec& theta, int n) {
  int k = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(theta[i]) < std::abs(theta[k])) k = i;
  Vec e = {0.0, 0.0, 0.0, 0.0};
  e[k] = 1.0;
  double c = dot_n(e, theta, n);
  Vec p = axpy(1.0, e, -c, theta);
  double np = norm_n(p, n);
  return scale(1.0 / np, p);
}

Vec cross3(const Vec& a, const Vec& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0], 0.0};
}

/// Periodic trapezoid rule with interval doubling; integrand h(alpha) on
/// [0, 2*pi).  Spectrally accurate for smooth periodic integrands.
quad::IntegrationReport periodic_mean(const std::function<double(double)>& h,
                                      const quad::QuadratureSpec& spec) {
  std::size_t n = std::max<std::size_t>(16, spec.nodes);
  auto eval = [&](std::size_t nn) {
    double s = 0.0;
    for (std::size_t i = 0; i < nn; ++i)
      s += h(2.0 * kPi * (static_cast<double>(i) + 0.5) /
             static_cast<double>(nn));
    return s / static_cast<double>(nn);
  };
  quad::IntegrationReport rep;
  double prev = eval(n);
  while (true) {
    n *= 2;
    double cur = eval(n);
    rep.value = cur;
    rep.error_estimate = std::abs(cur - prev);
    rep.nodes_used = n;
    if (rep.error_estimate <=
        std::max(spec.abs_tol, spec.rel_tol * std::abs(cur))) {
      rep.converged = true;
      break;
    }
    if (n >= spec.max_nodes) {
      rep.converged = false;
      break;
    }
    prev = cur;
  }
  return rep;
}

quad::IntegrationReport merge(const quad::IntegrationReport& a,
                              const quad::IntegrationReport& b) {
  quad::IntegrationReport r;
  r.value = a.value + b.value;
  r.error_estimate = a.error_estimate + b.error_estimate;
  r.nodes_used = a.nodes_used + b.nodes_used;
  r.converged = a.converged && b.converged;
  return r;
}

/// Arclength parameter below which the line/plane section stays outside a
/// radially supported profile: |offset| cosh(v) < a contributes nothing.
double support_start(const fracint::Profile& u, double t_abs) {
  if (!u.support) return 0.0;
  double a = u.support->first;
  if (a <= t_abs || t_abs <= 0.0) return 0.0;
  return std::acosh(a / t_abs);
}

/// Semi-infinite integration for the plane oracles. Profiles right at the
/// integrability threshold decay like r^{1-n} log^{-p} r, and under
/// r = |t| cosh v their plane integrand becomes exactly c (v+s)^{-p}; no
/// evaluation at double-representable radii can resolve such a tail (it
/// still holds ~1/log(r_max) of its mass at r_max ~ 1e308). When the plain
/// ladder stalls, fit that three-parameter model on the range where the
/// integrand is still alive, accept it only if it reproduces the samples to
/// near machine precision with p > 1, and close the tail analytically.
/// Divergent (p <= 1), sign-changing, growing, or non-log-power tails keep
/// the nonconverged report.
quad::IntegrationReport tail_closed_semi_infinite(
    const std::function<double(double)>& g, double a,
    const quad::QuadratureSpec& spec) {
  quad::IntegrationReport rep = quad::integrate_semi_infinite(g, a, spec);
  if (rep.converged) return rep;

  double lo = std::max(a + 4.0, 32.0);
  if (!(g(lo) > 0.0) || !std::isfinite(g(lo))) return rep;
  double vlive = lo;
  while (vlive < 1e9) {
    double probe = g(2.0 * vlive);
    if (!(probe > 0.0) || !std::isfinite(probe)) break;
    vlive *= 2.0;
  }
  if (vlive < 8.0 * lo) return rep; // not enough live range to fit

  constexpr int kSamples = 12;
  double vs[kSamples], gs[kSamples];
  double v0 = vlive / 8.0;
  for (int j = 0; j < kSamples; ++j) {
    vs[j] = v0 * std::pow(8.0, j / double(kSamples - 1));
    gs[j] = g(vs[j]);
    if (!(gs[j] > 0.0) || !std::isfinite(gs[j])) return rep;
    if (j > 0 && !(gs[j] < gs[j - 1])) return rep; // must decrease
  }

  // For the right p, y = g^{-1/p} is an affine function of v; search p for
  // the straightest fit, then read (c, s) off the regression line.
  auto linefit = [&](double p, double& slope, double& icept) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int j = 0; j < kSamples; ++j) {
      double y = std::pow(gs[j], -1.0 / p);
      sx += vs[j]; sy += y; sxx += vs[j] * vs[j]; sxy += vs[j] * y;
    }
    double det = kSamples * sxx - sx * sx;
    slope = (kSamples * sxy - sx * sy) / det;
    icept = (sy * sxx - sx * sxy) / det;
    double worst = 0.0;
    for (int j = 0; j < kSamples; ++j) {
      double model = std::pow(slope * vs[j] + icept, -p);
      worst = std::max(worst, std::abs(model / gs[j] - 1.0));
    }
    return worst;
  };
  double plo = 1.0 + 1e-3, phi = 40.0, slope, icept;
  for (int it = 0; it < 200; ++it) {
    double p1 = plo + (phi - plo) / 3.0, p2 = phi - (phi - plo) / 3.0;
    double r1 = linefit(p1, slope, icept);
    double r2 = linefit(p2, slope, icept);
    if (r1 < r2) phi = p2; else plo = p1;
  }
  double p = 0.5 * (plo + phi);
  double resid = linefit(p, slope, icept);
  if (!(resid < 1e-8) || !(slope > 0.0)) return rep;

  quad::IntegrationReport head = quad::integrate_tanh_sinh(g, a, vlive, spec);
  if (!head.converged) return rep;
  // integral of (slope*v + icept)^{-p} over [vlive, inf)
  double tail = std::pow(slope * vlive + icept, 1.0 - p) / (slope * (p - 1.0));
  quad::IntegrationReport out;
  out.value = head.value + tail;
  out.error_estimate = head.error_estimate + std::abs(tail) * (10.0 * resid + 1e-12);
  out.nodes_used = head.nodes_used + rep.nodes_used + 2 * kSamples;
  out.converged = true;
  return out;
}

/// Signed (or absolute) plane integral, n = 2: the line {t*theta + u*perp}.
quad::IntegrationReport radon_direct_2d(const harmonics::SeparableFunction& f,
                                        const Vec& theta, double t,
                                        bool absolute,
                                        const quad::QuadratureSpec& spec) {
  Vec perp = {-theta[1], theta[0], 0.0, 0.0};
  double ta = std::abs(t);
  auto point_val = [&](const Vec& p) {
    double v = f.eval_space(p);
    return absolute ? std::abs(v) : v;
  };
  if (ta < 1e-300) {
    // Line through the origin: integrate u(r) Y(+-theta_perp) over r > 0
    // for both directions.
    double a0 = f.profile.support ? f.profile.support->first : 0.0;
    auto half = [&](double sgn) {
      return quad::integrate_semi_infinite(
          [&](double r) { return point_val(scale(sgn * r, perp)); },
          std::max(a0, 0.0), spec);
    };
    return merge(half(1.0), half(-1.0));
  }
  double v0 = support_start(f.profile, ta);
  double sg = t > 0.0 ? 1.0 : -1.0;
  auto half = [&](double sgn) {
    return tail_closed_semi_infinite(
        [&](double v) {
          double c = std::cosh(v);
          double r = ta * c;
          double pr = f.profile(r);
          if (pr == 0.0) return 0.0;
          // unit for every v, unlike normalizing the raw point, whose
          // components overflow once cosh does
          Vec dir = axpy(sg / c, theta, sgn * std::tanh(v), perp);
          double val = pr * harmonics::eval_harmonic(f.harmonic, dir);
          if (absolute) val = std::abs(val);
          return val * ta * c;
        },
        v0, spec);
  };
  return merge(half(1.0), half(-1.0));
}

/// Signed (or absolute) plane integral, n = 3.
quad::IntegrationReport radon_direct_3d(const harmonics::SeparableFunction& f,
                                        const Vec& theta, double t,
                                        bool absolute,
                                        const quad::QuadratureSpec& spec) {
  Vec a = any_perp(theta, 3);
  Vec b = cross3(theta, a);
  auto ring_mean = [&](double rho) {
    auto h = [&](double alpha) {
      Vec p = axpy(t, theta, rho * std::cos(alpha), a);
      p = axpy(1.0, p, rho * std::sin(alpha), b);
      double v = f.eval_space(p);
      return absolute ? std::abs(v) : v;
    };
    return periodic_mean(h, spec).value;
  };
  double ta = std::abs(t);
  if (ta < 1e-300) {
    double a0 = f.profile.support ? f.profile.support->first : 0.0;
    auto rep = quad::integrate_semi_infinite(
        [&](double rho) { return ring_mean(rho) * rho; }, std::max(a0, 0.0),
        spec);
    rep.value *= 2.0 * kPi;
    rep.error_estimate *= 2.0 * kPi;
    return rep;
  }
  double v0 = support_start(f.profile, ta);
  double sg = t > 0.0 ? 1.0 : -1.0;
  auto rep = tail_closed_semi_infinite(
      [&](double v) {
        double c = std::cosh(v);
        double r = ta * c;
        double pr = f.profile(r);
        if (pr == 0.0) return 0.0;
        // the radius is constant on each ring, so only the harmonic needs
        // averaging; the direction stays unit even where cosh overflows
        double th = std::tanh(v);
        auto h = [&](double alpha) {
          Vec dir = axpy(sg / c, theta, th * std::cos(alpha), a);
          dir = axpy(1.0, dir, th * std::sin(alpha), b);
          double y = harmonics::eval_harmonic(f.harmonic, dir);
          return absolute ? std::abs(y) : y;
        };
        double ym = periodic_mean(h, spec).value;
        double w = absolute ? std::abs(pr) : pr;
        return ym * w * ta * std::sinh(v) * ta * c;
      },
      v0, spec);
  rep.value *= 2.0 * kPi;
  rep.error_estimate *= 2.0 * kPi;
  return rep;
}

/// Profile map v(t) = t^{-n} u(1/t) shared by the A and B intertwiners.
fracint::Profile inversion_profile(const fracint::Profile& u, int n) {
  fracint::Profile v;
  auto ueval = u.eval;
  v.eval = [ueval, n](double t) {
    return std::pow(t, -static_cast<double>(n)) * ueval(1.0 / t);
  };
  v.zero_exponent = u.infinity_exponent - static_cast<double>(n);
  v.infinity_exponent = static_cast<double>(n) + u.zero_exponent;
  if (u.global_pure_power && u.pure_power_tail) {
    v.global_pure_power = true;
    v.pure_power_tail = quad::PowerTail{
        u.pure_power_tail->coefficient,
        -static_cast<double>(n) - u.pure_power_tail->exponent};
    v.zero_exponent = v.pure_power_tail->exponent;
    v.infinity_exponent = -v.pure_power_tail->exponent;
  }
  if (u.support) {
    double lo = u.support->second == std::numeric_limits<double>::infinity()
                    ? 0.0
                    : 1.0 / u.support->second;
    double hi = u.support->first > 0.0
                    ? 1.0 / u.support->first
                    : std::numeric_limits<double>::infinity();
    v.support = std::make_pair(lo, hi);
  }
  return v;
}

struct FastRadonEval {
  double value = 0.0;
  double mass = 0.0;
  quad::IntegrationReport report;
};

/// Radial part of the intertwined Radon evaluation: for f = u(r) Y_m, the
/// transform at offset |t| equals
///   sigma_{n-1}/(2|t|) * Gamma(lambda+1)/sqrt(pi) * (G_+ v)(1/|t|),
/// v(s) = s^{-n} u(1/s), lambda = (n-2)/2.
FastRadonEval radon_fast_radial(const fracint::Profile& u, int n, int m,
                                double t_abs,
                                const quad::QuadratureSpec& spec) {
  if (t_abs <= 0.0)
    throw std::domain_error(
        "radon intertwine path: plane through the origin (t = 0)");
  fracint::Profile v = inversion_profile(u, n);
  fracint::OperatorParams params;
  params.lambda = (static_cast<double>(n) - 2.0) / 2.0;
  params.m = m;
  params.side = fracint::Side::Left;
  params.starred = false;
  fracint::check_preconditions(params, v);
  double r = 1.0 / t_abs;
  auto ar = fracint::gc_apply_report(params, v, r, spec);
  double pref = specfun::sphere_area(n) / (2.0 * t_abs) *
                dual_factor(params.lambda);
  FastRadonEval out;
  out.value = pref * ar.value;
  out.mass = pref * fracint::gc_unsigned_mass(params, v, r, spec);
  out.report = ar.report;
  out.report.value = out.value;
  return out;
}

double harmonic_at(const harmonics::SphericalHarmonic& Y, const Vec& dir) {
  return harmonics::eval_harmonic(Y, dir);
}

/// Unsigned masses only normalize residuals, so they never need the caller's
/// full tolerance; the relaxed spec keeps the doubling loops shallow on the
/// kinked |integrand| sweeps.
quad::QuadratureSpec mass_spec(const quad::QuadratureSpec& spec) {
  quad::QuadratureSpec m = spec;
  m.rel_tol = std::max(spec.rel_tol, 1e-6);
  m.abs_tol = std::max(spec.abs_tol, 1e-9);
  return m;
}

void require_space(const harmonics::SeparableFunction& f, const char* who) {
  if (f.orientation != harmonics::Orientation::SpaceFunction)
    throw std::domain_error(std::string(who) +
                            ": expected a space-side function");
}

} // namespace

Hyperplane Hyperplane::canonical(const Vec& theta, double t, int n) {
  if (n < 2 || n > 3) throw std::domain_error("hyperplane: n must be 2 or 3");
  double nn = norm_n(theta, n);
  if (nn <= 0.0) throw std::domain_error("hyperplane: zero normal");
  Hyperplane h;
  h.n = n;
  h.theta = scale(1.0 / nn, theta);
  h.t = t;
  for (int i = n; i < 4; ++i) h.theta[i] = 0.0;
  bool flip = h.t < 0.0;
  if (h.t == 0.0) {
    for (int i = 0; i < n; ++i) {
      if (h.theta[i] != 0.0) {
        flip = h.theta[i] < 0.0;
        break;
      }
    }
  }
  if (flip) {
    h.theta = scale(-1.0, h.theta);
    h.t = -h.t;
  }
  if (h.t == 0.0) h.t = 0.0; // normalize -0.0
  return h;
}

TransformResult radon(const harmonics::SeparableFunction& f,
                      const Hyperplane& plane, Path path,
                      const quad::QuadratureSpec& spec) {
  require_space(f, "radon");
  int n = f.harmonic.n;
  if (plane.n != n)
    throw std::domain_error("radon: plane dimension does not match function");
  TransformResult out;
  if (path == Path::Intertwine) {
    auto fr = radon_fast_radial(f.profile, n, f.harmonic.m, std::abs(plane.t),
                                spec);
    double sgn = (plane.t < 0.0 && f.harmonic.m % 2 != 0) ? -1.0 : 1.0;
    double y = harmonic_at(f.harmonic, plane.theta);
    out.value = fr.value * sgn * y;
    out.unsigned_mass = fr.mass * std::abs(y);
    out.report = fr.report;
    out.report.value = out.value;
    return out;
  }
  if (n == 2) {
    out.report = radon_direct_2d(f, plane.theta, plane.t, false, spec);
    out.unsigned_mass =
        radon_direct_2d(f, plane.theta, plane.t, true, mass_spec(spec)).value;
  } else if (n == 3) {
    out.report = radon_direct_3d(f, plane.theta, plane.t, false, spec);
    out.unsigned_mass =
        radon_direct_3d(f, plane.theta, plane.t, true, mass_spec(spec)).value;
  } else {
    throw std::domain_error("radon direct oracle: n must be 2 or 3");
  }
  out.value = out.report.value;
  return out;
}

TransformResult dual_radon(const harmonics::SeparableFunction& phi,
                           const Vec& x, Path path,
                           const quad::QuadratureSpec& spec) {
  if (phi.orientation != harmonics::Orientation::CylinderFunction)
    throw std::domain_error("dual_radon: expected a cylinder-side function");
  int n = phi.harmonic.n;
  TransformResult out;
  if (path == Path::Intertwine) {
    double r = norm_n(x, n);
    if (r <= 0.0)
      throw std::domain_error("dual_radon intertwine path: x = 0");
    fracint::OperatorParams params;
    params.lambda = (static_cast<double>(n) - 2.0) / 2.0;
    params.m = phi.harmonic.m;
    params.side = fracint::Side::Left;
    params.starred = false;
    fracint::check_preconditions(params, phi.profile);
    auto ar = fracint::gc_apply_report(params, phi.profile, r, spec);
    double pref = dual_factor(params.lambda);
    Vec dir = scale(1.0 / r, x);
    double y = harmonic_at(phi.harmonic, dir);
    out.value = pref * ar.value * y;
    out.unsigned_mass =
        pref * fracint::gc_unsigned_mass(params, phi.profile, r, spec) *
        std::abs(y);
    out.report = ar.report;
    out.report.value = out.value;
    return out;
  }
  auto on_sphere = [&](const std::array<double, 3>& p, bool absolute) {
    Vec theta{p[0], p[1], n == 3 ? p[2] : 0.0, 0.0};
    double v = phi.eval_cylinder(theta, dot_n(x, theta, n));
    return absolute ? std::abs(v) : v;
  };
  auto signed_rep = quad::integrate_sphere(
      n, [&](const std::array<double, 3>& p) { return on_sphere(p, false); },
      spec);
  auto abs_rep = quad::integrate_sphere(
      n, [&](const std::array<double, 3>& p) { return on_sphere(p, true); },
      mass_spec(spec));
  out.report = signed_rep;
  out.value = signed_rep.value;
  out.unsigned_mass = abs_rep.value;
  return out;
}

TransformResult cormack_quinto(const harmonics::SeparableFunction& f,
                               const Vec& x, Path path,
                               const quad::QuadratureSpec& spec) {
  require_space(f, "cormack_quinto");
  int n = f.harmonic.n;
  double r = norm_n(x, n);
  if (r <= 0.0)
    throw std::domain_error("cormack_quinto: x = 0 (degenerate sphere)");
  Vec dir = scale(1.0 / r, x);
  TransformResult out;
  if (path == Path::Intertwine) {
    // Section profile v(t) = (2t)^{n-2} u(2t); the sphere mean equals
    // |x|^{2-n} Gamma(lambda+1)/sqrt(pi) (G_+ v)(|x|) Y_m(x/|x|).
    fracint::Profile v;
    auto ueval = f.profile.eval;
    v.eval = [ueval, n](double t) {
      return std::pow(2.0 * t, static_cast<double>(n - 2)) * ueval(2.0 * t);
    };
    v.zero_exponent = f.profile.zero_exponent + static_cast<double>(n - 2);
    v.infinity_exponent =
        f.profile.infinity_exponent - static_cast<double>(n - 2);
    if (f.profile.global_pure_power && f.profile.pure_power_tail) {
      double p = f.profile.pure_power_tail->exponent;
      v.global_pure_power = true;
      v.pure_power_tail = quad::PowerTail{
          f.profile.pure_power_tail->coefficient *
              std::pow(2.0, static_cast<double>(n - 2) + p),
          static_cast<double>(n - 2) + p};
      v.zero_exponent = v.pure_power_tail->exponent;
      v.infinity_exponent = -v.pure_power_tail->exponent;
    }
    if (f.profile.support)
      v.support = std::make_pair(f.profile.support->first / 2.0,
                                 f.profile.support->second / 2.0);
    fracint::OperatorParams params;
    params.lambda = (static_cast<double>(n) - 2.0) / 2.0;
    params.m = f.harmonic.m;
    params.side = fracint::Side::Left;
    params.starred = false;
    fracint::check_preconditions(params, v);
    auto ar = fracint::gc_apply_report(params, v, r, spec);
    double pref =
        std::pow(r, 2.0 - static_cast<double>(n)) * dual_factor(params.lambda);
    double y = harmonic_at(f.harmonic, dir);
    out.value = pref * ar.value * y;
    out.unsigned_mass =
        pref * fracint::gc_unsigned_mass(params, v, r, spec) * std::abs(y);
    out.report = ar.report;
    out.report.value = out.value;
    return out;
  }
  quad::QuadratureSpec msp = mass_spec(spec);
  if (n == 3) {
    // Mean over the sphere |y - x| = |x| in a frame aligned with x:
    // y = x + |x|(c dir + sqrt(1-c^2)(cos(b) a + sin(b) bb)), |y| = 2|x|
    // sqrt(q), q = (1+c)/2.  The azimuthal mean is a function of q alone;
    // a pure-power radial part u = C r^p contributes q^{p/2}, which the
    // Jacobi rule absorbs exactly.
    Vec a = any_perp(dir, 3);
    Vec bb = cross3(dir, a);
    auto run = [&](bool absolute) {
      const quad::QuadratureSpec& sp = absolute ? msp : spec;
      auto az_mean = [&](double q) {
        double c = 2.0 * q - 1.0;
        double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        auto h = [&](double beta) {
          Vec p = axpy(1.0, x, r * c, dir);
          p = axpy(1.0, p, r * s * std::cos(beta), a);
          p = axpy(1.0, p, r * s * std::sin(beta), bb);
          double val = f.eval_space(p);
          return absolute ? std::abs(val) : val;
        };
        return periodic_mean(h, sp).value;
      };
      double beta_j = 0.0;
      std::function<double(double)> smooth = az_mean;
      if (f.profile.global_pure_power && f.profile.pure_power_tail) {
        double p = f.profile.pure_power_tail->exponent;
        if (p / 2.0 > -1.0) {
          beta_j = p / 2.0;
          smooth = [az_mean, p](double q) {
            return az_mean(q) * std::pow(q, -p / 2.0);
          };
        }
      }
      return quad::integrate_jacobi01(smooth, 0.0, beta_j, sp);
    };
    out.report = run(false);
    out.value = out.report.value;
    out.unsigned_mass = run(true).value;
    return out;
  }
  if (n == 2) {
    // Circle through the origin; the antipode of the origin-touching point
    // is smooth, the origin end may be singular: split the angle range at
    // the origin (alpha = pi relative to dir) and tanh-sinh both halves.
    auto run = [&](bool absolute) {
      const quad::QuadratureSpec& sp = absolute ? msp : spec;
      auto h = [&](double alpha) {
        Vec offset = {std::cos(alpha) * dir[0] - std::sin(alpha) * dir[1],
                      std::cos(alpha) * dir[1] + std::sin(alpha) * dir[0], 0.0,
                      0.0};
        Vec p = axpy(1.0, x, r, offset);
        double val = f.eval_space(p);
        return absolute ? std::abs(val) : val;
      };
      auto r1 = quad::integrate_tanh_sinh(h, 0.0, kPi, sp);
      auto r2 = quad::integrate_tanh_sinh(h, kPi, 2.0 * kPi, sp);
      auto rep = merge(r1, r2);
      rep.value /= 2.0 * kPi;
      rep.error_estimate /= 2.0 * kPi;
      return rep;
    };
    out.report = run(false);
    out.value = out.report.value;
    out.unsigned_mass = run(true).value;
    return out;
  }
  throw std::domain_error("cormack_quinto direct oracle: n must be 2 or 3");
}

double SphereFunction::eval(const Vec& eta) const {
  int n = harmonic.n;
  double s2 = 0.0;
  for (int i = 0; i <= n; ++i) s2 += eta[i] * eta[i];
  if (std::abs(s2 - 1.0) > 1e-8)
    throw std::domain_error("sphere function: point not on the sphere");
  double sinphi = norm_n(eta, n);
  double cosphi = std::clamp(eta[n], -1.0, 1.0);
  if (sinphi < 1e-14)
    throw std::domain_error("sphere function: evaluation at a pole");
  Vec omega = scale(1.0 / sinphi, eta);
  omega[n] = 0.0;
  double phi = std::atan2(sinphi, cosphi);
  double fval;
  if (even && phi > kPi / 2.0) {
    double sgn = (harmonic.m % 2 != 0) ? -1.0 : 1.0;
    fval = sgn * colat.eval(kPi - phi);
  } else {
    fval = colat.eval(phi);
  }
  return fval * harmonics::eval_harmonic(harmonic, omega);
}

SphereFunction funk_kernel_element(int n, int m, int j, int mu) {
  if (m < 2 || j < 1 || j > m / 2)
    throw std::domain_error("funk kernel element: need m >= 2, 1 <= j <= m/2");
  SphereFunction f;
  f.harmonic = harmonics::SphericalHarmonic::basis(n, m, mu);
  f.even = true;
  double pw = static_cast<double>(m - 2 * j);
  double np = static_cast<double>(n);
  fracint::Profile colat;
  colat.eval = [np, pw](double phi) {
    double s = std::sin(phi);
    double c = std::cos(phi);
    return std::pow(s, -np) * std::pow(c / s, pw);
  };
  colat.zero_exponent = -np - pw;
  colat.infinity_exponent = 0.0;
  f.colat = colat;
  f.radial_pullback =
      fracint::Profile::power(static_cast<double>(2 * j - m) - np);
  return f;
}

SphereFunction slice_kernel_element(int n, int m, int j, int mu) {
  if (m < 2 || j < 1 || j > m / 2)
    throw std::domain_error(
        "slice kernel element: need m >= 2, 1 <= j <= m/2");
  SphereFunction f;
  f.harmonic = harmonics::SphericalHarmonic::basis(n, m, mu);
  f.even = false;
  double pw = static_cast<double>(n + m - 2 * j);
  double np = static_cast<double>(n);
  fracint::Profile colat;
  colat.eval = [np, pw](double phi) {
    return std::pow(1.0 - std::cos(phi), 1.0 - np) *
           std::pow(std::tan(phi / 2.0), pw);
  };
  colat.zero_exponent = (2.0 - 2.0 * np) + pw;
  colat.infinity_exponent = 0.0;
  f.colat = colat;
  f.radial_pullback =
      fracint::Profile::power(static_cast<double>(2 * j - m) - np);
  return f;
}

namespace {

/// Pullback profile of a sphere function under mu: for the Funk chain,
/// u_g(rho) = (1+rho^2)^{-n/2} F(atan(rho)); rho = |x|, phi = atan(rho).
fracint::Profile funk_pullback(const SphereFunction& f, int n) {
  if (f.radial_pullback) return *f.radial_pullback;
  fracint::Profile u;
  auto colat = f.colat.eval;
  double np = static_cast<double>(n);
  u.eval = [colat, np](double rho) {
    return std::pow(1.0 + rho * rho, -np / 2.0) * colat(std::atan(rho));
  };
  // atan(rho) ~ rho at 0 and ~ pi/2 - 1/rho at infinity; the colatitude
  // exponent at phi = 0 transfers directly, decay at infinity is n plus
  // the behavior of F at pi/2 (bounded for even functions regular there).
  u.zero_exponent = f.colat.zero_exponent;
  u.infinity_exponent = np;
  return u;
}

/// Pullback under nu: u_g(rho) = (2/(1+rho^2))^{n-1} F(2 atan(1/rho)).
fracint::Profile slice_pullback(const SphereFunction& f, int n) {
  if (f.radial_pullback) return *f.radial_pullback;
  fracint::Profile u;
  auto colat = f.colat.eval;
  double np = static_cast<double>(n);
  u.eval = [colat, np](double rho) {
    return std::pow(2.0 / (1.0 + rho * rho), np - 1.0) *
           colat(2.0 * std::atan(1.0 / rho));
  };
  // phi = 2 atan(1/rho): rho -> infinity gives phi ~ 2/rho, so the
  // colatitude zero-exponent z maps to decay 2(n-1) + z at infinity;
  // rho -> 0 gives phi -> pi (the pole), F bounded there for functions
  // regular at the pole.
  u.zero_exponent = 0.0;
  u.infinity_exponent = 2.0 * (np - 1.0) + f.colat.zero_exponent;
  return u;
}

} // namespace

TransformResult funk(const SphereFunction& f, const Vec& theta, Path path,
                     const quad::QuadratureSpec& spec) {
  if (!f.even)
    throw std::domain_error("funk: the transform requires an even function");
  int n = f.harmonic.n;
  double s2 = 0.0;
  for (int i = 0; i <= n; ++i) s2 += theta[i] * theta[i];
  if (std::abs(s2 - 1.0) > 1e-8)
    throw std::domain_error("funk: theta not on the sphere");
  double sinps = norm_n(theta, n);
  double cosps = theta[n];
  TransformResult out;
  if (path == Path::DirectOracle) {
    if (n != 2)
      throw std::domain_error("funk direct oracle: n must be 2");
    // Great circle orthogonal to theta in R^3.
    Vec a;
    if (sinps < 1e-12) {
      a = {1.0, 0.0, 0.0, 0.0};
    } else {
      int k = 0;
      for (int i = 1; i <= n; ++i)
        if (std::abs(theta[i]) < std::abs(theta[k])) k = i;
      Vec e = {0.0, 0.0, 0.0, 0.0};
      e[k] = 1.0;
      double c = 0.0;
      for (int i = 0; i <= n; ++i) c += e[i] * theta[i];
      Vec p = axpy(1.0, e, -c, theta);
      double npn = 0.0;
      for (int i = 0; i <= n; ++i) npn += p[i] * p[i];
      a = scale(1.0 / std::sqrt(npn), p);
    }
    Vec b = cross3(theta, a);
    auto run = [&](bool absolute) {
      return periodic_mean(
          [&](double alpha) {
            Vec eta = axpy(std::cos(alpha), a, std::sin(alpha), b);
            double v = f.eval(eta);
            return absolute ? std::abs(v) : v;
          },
          absolute ? mass_spec(spec) : spec);
    };
    out.report = run(false);
    out.value = out.report.value;
    out.unsigned_mass = run(true).value;
    return out;
  }
  if (sinps < 1e-12)
    throw std::domain_error(
        "funk intertwine path: theta at a pole (great circle through the "
        "poles of the chart)");
  Vec th = theta;
  double cp = cosps, sp = sinps;
  if (cp < 0.0) {
    th = scale(-1.0, th);
    cp = -cp;
  }
  Vec eta_c = scale(1.0 / sp, th);
  eta_c[n] = 0.0;
  double t = cp / sp;
  harmonics::SeparableFunction g;
  g.profile = funk_pullback(f, n);
  g.harmonic = f.harmonic;
  g.orientation = harmonics::Orientation::SpaceFunction;
  Vec pl_theta = scale(-1.0, eta_c);
  Hyperplane plane = Hyperplane::canonical(pl_theta, t, n);
  Path sub = (t > 1e-12) ? Path::Intertwine : Path::DirectOracle;
  auto rr = radon(g, plane, sub, spec);
  double pref = 2.0 / (specfun::sphere_area(n) * sp);
  out.value = pref * rr.value;
  out.unsigned_mass = pref * rr.unsigned_mass;
  out.report = rr.report;
  out.report.value = out.value;
  return out;
}

TransformResult slice(const SphereFunction& f, const Vec& theta, double psi,
                      Path path, const quad::QuadratureSpec& spec) {
  int n = f.harmonic.n;
  if (!(psi > 0.0) || psi > kPi / 2.0 + 1e-12)
    throw std::domain_error("slice: psi must lie in (0, pi/2]");
  double nn = norm_n(theta, n);
  if (std::abs(nn - 1.0) > 1e-8)
    throw std::domain_error("slice: theta must be a unit vector in R^n");
  TransformResult out;
  if (path == Path::DirectOracle) {
    if (n != 2)
      throw std::domain_error("slice direct oracle: n must be 2");
    quad::QuadratureSpec msp = mass_spec(spec);
    double sps = std::sin(psi), cps = std::cos(psi);
    Vec xi = {theta[0] * sps, theta[1] * sps, cps, 0.0};
    Vec a = {theta[0] * cps, theta[1] * cps, -sps, 0.0};
    Vec b = {-theta[1], theta[0], 0.0, 0.0};
    // eta(alpha) passes through the pole e3 at alpha = pi; split there.
    auto run = [&](bool absolute) {
      auto h = [&](double alpha) {
        Vec eta = scale(cps, xi);
        eta = axpy(1.0, eta, sps * std::cos(alpha), a);
        eta = axpy(1.0, eta, sps * std::sin(alpha), b);
        // the circle touches the chart pole at alpha = pi; tanh-sinh nodes
        // cluster into that endpoint, so clip the azimuth-free window whose
        // width is far below any tolerance in use
        if (std::hypot(eta[0], eta[1]) < 1e-13) return 0.0;
        double v = f.eval(eta);
        return absolute ? std::abs(v) : v;
      };
      const quad::QuadratureSpec& sp = absolute ? msp : spec;
      auto r1 = quad::integrate_tanh_sinh(h, 0.0, kPi, sp);
      auto r2 = quad::integrate_tanh_sinh(h, kPi, 2.0 * kPi, sp);
      auto rep = merge(r1, r2);
      rep.value *= sps;
      rep.error_estimate *= sps;
      return rep;
    };
    out.report = run(false);
    out.value = out.report.value;
    out.unsigned_mass = run(true).value;
    return out;
  }
  harmonics::SeparableFunction g;
  g.profile = slice_pullback(f, n);
  g.harmonic = f.harmonic;
  g.orientation = harmonics::Orientation::SpaceFunction;
  double t = std::cos(psi) / std::sin(psi);
  Hyperplane plane = Hyperplane::canonical(theta, t, n);
  Path sub = (t > 1e-12) ? Path::Intertwine : Path::DirectOracle;
  auto rr = radon(g, plane, sub, spec);
  out.value = rr.value;
  out.unsigned_mass = rr.unsigned_mass;
  out.report = rr.report;
  return out;
}

double lorentz(const Vec& a, const Vec& b) {
  return -a[0] * b[0] - a[1] * b[1] + a[2] * b[2];
}

HyperbolicPoint HyperbolicPoint::from_polar(double r, double angle) {
  HyperbolicPoint p;
  p.x = {std::sinh(r) * std::cos(angle), std::sinh(r) * std::sin(angle),
         std::cosh(r), 0.0};
  return p;
}

GeodesicDual GeodesicDual::from_polar(double dist, double angle) {
  GeodesicDual g;
  g.xi = {std::cosh(dist) * std::cos(angle), std::cosh(dist) * std::sin(angle),
          std::sinh(dist), 0.0};
  return g;
}

TransformResult hyperbolic_geodesic(const harmonics::SeparableFunction& f,
                                    const GeodesicDual& xi,
                                    const quad::QuadratureSpec& spec) {
  require_space(f, "hyperbolic_geodesic");
  if (f.harmonic.n != 2)
    throw std::domain_error("hyperbolic_geodesic: implemented for n = 2");
  double q = lorentz(xi.xi, xi.xi);
  if (std::abs(q + 1.0) > 1e-10)
    throw std::domain_error("hyperbolic_geodesic: [xi,xi] must equal -1");
  double d = std::asinh(xi.xi[2]);
  double chd = std::cosh(d), shd = std::sinh(d);
  Vec eta = {1.0, 0.0, 0.0, 0.0};
  if (chd > 0.0) eta = {xi.xi[0] / chd, xi.xi[1] / chd, 0.0, 0.0};
  Vec etap = {-eta[1], eta[0], 0.0, 0.0};
  // Unit-speed parametrization x(s) = P cosh(s) + W sinh(s), where
  // P = (eta sinh(d), cosh(d)) is the closest point to the origin and
  // W = (eta_perp, 0).
  auto point = [&](double s) {
    double cs = std::cosh(s), ss = std::sinh(s);
    return Vec{eta[0] * shd * cs + etap[0] * ss,
               eta[1] * shd * cs + etap[1] * ss, chd * cs, 0.0};
  };
  auto integrand = [&](double s, bool absolute) {
    double r, y;
    if (std::abs(s) > 350.0) {
      // far enough out that cosh(s) overflows: the geodesic runs along its
      // escape direction and r = |s| + log(cosh d) to full precision
      r = std::abs(s) + std::log(chd);
      Vec dinf = scale(1.0 / chd, axpy(shd, eta, s > 0.0 ? 1.0 : -1.0, etap));
      y = harmonics::eval_harmonic(f.harmonic, dinf);
    } else {
      Vec x = point(s);
      double chr = std::max(1.0, x[2]);
      r = std::acosh(chr);
      double shr = std::sqrt(std::max(0.0, chr * chr - 1.0));
      if (shr < 1e-14) {
        // r = 0 only when d = 0 and s = 0: measure zero, direction taken
        // along the geodesic's own tangent.
        y = harmonics::eval_harmonic(f.harmonic, etap);
      } else {
        Vec dir = {x[0] / shr, x[1] / shr, 0.0, 0.0};
        y = harmonics::eval_harmonic(f.harmonic, dir);
      }
    }
    double v = f.profile.eval(r) * y;
    return absolute ? std::abs(v) : v;
  };
  // r(s) = acosh(cosh(d) cosh(s)) ~ |s| + log(cosh(d)) for large |s|, so a
  // power-law profile yields an integrand with the same power tail in s.
  // The escape directions fix the harmonic factor of each tail.
  auto tail_for = [&](double sgn, bool absolute)
      -> std::optional<quad::PowerTail> {
    if (!f.profile.pure_power_tail ||
        f.profile.pure_power_tail->exponent >= -1.0 || f.profile.support)
      return std::nullopt;
    Vec dinf = scale(1.0 / chd, axpy(shd, eta, sgn, etap));
    double c = f.profile.pure_power_tail->coefficient *
               harmonics::eval_harmonic(f.harmonic, dinf);
    if (absolute) c = std::abs(c);
    return quad::PowerTail{c, f.profile.pure_power_tail->exponent};
  };
  quad::QuadratureSpec msp = mass_spec(spec);
  auto run = [&](bool absolute) {
    const quad::QuadratureSpec& sp = absolute ? msp : spec;
    double s_lo = 0.0;
    double s_hi = std::numeric_limits<double>::infinity();
    if (f.profile.support) {
      double ca = std::cosh(f.profile.support->first) / chd;
      if (ca > 1.0) s_lo = std::acosh(ca);
      if (std::isfinite(f.profile.support->second)) {
        double cb = std::cosh(f.profile.support->second) / chd;
        if (cb <= 1.0) {
          quad::IntegrationReport zero;
          zero.converged = true;
          return zero;
        }
        s_hi = std::acosh(cb);
      }
    }
    if (std::isfinite(s_hi)) {
      auto pos = quad::integrate_tanh_sinh(
          [&](double s) { return integrand(s, absolute); }, s_lo, s_hi, sp);
      auto neg = quad::integrate_tanh_sinh(
          [&](double s) { return integrand(-s, absolute); }, s_lo, s_hi, sp);
      return merge(pos, neg);
    }
    auto pos = quad::integrate_semi_infinite(
        [&](double s) { return integrand(s, absolute); }, s_lo, sp,
        tail_for(1.0, absolute));
    auto neg = quad::integrate_semi_infinite(
        [&](double s) { return integrand(-s, absolute); }, s_lo, sp,
        tail_for(-1.0, absolute));
    return merge(pos, neg);
  };
  TransformResult out;
  out.report = run(false);
  out.value = out.report.value;
  out.unsigned_mass = run(true).value;
  return out;
}

Vec map_mu(const Vec& x, int n) {
  double r2 = dot_n(x, x, n);
  double den = std::sqrt(1.0 + r2);
  Vec out = {0.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) out[i] = x[i] / den;
  out[n] = 1.0 / den;
  return out;
}

Vec map_nu(const Vec& x, int n) {
  double r2 = dot_n(x, x, n);
  double den = r2 + 1.0;
  Vec out = {0.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) out[i] = 2.0 * x[i] / den;
  out[n] = (r2 - 1.0) / den;
  return out;
}

Vec map_nu_inverse(const Vec& eta, int n) {
  double last = eta[n];
  if (std::abs(1.0 - last) < 1e-14)
    throw std::domain_error("map_nu_inverse: the pole has no preimage");
  Vec out = {0.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) out[i] = eta[i] / (1.0 - last);
  return out;
}

harmonics::SeparableFunction map_A(const harmonics::SeparableFunction& phi) {
  if (phi.orientation != harmonics::Orientation::CylinderFunction)
    throw std::domain_error("map_A: expected a cylinder-side function");
  harmonics::SeparableFunction out;
  out.profile = inversion_profile(phi.profile, phi.harmonic.n);
  out.harmonic = phi.harmonic;
  out.orientation = harmonics::Orientation::SpaceFunction;
  return out;
}

harmonics::SeparableFunction map_B(const harmonics::SeparableFunction& f) {
  require_space(f, "map_B");
  harmonics::SeparableFunction out;
  out.profile = inversion_profile(f.profile, f.harmonic.n);
  out.harmonic = f.harmonic;
  out.orientation = harmonics::Orientation::CylinderFunction;
  return out;
}

} // namespace geokern::transforms
