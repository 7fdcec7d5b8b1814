#include "geokern/nullspace.hpp"

#include "geokern/transforms.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace geokern::nullspace {

namespace {

std::string fmt_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string power_desc(const char* var, double p) {
  std::ostringstream os;
  os << var << "^" << p;
  return os.str();
}

std::string make_tag(TransformKind kind, int n, int m, int j,
                     std::optional<double> lambda) {
  std::ostringstream os;
  os << "kernel:" << kind_name(kind);
  if (kind == TransformKind::GCLeft || kind == TransformKind::GCRight)
    os << ":l" << fmt_num(lambda.value_or(0.0));
  else
    os << ":n" << n;
  os << ":m" << m << ":j" << j;
  return os.str();
}

fracint::Profile hyperbolic_element_profile(int n, int pw) {
  fracint::Profile p;
  double np = n;
  double pwd = pw;
  p.eval = [np, pwd](double r) {
    if (r > 350.0) return 0.0; // sinh^(-n) underflows; coth is exactly 1
    double sh = std::sinh(r);
    return std::pow(sh, -np) * std::pow(std::cosh(r) / sh, pwd);
  };
  p.zero_exponent = -np - pwd;
  p.infinity_exponent = std::numeric_limits<double>::infinity();
  return p;
}

} // namespace

std::string kind_name(TransformKind kind) {
  switch (kind) {
    case TransformKind::RadonExterior: return "radon_exterior";
    case TransformKind::DualInterior: return "dual_interior";
    case TransformKind::CormackQuinto: return "cormack_quinto";
    case TransformKind::Funk: return "funk";
    case TransformKind::Slice: return "slice";
    case TransformKind::Hyperbolic: return "hyperbolic";
    case TransformKind::GCRight: return "gc_right";
    case TransformKind::GCLeft: return "gc_left";
  }
  throw std::domain_error("kind_name: unknown transform kind");
}

KernelBasis kernel_basis(TransformKind transform, int n, int m,
                         std::optional<double> lambda) {
  if (m < 0) throw std::domain_error("kernel_basis: m must be nonnegative");
  bool gc = transform == TransformKind::GCLeft ||
            transform == TransformKind::GCRight;
  if (gc && !lambda)
    throw std::domain_error("kernel_basis: lambda required for the GC kinds");
  KernelBasis basis;
  basis.transform = transform;
  basis.n = n;
  basis.m = m;
  basis.lambda = gc ? *lambda : (static_cast<double>(n) - 2.0) / 2.0;
  int M = m / 2;
  if (m < 2) return basis;
  basis.elements.reserve(M);
  for (int j = 1; j <= M; ++j) {
    KernelElement e;
    e.j = j;
    e.tag = make_tag(transform, n, m, j, lambda);
    int pw = m - 2 * j; // the cot/coth/tan power and the interior exponent
    switch (transform) {
      case TransformKind::GCLeft:
      case TransformKind::DualInterior:
        e.exponent = pw;
        e.description = power_desc("t", e.exponent);
        e.profile = fracint::Profile::power(e.exponent);
        break;
      case TransformKind::GCRight:
        e.exponent = 2.0 * j - m - 2.0 * basis.lambda - 2.0;
        e.description = power_desc("t", e.exponent);
        e.profile = fracint::Profile::power(e.exponent);
        break;
      case TransformKind::RadonExterior:
        e.exponent = 2 * j - m - n;
        e.description = power_desc("r", e.exponent);
        e.profile = fracint::Profile::power(e.exponent);
        break;
      case TransformKind::CormackQuinto:
        e.exponent = m - 2 * j + 2 - n;
        e.description = power_desc("r", e.exponent);
        e.profile = fracint::Profile::power(e.exponent);
        break;
      case TransformKind::Funk: {
        e.exponent = 2 * j - m - n; // pullback power
        std::ostringstream os;
        os << "sin^" << -n << "(phi) cot^" << pw << "(phi)";
        e.description = os.str();
        e.profile = transforms::funk_kernel_element(n, m, j, 1).colat;
        break;
      }
      case TransformKind::Slice: {
        e.exponent = 2 * j - m - n; // pullback power
        std::ostringstream os;
        os << "(1-cos(phi))^" << 1 - n << " tan^" << n + pw << "(phi/2)";
        e.description = os.str();
        e.profile = transforms::slice_kernel_element(n, m, j, 1).colat;
        break;
      }
      case TransformKind::Hyperbolic: {
        e.exponent = -n - pw;
        std::ostringstream os;
        os << "sinh^" << -n << "(r) coth^" << pw << "(r)";
        e.description = os.str();
        e.profile = hyperbolic_element_profile(n, pw);
        break;
      }
    }
    basis.elements.push_back(std::move(e));
  }
  return basis;
}

ResidualReport verify_annihilation(const AnnihilationProbe& probe,
                                   double tol) {
  if (probe.count <= 0 || !probe.evaluate)
    throw std::domain_error("verify_annihilation: empty probe");
  ResidualReport rep;
  rep.tol = tol;
  rep.residuals.reserve(probe.count);
  for (int i = 0; i < probe.count; ++i) {
    auto [value, mass] = probe.evaluate(i);
    double res = std::abs(value) / std::max(mass, 1e-30);
    rep.residuals.push_back(res);
    if (res > rep.max_residual) {
      rep.max_residual = res;
      rep.worst_index = i;
    }
  }
  rep.pass = rep.max_residual <= tol;
  return rep;
}

DecompositionResult kernel_decompose(
    const std::vector<std::pair<double, double>>& samples,
    TransformKind transform, int n, int m, std::optional<double> lambda) {
  DecompositionResult out;
  if (samples.empty())
    throw std::domain_error("kernel_decompose: no samples");
  const int rows = static_cast<int>(samples.size());
  Eigen::VectorXd y(rows);
  out.grid.reserve(rows);
  for (int i = 0; i < rows; ++i) {
    out.grid.push_back(samples[i].first);
    y(i) = samples[i].second;
  }
  double ynorm = y.norm();
  KernelBasis basis = kernel_basis(transform, n, m, lambda);
  const int cols = static_cast<int>(basis.elements.size());
  if (cols == 0) {
    out.residual_norm = ynorm;
    out.relative_residual = ynorm / std::max(ynorm, 1e-30);
    return out;
  }
  if (rows < cols)
    throw std::domain_error("kernel_decompose: fewer samples than basis size");
  Eigen::MatrixXd A(rows, cols);
  for (int jc = 0; jc < cols; ++jc)
    for (int i = 0; i < rows; ++i)
      A(i, jc) = basis.elements[jc].profile.eval(samples[i].first);
  // Per-column scaling before QR: power columns on a wide grid are
  // catastrophically ill-conditioned otherwise.
  Eigen::VectorXd colnorm(cols);
  for (int jc = 0; jc < cols; ++jc) {
    colnorm(jc) = A.col(jc).norm();
    if (colnorm(jc) <= 0.0) colnorm(jc) = 1.0;
    A.col(jc) /= colnorm(jc);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-12);
  out.rank_deficient = qr.rank() < cols;
  Eigen::VectorXd c = qr.solve(y);
  out.residual_norm = (A * c - y).norm();
  out.relative_residual = out.residual_norm / std::max(ynorm, 1e-30);
  out.coefficients.resize(cols);
  for (int jc = 0; jc < cols; ++jc) out.coefficients[jc] = c(jc) / colnorm(jc);
  return out;
}

std::vector<fracint::Profile> biorthogonal_system(
    int m, std::pair<double, double> support,
    const quad::QuadratureSpec& spec) {
  double a = support.first, b = support.second;
  if (!(0.0 < a && a < b) || !std::isfinite(b))
    throw std::domain_error("biorthogonal_system: need 0 < a < b < infinity");
  if (m < 2) throw std::domain_error("biorthogonal_system: need m >= 2");
  const int M = m / 2;
  // Bump family on M disjoint sub-supports of [a,b].
  std::vector<fracint::Profile> bumps;
  bumps.reserve(M);
  double w = (b - a) / M;
  for (int k = 0; k < M; ++k)
    bumps.push_back(fracint::Profile::bump(a + k * w, a + (k + 1) * w));
  Eigen::MatrixXd G(M, M);
  for (int j = 1; j <= M; ++j)
    for (int k = 0; k < M; ++k)
      G(j - 1, k) = fracint::moment(bumps[k], m - 2 * j, spec);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      G, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double smax = svd.singularValues()(0);
  double smin = svd.singularValues()(M - 1);
  double cond = smin > 0.0 ? smax / smin
                           : std::numeric_limits<double>::infinity();
  if (!(cond < 1e12)) {
    std::ostringstream os;
    os << "biorthogonal_system: Gram system condition estimate " << cond
       << " (support too small relative to m)";
    throw std::domain_error(os.str());
  }
  Eigen::MatrixXd C =
      svd.solve(Eigen::MatrixXd::Identity(M, M)); // G * C = I
  std::vector<fracint::Profile> out;
  out.reserve(M);
  for (int k = 0; k < M; ++k) {
    std::vector<std::pair<double, fracint::Profile>> terms;
    terms.reserve(M);
    for (int l = 0; l < M; ++l) terms.emplace_back(C(l, k), bumps[l]);
    out.push_back(fracint::Profile::sum(std::move(terms)));
  }
  return out;
}

fracint::Profile project_to_moment_space(const fracint::Profile& phi, int m,
                                         double lambda,
                                         const quad::QuadratureSpec& spec) {
  (void)lambda;
  if (m < 2) return phi;
  if (!phi.support || !(phi.support->first > 0.0) ||
      !std::isfinite(phi.support->second))
    throw std::domain_error(
        "project_to_moment_space: phi must be compactly supported in "
        "(0, infinity)");
  auto bio = biorthogonal_system(m, *phi.support, spec);
  const int M = m / 2;
  std::vector<std::pair<double, fracint::Profile>> terms;
  terms.reserve(M + 1);
  terms.emplace_back(1.0, phi);
  for (int j = 1; j <= M; ++j) {
    double mom = fracint::moment(phi, m - 2 * j, spec);
    terms.emplace_back(-mom, bio[j - 1]);
  }
  return fracint::Profile::sum(std::move(terms));
}

} // namespace geokern::nullspace
