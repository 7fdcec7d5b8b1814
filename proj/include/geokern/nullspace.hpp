#pragma once

#include "geokern/fracint.hpp"
#include "geokern/quadrature.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace geokern::nullspace {

enum class TransformKind {
  RadonExterior,
  DualInterior,
  CormackQuinto,
  Funk,
  Slice,
  Hyperbolic,
  GCRight,
  GCLeft,
};

std::string kind_name(TransformKind kind);

/// One closed-form null-space generator.  For the power families the profile
/// is the pure power itself; for the sphere transforms it is the colatitude
/// factor and for the hyperbolic transform the radial factor.
struct KernelElement {
  int j = 1;           // family index, 1 <= j <= floor(m/2)
  double exponent = 0; // power exponent where applicable (power families)
  std::string description;
  std::string tag; // machine tag, e.g. kernel:radon_exterior:n2:m4:j1
  fracint::Profile profile;
};

struct KernelBasis {
  TransformKind transform = TransformKind::GCLeft;
  int n = 2;
  int m = 0;
  double lambda = 0.0;
  std::vector<KernelElement> elements;
};

/// The closed-form generators annihilated by the given transform; empty for
/// m in {0,1}.  lambda is required for the GC kinds and ignored otherwise
/// (the geometric kinds fix lambda = (n-2)/2).
KernelBasis kernel_basis(TransformKind transform, int n, int m,
                         std::optional<double> lambda = std::nullopt);

/// Evaluation closure over a grid: evaluate(i) returns the pair
/// (transform value, unsigned mass) at grid index i.
struct AnnihilationProbe {
  std::function<std::pair<double, double>(int)> evaluate;
  int count = 0;
};

struct ResidualReport {
  double max_residual = 0.0;
  int worst_index = -1;
  bool pass = false;
  double tol = 0.0;
  std::vector<double> residuals;
};

/// Relative residuals |value| / max(mass, floor) over the grid; PASS iff the
/// maximum is <= tol.  Membership is judged against the unsigned mass since
/// annihilation is cancellation and the mass is the scale being cancelled.
ResidualReport verify_annihilation(const AnnihilationProbe& probe, double tol);

struct DecompositionResult {
  std::vector<double> coefficients;
  double residual_norm = 0.0;
  double relative_residual = 0.0;
  std::vector<double> grid;
  bool rank_deficient = false;
};

/// Least-squares fit of the samples (t_i, y_i) onto the kernel basis of the
/// given transform.  Columns are normalized to unit grid norm before QR; the
/// relative residual measures the distance from the null space.  m in {0,1}
/// yields the zero-basis fit.
DecompositionResult kernel_decompose(
    const std::vector<std::pair<double, double>>& samples,
    TransformKind transform, int n, int m,
    std::optional<double> lambda = std::nullopt);

/// M = floor(m/2) smooth profiles phi_k supported in [a,b] with
///   integral t^{m-2j} phi_k(t) dt = delta_{jk},  j,k = 1..M,
/// built from a bump family on M sub-supports by solving the Gram system.
/// Throws std::domain_error with a condition estimate when the system is too
/// ill-conditioned (support too small relative to m).
std::vector<fracint::Profile> biorthogonal_system(
    int m, std::pair<double, double> support,
    const quad::QuadratureSpec& spec = {});

/// Removes the kernel moments of phi: subtracts biorthogonal multiples so
/// that integral t^{m-2k} (P phi)(t) dt = 0 for k = 1..floor(m/2).  The
/// moment conditions depend only on m; lambda is accepted for interface
/// symmetry with the operator parameters.
fracint::Profile project_to_moment_space(const fracint::Profile& phi, int m,
                                         double lambda,
                                         const quad::QuadratureSpec& spec = {});

} // namespace geokern::nullspace
