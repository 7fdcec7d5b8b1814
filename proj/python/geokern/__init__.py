"""Gegenbauer-Chebyshev fractional integrals and Radon-type transforms."""

try:
    from . import _geokern as _core  # installed layout: extension inside package
except ImportError:  # build-tree layout: extension next to the package dir
    import _geokern as _core

Profile = _core.Profile

gc_apply = _core.gc_apply
gc_unsigned_mass = _core.gc_unsigned_mass
rl_integral = _core.rl_integral
rl_derivative = _core.rl_derivative
mellin_symbol = _core.mellin_symbol
mellin_symbol_numeric = _core.mellin_symbol_numeric
compose_identity_residual = _core.compose_identity_residual

radon = _core.radon
dual_radon = _core.dual_radon
cormack_quinto = _core.cormack_quinto
funk = _core.funk
slice = _core.slice  # noqa: A001 - mirrors the CLI subcommand vocabulary
hyperbolic_geodesic = _core.hyperbolic_geodesic

kernel_basis = _core.kernel_basis
kernel_decompose = _core.kernel_decompose
project_to_moment_space = _core.project_to_moment_space
reconstruct_psi = _core.reconstruct_psi

sphere_area = _core.sphere_area
harmonic_dim = _core.harmonic_dim
gegenbauer = _core.gegenbauer
chebyshev = _core.chebyshev

__version__ = _core.__version__

__all__ = [
    "Profile",
    "gc_apply",
    "gc_unsigned_mass",
    "rl_integral",
    "rl_derivative",
    "mellin_symbol",
    "mellin_symbol_numeric",
    "compose_identity_residual",
    "radon",
    "dual_radon",
    "cormack_quinto",
    "funk",
    "slice",
    "hyperbolic_geodesic",
    "kernel_basis",
    "kernel_decompose",
    "project_to_moment_space",
    "reconstruct_psi",
    "sphere_area",
    "harmonic_dim",
    "gegenbauer",
    "chebyshev",
    "__version__",
]
