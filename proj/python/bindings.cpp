#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "geokern/fracint.hpp"
#include "geokern/harmonics.hpp"
#include "geokern/nullspace.hpp"
#include "geokern/specfun.hpp"
#include "geokern/transforms.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace py = pybind11;
namespace fr = geokern::fracint;
namespace hm = geokern::harmonics;
namespace ns = geokern::nullspace;
namespace sf = geokern::specfun;
namespace tr = geokern::transforms;
using hm::Vec;

namespace {

Vec to_vec(const std::vector<double>& v) {
  if (v.empty() || v.size() > 4)
    throw std::domain_error("vector must have 1..4 components");
  Vec x = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < v.size(); ++i) x[i] = v[i];
  return x;
}

fr::Side side_from(const std::string& s) {
  if (s == "right") return fr::Side::Right;
  if (s == "left") return fr::Side::Left;
  throw std::domain_error("side must be 'right' or 'left'");
}

tr::Path path_from(const std::string& s) {
  if (s == "intertwine") return tr::Path::Intertwine;
  if (s == "direct") return tr::Path::DirectOracle;
  throw std::domain_error("path must be 'intertwine' or 'direct'");
}

ns::TransformKind kind_from(const std::string& name) {
  for (auto k :
       {ns::TransformKind::RadonExterior, ns::TransformKind::DualInterior,
        ns::TransformKind::CormackQuinto, ns::TransformKind::Funk,
        ns::TransformKind::Slice, ns::TransformKind::Hyperbolic,
        ns::TransformKind::GCRight, ns::TransformKind::GCLeft})
    if (ns::kind_name(k) == name) return k;
  throw std::domain_error("unknown transform kind: " + name);
}

fr::OperatorParams make_params(double lam, int m, const std::string& side,
                               bool starred) {
  fr::OperatorParams p;
  p.lambda = lam;
  p.m = m;
  p.side = side_from(side);
  p.starred = starred;
  return p;
}

py::dict result_dict(const tr::TransformResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["mass"] = r.unsigned_mass;
  d["converged"] = r.report.converged;
  return d;
}

hm::SeparableFunction make_separable(const fr::Profile& u, int n, int m,
                                     int mu, bool cylinder) {
  hm::SeparableFunction f;
  f.profile = u;
  f.harmonic = hm::SphericalHarmonic::basis(n, m, mu);
  f.orientation = cylinder ? hm::Orientation::CylinderFunction
                           : hm::Orientation::SpaceFunction;
  return f;
}

} // namespace

PYBIND11_MODULE(_geokern, mod) {
  mod.doc() = "Gegenbauer-Chebyshev fractional integrals and the associated "
              "Radon-type transforms";
  mod.attr("__version__") = "0.1.0";

  py::class_<fr::Profile>(mod, "Profile")
      .def_static("gaussian", &fr::Profile::gaussian)
      .def_static("exp_decay", &fr::Profile::exp_decay)
      .def_static("power", &fr::Profile::power, py::arg("exponent"),
                  py::arg("coefficient") = 1.0)
      .def_static("bump", &fr::Profile::bump, py::arg("a"), py::arg("b"))
      .def_static(
          "from_callable",
          [](std::function<double(double)> f, double zero_exponent,
             double infinity_exponent,
             std::optional<std::pair<double, double>> support) {
            fr::Profile p;
            p.eval = std::move(f);
            p.zero_exponent = zero_exponent;
            p.infinity_exponent = infinity_exponent;
            if (support) p.support = *support;
            return p;
          },
          py::arg("f"), py::arg("zero_exponent") = 0.0,
          py::arg("infinity_exponent") =
              std::numeric_limits<double>::infinity(),
          py::arg("support") = std::nullopt)
      .def_readonly("zero_exponent", &fr::Profile::zero_exponent)
      .def_readonly("infinity_exponent", &fr::Profile::infinity_exponent)
      .def("__call__",
           [](const fr::Profile& p, double t) { return p.eval(t); });

  mod.def(
      "gc_apply",
      [](double lam, int m, const std::string& side, bool starred,
         const fr::Profile& f, double t) {
        return fr::gc_apply(make_params(lam, m, side, starred), f, t);
      },
      py::arg("lambda_"), py::arg("m"), py::arg("side"), py::arg("starred"),
      py::arg("f"), py::arg("t"),
      "Apply the fractional-integral operator to a radial profile");
  mod.def(
      "gc_unsigned_mass",
      [](double lam, int m, const std::string& side, bool starred,
         const fr::Profile& f, double t) {
        return fr::gc_unsigned_mass(make_params(lam, m, side, starred), f, t);
      },
      py::arg("lambda_"), py::arg("m"), py::arg("side"), py::arg("starred"),
      py::arg("f"), py::arg("t"));

  mod.def(
      "rl_integral",
      [](double alpha, const fr::Profile& f, double t) {
        return fr::rl_integral(alpha, f, t);
      },
      py::arg("alpha"), py::arg("f"), py::arg("t"));
  mod.def(
      "rl_derivative",
      [](double alpha, const fr::Profile& f, double t) {
        return fr::rl_derivative(alpha, f, t);
      },
      py::arg("alpha"), py::arg("f"), py::arg("t"));

  mod.def("mellin_symbol", &fr::mellin_symbol, py::arg("lambda_"),
          py::arg("m"), py::arg("z"));
  mod.def(
      "mellin_symbol_numeric",
      [](double lam, int m, double z) {
        return fr::mellin_symbol_numeric(lam, m, z);
      },
      py::arg("lambda_"), py::arg("m"), py::arg("z"));
  mod.def(
      "compose_identity_residual",
      [](double lam, int m, const fr::Profile& f,
         const std::vector<double>& grid) {
        return fr::compose_identity_residual(lam, m, f, grid);
      },
      py::arg("lambda_"), py::arg("m"), py::arg("f"), py::arg("grid"));

  mod.def(
      "radon",
      [](const fr::Profile& u, int n, int m, int mu,
         const std::vector<double>& theta, double t, const std::string& path) {
        tr::Hyperplane plane{to_vec(theta), t, n};
        return result_dict(
            tr::radon(make_separable(u, n, m, mu, false), plane,
                      path_from(path)));
      },
      py::arg("u"), py::arg("n"), py::arg("m"), py::arg("mu"),
      py::arg("theta"), py::arg("t"), py::arg("path") = "intertwine");
  mod.def(
      "dual_radon",
      [](const fr::Profile& v, int n, int m, int mu,
         const std::vector<double>& x, const std::string& path) {
        return result_dict(tr::dual_radon(make_separable(v, n, m, mu, true),
                                          to_vec(x), path_from(path)));
      },
      py::arg("v"), py::arg("n"), py::arg("m"), py::arg("mu"), py::arg("x"),
      py::arg("path") = "intertwine");
  mod.def(
      "cormack_quinto",
      [](const fr::Profile& u, int n, int m, int mu,
         const std::vector<double>& x, const std::string& path) {
        return result_dict(
            tr::cormack_quinto(make_separable(u, n, m, mu, false), to_vec(x),
                               path_from(path)));
      },
      py::arg("u"), py::arg("n"), py::arg("m"), py::arg("mu"), py::arg("x"),
      py::arg("path") = "intertwine");
  mod.def(
      "funk",
      [](const fr::Profile& colat, int n, int m, int mu,
         const std::vector<double>& theta, bool even,
         const std::string& path) {
        tr::SphereFunction f;
        f.colat = colat;
        f.harmonic = hm::SphericalHarmonic::basis(n, m, mu);
        f.even = even;
        return result_dict(tr::funk(f, to_vec(theta), path_from(path)));
      },
      py::arg("colat"), py::arg("n"), py::arg("m"), py::arg("mu"),
      py::arg("theta"), py::arg("even") = true,
      py::arg("path") = "intertwine");
  mod.def(
      "slice",
      [](const fr::Profile& colat, int n, int m, int mu,
         const std::vector<double>& base, double psi,
         const std::string& path) {
        tr::SphereFunction f;
        f.colat = colat;
        f.harmonic = hm::SphericalHarmonic::basis(n, m, mu);
        return result_dict(
            tr::slice(f, to_vec(base), psi, path_from(path)));
      },
      py::arg("colat"), py::arg("n"), py::arg("m"), py::arg("mu"),
      py::arg("base"), py::arg("psi"), py::arg("path") = "intertwine");
  mod.def(
      "hyperbolic_geodesic",
      [](const fr::Profile& u, int m, int mu, double dist, double angle) {
        return result_dict(tr::hyperbolic_geodesic(
            make_separable(u, 2, m, mu, false),
            tr::GeodesicDual::from_polar(dist, angle)));
      },
      py::arg("u"), py::arg("m"), py::arg("mu"), py::arg("dist"),
      py::arg("angle"));

  mod.def(
      "kernel_basis",
      [](const std::string& kind, int n, int m, std::optional<double> lam) {
        auto basis = ns::kernel_basis(kind_from(kind), n, m, lam);
        py::list out;
        for (const auto& e : basis.elements) {
          py::dict d;
          d["j"] = e.j;
          d["exponent"] = e.exponent;
          d["description"] = e.description;
          d["tag"] = e.tag;
          d["profile"] = e.profile;
          out.append(std::move(d));
        }
        return out;
      },
      py::arg("kind"), py::arg("n"), py::arg("m"),
      py::arg("lambda_") = std::nullopt);
  mod.def(
      "kernel_decompose",
      [](const std::vector<std::pair<double, double>>& samples,
         const std::string& kind, int n, int m, std::optional<double> lam) {
        auto r = ns::kernel_decompose(samples, kind_from(kind), n, m, lam);
        py::dict d;
        d["coefficients"] = r.coefficients;
        d["residual_norm"] = r.residual_norm;
        d["relative_residual"] = r.relative_residual;
        d["rank_deficient"] = r.rank_deficient;
        return d;
      },
      py::arg("samples"), py::arg("kind"), py::arg("n"), py::arg("m"),
      py::arg("lambda_") = std::nullopt);
  mod.def(
      "project_to_moment_space",
      [](const fr::Profile& phi, int m, double lam) {
        return ns::project_to_moment_space(phi, m, lam);
      },
      py::arg("phi"), py::arg("m"), py::arg("lambda_") = 0.5);
  mod.def(
      "reconstruct_psi",
      [](double lam, int m, const fr::Profile& phi) {
        auto r = fr::reconstruct_psi(lam, m, phi);
        return py::make_tuple(r.psi, r.support_bound);
      },
      py::arg("lambda_"), py::arg("m"), py::arg("phi"));

  mod.def("sphere_area", &sf::sphere_area, py::arg("n"));
  mod.def("harmonic_dim", &sf::harmonic_dim, py::arg("n"), py::arg("m"));
  mod.def(
      "gegenbauer",
      [](double lam, int m, double t) {
        return sf::eval_poly(sf::PolyId::Gegenbauer, lam, m, t);
      },
      py::arg("lambda_"), py::arg("m"), py::arg("t"));
  mod.def(
      "chebyshev",
      [](int m, double t) {
        return sf::eval_poly(sf::PolyId::Chebyshev, 0.0, m, t);
      },
      py::arg("m"), py::arg("t"));
}
