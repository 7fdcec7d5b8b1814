#include "CLI11.hpp"
#include "json.hpp"

#include "geokern/fracint.hpp"
#include "geokern/harmonics.hpp"
#include "geokern/nullspace.hpp"
#include "geokern/specfun.hpp"
#include "geokern/transforms.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

namespace fr = geokern::fracint;
namespace hm = geokern::harmonics;
namespace ns = geokern::nullspace;
namespace tr = geokern::transforms;
namespace quad = geokern::quad;
using hm::Vec;
using ordered_json = nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

struct Common {
  std::string format = "csv";
  std::string out = "-";
  double tol = -1.0; // < 0: per-command default
  std::uint64_t seed = 12345;
};

void check_format(const Common& c) {
  if (c.format != "csv" && c.format != "json")
    throw std::domain_error("unknown --format (expected csv or json)");
}

struct GridSpec {
  std::string var = "t";
  double a = 0.2;
  double b = 3.0;
  int count = 20;

  std::vector<double> values() const {
    std::vector<double> v;
    v.reserve(count);
    if (count == 1) {
      v.push_back(a);
      return v;
    }
    for (int i = 0; i < count; ++i)
      v.push_back(a + (b - a) * static_cast<double>(i) /
                          static_cast<double>(count - 1));
    return v;
  }

  std::string str() const {
    std::ostringstream os;
    os << var << ":" << fmt_short(a) << ":" << fmt_short(b) << ":" << count;
    return os.str();
  }
};

GridSpec parse_grid(const std::string& s) {
  GridSpec g;
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4)
    throw std::domain_error("bad --grid (expected var:a:b:N): " + s);
  g.var = parts[0];
  try {
    g.a = std::stod(parts[1]);
    g.b = std::stod(parts[2]);
    g.count = std::stoi(parts[3]);
  } catch (const std::exception&) {
    throw std::domain_error("bad --grid numbers: " + s);
  }
  if (g.count < 1) throw std::domain_error("--grid needs at least one point");
  return g;
}

/// Deterministic uniforms/normals independent of the standard library's
/// distribution implementations (byte-identical reruns are a contract).
double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Vec rand_unit(std::mt19937_64& rng, int n) {
  Vec x = {0.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < n; i += 2) {
    double u1 = next_uniform(rng), u2 = next_uniform(rng);
    double r = std::sqrt(-2.0 * std::log(u1 + 1e-300));
    x[i] = r * std::cos(2.0 * kPi * u2);
    if (i + 1 < n) x[i + 1] = r * std::sin(2.0 * kPi * u2);
  }
  double nn = 0.0;
  for (int i = 0; i < n; ++i) nn += x[i] * x[i];
  nn = std::sqrt(nn);
  if (nn < 1e-12) {
    x[0] = 1.0;
    return x;
  }
  for (int i = 0; i < n; ++i) x[i] /= nn;
  return x;
}

void write_output(const Common& c, const ordered_json& meta,
                  const std::vector<std::string>& columns,
                  const std::vector<ordered_json>& rows) {
  std::ostringstream os;
  if (c.format == "json") {
    ordered_json doc;
    doc["meta"] = meta;
    doc["rows"] = rows;
    os << doc.dump(2) << "\n";
  } else {
    os << "# meta: " << meta.dump() << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
      os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& row : rows) {
      bool first = true;
      for (const auto& col : columns) {
        if (!first) os << ",";
        first = false;
        if (!row.contains(col)) continue;
        const auto& v = row.at(col);
        if (v.is_string())
          os << v.get<std::string>();
        else if (v.is_number_float())
          os << fmt(v.get<double>());
        else if (v.is_number_integer())
          os << v.get<long long>();
        else if (v.is_boolean())
          os << (v.get<bool>() ? "true" : "false");
      }
      os << "\n";
    }
  }
  if (c.out == "-") {
    std::cout << os.str();
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw std::domain_error("cannot open output file: " + c.out);
    f << os.str();
  }
}

ns::TransformKind kind_from_name(const std::string& name) {
  for (auto k : {ns::TransformKind::RadonExterior,
                 ns::TransformKind::DualInterior,
                 ns::TransformKind::CormackQuinto, ns::TransformKind::Funk,
                 ns::TransformKind::Slice, ns::TransformKind::Hyperbolic,
                 ns::TransformKind::GCRight, ns::TransformKind::GCLeft})
    if (ns::kind_name(k) == name) return k;
  throw std::domain_error("unknown transform kind: " + name);
}

// ---------------------------------------------------------------------------
// Profile vocabulary: gauss | exp | power:p | kernel:j=J | sum:w*atom,...
// ---------------------------------------------------------------------------

struct ProfileSpec {
  fr::Profile prof;
  std::string tag; // kernel citation tag when the profile is a basis element
  int kernel_j = 0;
};

fr::Profile parse_atom(const std::string& s) {
  if (s == "gauss") return fr::Profile::gaussian();
  if (s == "exp") return fr::Profile::exp_decay();
  if (s.rfind("power:", 0) == 0) {
    double p;
    try {
      p = std::stod(s.substr(6));
    } catch (const std::exception&) {
      throw std::domain_error("bad power exponent in profile: " + s);
    }
    return fr::Profile::power(p);
  }
  throw std::domain_error("unknown profile atom: " + s);
}

ProfileSpec parse_profile(const std::string& s, ns::TransformKind kind, int n,
                          int m, std::optional<double> lambda) {
  ProfileSpec out;
  if (s.rfind("kernel:j=", 0) == 0) {
    int j;
    try {
      j = std::stoi(s.substr(9));
    } catch (const std::exception&) {
      throw std::domain_error("bad kernel index in profile: " + s);
    }
    auto basis = ns::kernel_basis(kind, n, m, lambda);
    if (j < 1 || j > static_cast<int>(basis.elements.size()))
      throw std::domain_error(
          "kernel index out of range (basis has " +
          std::to_string(basis.elements.size()) + " elements)");
    out.prof = basis.elements[j - 1].profile;
    out.tag = basis.elements[j - 1].tag;
    out.kernel_j = j;
    return out;
  }
  if (s.rfind("sum:", 0) == 0) {
    std::vector<std::pair<double, fr::Profile>> terms;
    std::string body = s.substr(4), cur;
    std::vector<std::string> parts;
    for (char c : body) {
      if (c == ',') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    parts.push_back(cur);
    for (const auto& part : parts) {
      auto star = part.find('*');
      if (star == std::string::npos)
        throw std::domain_error("sum term needs weight*atom: " + part);
      double w;
      try {
        w = std::stod(part.substr(0, star));
      } catch (const std::exception&) {
        throw std::domain_error("bad sum weight: " + part);
      }
      terms.emplace_back(w, parse_atom(part.substr(star + 1)));
    }
    out.prof = fr::Profile::sum(std::move(terms));
    return out;
  }
  out.prof = parse_atom(s);
  return out;
}

tr::SphereFunction make_sphere_fn(const std::string& s, ns::TransformKind kind,
                                  int n, int m, int mu) {
  if (s.rfind("kernel:j=", 0) == 0) {
    int j = std::stoi(s.substr(9));
    auto basis = ns::kernel_basis(kind, n, m, std::nullopt);
    if (j < 1 || j > static_cast<int>(basis.elements.size()))
      throw std::domain_error("kernel index out of range for the sphere "
                              "transform basis");
    return kind == ns::TransformKind::Funk
               ? tr::funk_kernel_element(n, m, j, mu)
               : tr::slice_kernel_element(n, m, j, mu);
  }
  tr::SphereFunction f;
  f.colat = parse_profile(s, kind, n, m, std::nullopt).prof;
  f.harmonic = hm::SphericalHarmonic::basis(n, m, mu);
  f.even = kind == ns::TransformKind::Funk;
  return f;
}

std::string kernel_tag_for(const std::string& s, ns::TransformKind kind, int n,
                           int m) {
  if (s.rfind("kernel:j=", 0) != 0) return "";
  int j = std::stoi(s.substr(9));
  auto basis = ns::kernel_basis(kind, n, m, std::nullopt);
  if (j < 1 || j > static_cast<int>(basis.elements.size())) return "";
  return basis.elements[j - 1].tag;
}

// ---------------------------------------------------------------------------
// transform subcommand
// ---------------------------------------------------------------------------

struct TransformCfg {
  Common common;
  std::string kind = "radon";
  int n = 2;
  int m = 0;
  int mu = 1;
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double region_a = 0.0;
  std::string profile = "gauss";
  std::string grid;
};

ns::TransformKind basis_kind_for_transform(const std::string& kind) {
  if (kind == "radon") return ns::TransformKind::RadonExterior;
  if (kind == "dual") return ns::TransformKind::DualInterior;
  if (kind == "cormack_quinto") return ns::TransformKind::CormackQuinto;
  if (kind == "funk") return ns::TransformKind::Funk;
  if (kind == "slice") return ns::TransformKind::Slice;
  if (kind == "hyperbolic") return ns::TransformKind::Hyperbolic;
  throw std::domain_error("unknown --kind: " + kind);
}

int run_transform(const TransformCfg& cfg) {
  check_format(cfg.common);
  ns::TransformKind bkind = basis_kind_for_transform(cfg.kind);
  if (cfg.n < 2 || cfg.n > 3)
    throw std::domain_error("--n must be 2 or 3");
  if (cfg.kind == "hyperbolic" && cfg.n != 2)
    throw std::domain_error("hyperbolic transform: --n must be 2");
  if (cfg.m < 0) throw std::domain_error("--m must be nonnegative");
  if (!std::isnan(cfg.lambda) && !(cfg.lambda > -0.5))
    throw std::domain_error(
        "invalid lambda: the operator scale requires lambda > -1/2");
  if (cfg.region_a < 0.0) throw std::domain_error("--region-a must be >= 0");

  std::string grid_str = cfg.grid;
  if (grid_str.empty()) {
    if (cfg.kind == "funk" || cfg.kind == "slice")
      grid_str = "psi:0.25:1.3:20";
    else if (cfg.kind == "hyperbolic")
      grid_str = "d:0.2:2.5:20";
    else
      grid_str = "t:0.2:3:20";
  }
  GridSpec grid = parse_grid(grid_str);
  std::vector<double> xs = grid.values();
  std::mt19937_64 rng(cfg.common.seed);

  ordered_json meta;
  meta["command"] = "transform";
  meta["kind"] = cfg.kind;
  meta["n"] = cfg.n;
  meta["m"] = cfg.m;
  meta["mu"] = cfg.mu;
  meta["profile"] = cfg.profile;
  meta["grid"] = grid.str();
  meta["seed"] = cfg.common.seed;
  meta["region_a"] = cfg.region_a;

  bool is_sphere = cfg.kind == "funk" || cfg.kind == "slice";
  bool has_oracle = !(cfg.kind == "hyperbolic") && !(is_sphere && cfg.n != 2);
  std::string tag;
  std::vector<ordered_json> rows;
  bool nonconverged = false;
  quad::QuadratureSpec qspec;

  auto push_row = [&](double x, const tr::TransformResult& fast,
                      const std::optional<tr::TransformResult>& oracle) {
    ordered_json row;
    row[grid.var] = x;
    row["value"] = fast.value;
    if (oracle) {
      row["oracle"] = oracle->value;
      double ad = std::abs(fast.value - oracle->value);
      row["abs_diff"] = ad;
      row["rel_diff"] = ad / std::max(std::abs(oracle->value), 1e-30);
      if (!oracle->report.converged) nonconverged = true;
    }
    row["mass"] = fast.unsigned_mass;
    row["residual"] =
        std::abs(fast.value) / std::max(fast.unsigned_mass, 1e-30);
    if (!tag.empty()) row["tag"] = tag;
    if (!fast.report.converged) nonconverged = true;
    rows.push_back(std::move(row));
  };

  if (is_sphere) {
    tr::SphereFunction f =
        make_sphere_fn(cfg.profile, bkind, cfg.n, cfg.m, cfg.mu);
    tag = kernel_tag_for(cfg.profile, bkind, cfg.n, cfg.m);
    Vec base = rand_unit(rng, cfg.n);
    for (double psi : xs) {
      tr::TransformResult fast;
      std::optional<tr::TransformResult> oracle;
      if (cfg.kind == "funk") {
        Vec theta = {0.0, 0.0, 0.0, 0.0};
        for (int i = 0; i < cfg.n; ++i) theta[i] = base[i] * std::sin(psi);
        theta[cfg.n] = std::cos(psi);
        fast = tr::funk(f, theta, tr::Path::Intertwine, qspec);
        if (has_oracle)
          oracle = tr::funk(f, theta, tr::Path::DirectOracle, qspec);
      } else {
        fast = tr::slice(f, base, psi, tr::Path::Intertwine, qspec);
        if (has_oracle)
          oracle = tr::slice(f, base, psi, tr::Path::DirectOracle, qspec);
      }
      push_row(psi, fast, oracle);
    }
  } else {
    std::optional<double> lam;
    if (!std::isnan(cfg.lambda)) lam = cfg.lambda;
    ProfileSpec ps = parse_profile(cfg.profile, bkind, cfg.n, cfg.m, lam);
    tag = ps.tag;
    hm::SeparableFunction f;
    f.profile = ps.prof;
    f.harmonic = hm::SphericalHarmonic::basis(cfg.n, cfg.m, cfg.mu);
    f.orientation = cfg.kind == "dual" ? hm::Orientation::CylinderFunction
                                       : hm::Orientation::SpaceFunction;
    Vec dir = rand_unit(rng, cfg.n);
    double angle = 2.0 * kPi * next_uniform(rng);
    for (double x : xs) {
      tr::TransformResult fast;
      std::optional<tr::TransformResult> oracle;
      if (cfg.kind == "radon") {
        tr::Hyperplane plane{dir, x, cfg.n};
        fast = tr::radon(f, plane, tr::Path::Intertwine, qspec);
        oracle = tr::radon(f, plane, tr::Path::DirectOracle, qspec);
      } else if (cfg.kind == "dual") {
        Vec pt = {dir[0] * x, dir[1] * x, dir[2] * x, 0.0};
        fast = tr::dual_radon(f, pt, tr::Path::Intertwine, qspec);
        oracle = tr::dual_radon(f, pt, tr::Path::DirectOracle, qspec);
      } else if (cfg.kind == "cormack_quinto") {
        Vec pt = {dir[0] * x, dir[1] * x, dir[2] * x, 0.0};
        fast = tr::cormack_quinto(f, pt, tr::Path::Intertwine, qspec);
        oracle = tr::cormack_quinto(f, pt, tr::Path::DirectOracle, qspec);
      } else { // hyperbolic
        auto xi = tr::GeodesicDual::from_polar(x, angle);
        fast = tr::hyperbolic_geodesic(f, xi, qspec);
      }
      push_row(x, fast, oracle);
    }
  }

  std::vector<std::string> cols = {grid.var, "value"};
  if (has_oracle) {
    cols.push_back("oracle");
    cols.push_back("abs_diff");
    cols.push_back("rel_diff");
  }
  cols.push_back("mass");
  cols.push_back("residual");
  if (!tag.empty()) cols.push_back("tag");
  write_output(cfg.common, meta, cols, rows);
  return nonconverged ? 3 : 0;
}

// ---------------------------------------------------------------------------
// verify-kernel subcommand
// ---------------------------------------------------------------------------

struct VerifyCfg {
  Common common;
  std::string kind = "radon_exterior";
  int n = 2;
  int m_min = 2;
  int m_max = 6;
  int mu = 1;
  double lambda = std::numeric_limits<double>::quiet_NaN();
  std::string grid;
  bool inject = false;
};

int run_verify_kernel(const VerifyCfg& cfg) {
  check_format(cfg.common);
  ns::TransformKind kind = kind_from_name(cfg.kind);
  bool gc = kind == ns::TransformKind::GCLeft ||
            kind == ns::TransformKind::GCRight;
  std::optional<double> lam;
  if (!std::isnan(cfg.lambda)) {
    if (!(cfg.lambda > -0.5))
      throw std::domain_error(
          "invalid lambda: the operator scale requires lambda > -1/2");
    lam = cfg.lambda;
  }
  if (gc && !lam)
    throw std::domain_error("--lambda is required for the GC kinds");
  if (!gc && (cfg.n < 2 || cfg.n > 3))
    throw std::domain_error("--n must be 2 or 3");
  if (kind == ns::TransformKind::Hyperbolic && cfg.n != 2)
    throw std::domain_error("hyperbolic transform: --n must be 2");
  double tol = cfg.common.tol > 0.0 ? cfg.common.tol : 1e-5;

  std::string grid_str = cfg.grid;
  if (grid_str.empty()) {
    if (kind == ns::TransformKind::Funk || kind == ns::TransformKind::Slice)
      grid_str = "psi:0.25:1.3:20";
    else if (kind == ns::TransformKind::Hyperbolic)
      grid_str = "d:0.2:2.5:20";
    else
      grid_str = "t:0.2:3:20";
  }
  GridSpec grid = parse_grid(grid_str);
  std::vector<double> xs = grid.values();
  const int N = static_cast<int>(xs.size());
  std::mt19937_64 rng(cfg.common.seed);

  ordered_json meta;
  meta["command"] = "verify-kernel";
  meta["kind"] = cfg.kind;
  if (gc)
    meta["lambda"] = *lam;
  else
    meta["n"] = cfg.n;
  meta["m_min"] = cfg.m_min;
  meta["m_max"] = cfg.m_max;
  meta["grid"] = grid.str();
  meta["tol"] = tol;
  meta["seed"] = cfg.common.seed;

  std::vector<ordered_json> rows;
  bool any_fail = false;
  quad::QuadratureSpec qspec;

  // Per-point random geometries, drawn once so rows are independent of
  // evaluation order.
  std::vector<Vec> dirs(N);
  std::vector<double> angles(N);
  for (int i = 0; i < N; ++i) dirs[i] = rand_unit(rng, gc ? 2 : cfg.n);
  for (int i = 0; i < N; ++i) angles[i] = 2.0 * kPi * next_uniform(rng);

  auto probe_for = [&](int m, const fr::Profile& prof,
                       int j) -> ns::AnnihilationProbe {
    ns::AnnihilationProbe probe;
    probe.count = N;
    switch (kind) {
      case ns::TransformKind::GCLeft:
      case ns::TransformKind::GCRight: {
        fr::OperatorParams p{*lam, m,
                             kind == ns::TransformKind::GCLeft
                                 ? fr::Side::Left
                                 : fr::Side::Right,
                             false};
        probe.evaluate = [=, &xs](int i) {
          auto ar = fr::gc_apply_report(p, prof, xs[i], qspec);
          double mass = fr::gc_unsigned_mass(p, prof, xs[i], qspec);
          return std::make_pair(ar.value, mass);
        };
        break;
      }
      case ns::TransformKind::RadonExterior: {
        hm::SeparableFunction f;
        f.profile = prof;
        f.harmonic = hm::SphericalHarmonic::basis(cfg.n, m, cfg.mu);
        f.orientation = hm::Orientation::SpaceFunction;
        probe.evaluate = [=, &xs, &dirs](int i) {
          tr::Hyperplane plane{dirs[i], xs[i], cfg.n};
          auto r = tr::radon(f, plane, tr::Path::Intertwine, qspec);
          return std::make_pair(r.value, r.unsigned_mass);
        };
        break;
      }
      case ns::TransformKind::DualInterior: {
        hm::SeparableFunction f;
        f.profile = prof;
        f.harmonic = hm::SphericalHarmonic::basis(cfg.n, m, cfg.mu);
        f.orientation = hm::Orientation::CylinderFunction;
        probe.evaluate = [=, &xs, &dirs](int i) {
          Vec pt = {dirs[i][0] * xs[i], dirs[i][1] * xs[i],
                    dirs[i][2] * xs[i], 0.0};
          auto r = tr::dual_radon(f, pt, tr::Path::Intertwine, qspec);
          return std::make_pair(r.value, r.unsigned_mass);
        };
        break;
      }
      case ns::TransformKind::CormackQuinto: {
        hm::SeparableFunction f;
        f.profile = prof;
        f.harmonic = hm::SphericalHarmonic::basis(cfg.n, m, cfg.mu);
        f.orientation = hm::Orientation::SpaceFunction;
        probe.evaluate = [=, &xs, &dirs](int i) {
          Vec pt = {dirs[i][0] * xs[i], dirs[i][1] * xs[i],
                    dirs[i][2] * xs[i], 0.0};
          auto r = tr::cormack_quinto(f, pt, tr::Path::Intertwine, qspec);
          return std::make_pair(r.value, r.unsigned_mass);
        };
        break;
      }
      case ns::TransformKind::Funk:
      case ns::TransformKind::Slice: {
        // Basis elements carry their exact stereographic pullback; the
        // injected probe (j = 0) exercises the numeric pullback instead.
        tr::SphereFunction f;
        if (j >= 1) {
          f = kind == ns::TransformKind::Funk
                  ? tr::funk_kernel_element(cfg.n, m, j, cfg.mu)
                  : tr::slice_kernel_element(cfg.n, m, j, cfg.mu);
        } else {
          f.colat = prof;
          f.harmonic = hm::SphericalHarmonic::basis(cfg.n, m, cfg.mu);
          f.even = kind == ns::TransformKind::Funk;
        }
        probe.evaluate = [=, &xs, &dirs](int i) {
          if (kind == ns::TransformKind::Funk) {
            Vec theta = {0.0, 0.0, 0.0, 0.0};
            for (int k = 0; k < cfg.n; ++k)
              theta[k] = dirs[i][k] * std::sin(xs[i]);
            theta[cfg.n] = std::cos(xs[i]);
            auto r = tr::funk(f, theta, tr::Path::Intertwine, qspec);
            return std::make_pair(r.value, r.unsigned_mass);
          }
          auto r = tr::slice(f, dirs[i], xs[i], tr::Path::Intertwine, qspec);
          return std::make_pair(r.value, r.unsigned_mass);
        };
        break;
      }
      case ns::TransformKind::Hyperbolic: {
        hm::SeparableFunction f;
        f.profile = prof;
        f.harmonic = hm::SphericalHarmonic::basis(2, m, cfg.mu);
        f.orientation = hm::Orientation::SpaceFunction;
        probe.evaluate = [=, &xs, &angles](int i) {
          auto xi = tr::GeodesicDual::from_polar(xs[i], angles[i]);
          auto r = tr::hyperbolic_geodesic(f, xi, qspec);
          return std::make_pair(r.value, r.unsigned_mass);
        };
        break;
      }
    }
    return probe;
  };

  auto push_case = [&](int m, int j, const std::string& tag,
                       const std::string& desc, const fr::Profile& prof) {
    auto probe = probe_for(m, prof, j);
    auto rep = ns::verify_annihilation(probe, tol);
    ordered_json row;
    row["m"] = m;
    row["j"] = j;
    row["element"] = desc;
    row["points"] = N;
    row["max_residual"] = rep.max_residual;
    row["status"] = rep.pass ? "PASS" : "FAIL";
    row["tag"] = tag;
    if (!rep.pass) any_fail = true;
    rows.push_back(std::move(row));
  };

  if (cfg.m_max < 2) {
    ordered_json row;
    row["m"] = cfg.m_max;
    row["j"] = 0;
    row["element"] = "trivial kernel";
    row["points"] = 0;
    row["max_residual"] = 0.0;
    row["status"] = "PASS";
    row["tag"] = "kernel:" + cfg.kind + ":trivial";
    rows.push_back(std::move(row));
    write_output(cfg.common, meta,
                 {"m", "j", "element", "points", "max_residual", "status",
                  "tag"},
                 rows);
    return 0;
  }

  for (int m = std::max(2, cfg.m_min); m <= cfg.m_max; ++m) {
    auto basis = ns::kernel_basis(kind, cfg.n, m, lam);
    for (const auto& e : basis.elements)
      push_case(m, e.j, e.tag, e.description, e.profile);
  }

  if (cfg.inject) {
    // A deliberately off-kernel probe: shift the leading element's power by
    // a half step (upward, so every operator precondition still holds).
    int m = std::max(2, cfg.m_min);
    auto basis = ns::kernel_basis(kind, cfg.n, m, lam);
    const auto& e0 = basis.elements.front();
    fr::Profile probe_prof;
    std::string desc;
    if (kind == ns::TransformKind::Funk || kind == ns::TransformKind::Slice ||
        kind == ns::TransformKind::Hyperbolic) {
      auto base = e0.profile;
      probe_prof.eval = [base](double t) {
        return base.eval(t) * std::cos(t);
      };
      probe_prof.zero_exponent = e0.profile.zero_exponent;
      probe_prof.infinity_exponent = e0.profile.infinity_exponent;
      desc = e0.description + " * cos";
    } else {
      probe_prof = fr::Profile::power(e0.exponent + 0.5);
      desc = "t^" + fmt_short(e0.exponent + 0.5);
    }
    push_case(m, 0, "probe:non_kernel:" + cfg.kind + ":m" + std::to_string(m),
              desc, probe_prof);
  }

  write_output(
      cfg.common, meta,
      {"m", "j", "element", "points", "max_residual", "status", "tag"}, rows);
  return any_fail ? 1 : 0;
}

// ---------------------------------------------------------------------------
// identities subcommand
// ---------------------------------------------------------------------------

int run_identities(const Common& common, const std::string& only) {
  check_format(common);
  if (!only.empty() && only != "compose" && only != "mellin" &&
      only != "reflect" && only != "roundtrip")
    throw std::domain_error(
        "unknown identity group: " + only +
        " (expected compose|mellin|reflect|roundtrip)");
  auto want = [&](const char* name) { return only.empty() || only == name; };
  ordered_json meta;
  meta["command"] = "identities";
  meta["seed"] = common.seed;
  if (!only.empty()) meta["only"] = only;
  std::vector<ordered_json> rows;
  bool any_fail = false;

  auto push = [&](const std::string& tag, double residual, double tol) {
    ordered_json row;
    row["check"] = tag;
    row["residual"] = residual;
    row["tol"] = tol;
    bool pass = residual <= tol;
    row["status"] = pass ? "PASS" : "FAIL";
    if (!pass) any_fail = true;
    rows.push_back(std::move(row));
  };
  auto tol_or = [&](double dflt) {
    return common.tol > 0.0 ? common.tol : dflt;
  };

  // Composition: *G G = 2^(2 lambda+1) I^(2 lambda+1).
  std::vector<double> tgrid;
  for (int i = 0; i < 12; ++i) tgrid.push_back(0.3 + 2.2 * i / 11.0);
  if (want("compose"))
  for (double lam : {0.0, 0.5, 1.0})
    for (int m : {2, 3, 4})
      for (const char* pname : {"gauss", "exp"}) {
        fr::Profile f = pname == std::string("gauss")
                            ? fr::Profile::gaussian()
                            : fr::Profile::exp_decay();
        double res = fr::compose_identity_residual(lam, m, f, tgrid);
        std::ostringstream tag;
        tag << "identity:compose:l" << fmt_short(lam) << ":m" << m << ":"
            << pname;
        push(tag.str(), res, tol_or(1e-6));
      }

  // Mellin symbol vs numeric Mellin integral.
  if (want("mellin"))
  for (auto [lam, m] : std::vector<std::pair<double, int>>{{0.5, 2}, {1.0, 3}})
    for (int k = 1; k <= 5; ++k) {
      double z = m - 1 + 0.75 * k;
      double sym = fr::mellin_symbol(lam, m, {z, 0.0}).real();
      double num = fr::mellin_symbol_numeric(lam, m, z);
      double res = std::abs(sym - num) / std::max(std::abs(sym), 1e-30);
      std::ostringstream tag;
      tag << "identity:mellin:l" << fmt_short(lam) << ":m" << m << ":z"
          << fmt_short(z);
      push(tag.str(), res, tol_or(1e-7));
    }

  // Reflection formulas between left and right operators.
  fr::Profile fref;
  fref.eval = [](double t) { return std::exp(-t - 1.0 / t); };
  fref.zero_exponent = 50.0;
  fref.infinity_exponent = 50.0;
  std::vector<double> rgrid = {0.4, 0.7, 1.0, 1.6, 2.5};
  if (want("reflect"))
  for (double lam : {0.0, 0.5, 1.0})
    for (int m : {2, 3})
      for (bool starred : {false, true}) {
        auto res = fr::reflect(starred
                                   ? fr::ReflectMap::LeftFromRight_starred
                                   : fr::ReflectMap::LeftFromRight_unstarred,
                               lam, m, fref, rgrid);
        std::ostringstream tag;
        tag << "identity:reflect:" << (starred ? "starred" : "unstarred")
            << ":l" << fmt_short(lam) << ":m" << m;
        push(tag.str(), res.max_residual, tol_or(1e-8));
      }

  // Moment-space round trip: psi reconstructs phi, vanishes past support.
  if (want("roundtrip"))
  for (int m : {2, 4}) {
    double lam = 0.5;
    auto phi = ns::project_to_moment_space(fr::Profile::bump(1.0, 2.0), m, lam);
    auto psir = fr::reconstruct_psi(lam, m, phi);
    fr::OperatorParams right{lam, m, fr::Side::Right, false};
    quad::QuadratureSpec loose;
    loose.rel_tol = 1e-7;
    loose.abs_tol = 1e-9;
    double worst = 0.0;
    for (int i = 0; i <= 9; ++i) {
      double t = 1.05 + 0.9 * i / 9.0;
      double back = fr::gc_apply(right, psir.psi, t, loose);
      worst = std::max(worst, std::abs(back - phi.eval(t)));
    }
    std::ostringstream tag;
    tag << "identity:roundtrip:m" << m << ":sup";
    push(tag.str(), worst, tol_or(1e-5));
    double beyond = 0.0;
    for (double t : {2.2, 2.6, 3.0})
      beyond = std::max(beyond, std::abs(psir.psi.eval(t)));
    std::ostringstream tag2;
    tag2 << "identity:roundtrip:m" << m << ":beyond_support";
    push(tag2.str(), beyond, tol_or(1e-8));
  }

  write_output(common, meta, {"check", "residual", "tol", "status"}, rows);
  return any_fail ? 1 : 0;
}

// ---------------------------------------------------------------------------
// decompose subcommand
// ---------------------------------------------------------------------------

struct DecomposeCfg {
  Common common;
  std::string kind = "radon_exterior";
  int n = 2;
  int m = 2;
  double lambda = std::numeric_limits<double>::quiet_NaN();
  std::string input;
};

int run_decompose(const DecomposeCfg& cfg) {
  check_format(cfg.common);
  ns::TransformKind kind = kind_from_name(cfg.kind);
  std::optional<double> lam;
  if (!std::isnan(cfg.lambda)) {
    if (!(cfg.lambda > -0.5))
      throw std::domain_error(
          "invalid lambda: the operator scale requires lambda > -1/2");
    lam = cfg.lambda;
  }
  if (cfg.input.empty()) throw std::domain_error("--input is required");
  std::ifstream in(cfg.input);
  if (!in) throw std::domain_error("cannot open input file: " + cfg.input);
  std::vector<std::pair<double, double>> samples;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    try {
      double t = std::stod(line.substr(0, comma));
      double v = std::stod(line.substr(comma + 1));
      samples.emplace_back(t, v);
    } catch (const std::exception&) {
      continue; // tolerate a header line
    }
  }
  if (samples.empty())
    throw std::domain_error("no (t,value) samples found in " + cfg.input);

  auto result = ns::kernel_decompose(samples, kind, cfg.n, cfg.m, lam);
  auto basis = ns::kernel_basis(kind, cfg.n, cfg.m, lam);

  ordered_json meta;
  meta["command"] = "decompose";
  meta["kind"] = cfg.kind;
  meta["n"] = cfg.n;
  meta["m"] = cfg.m;
  if (lam) meta["lambda"] = *lam;
  meta["input"] = cfg.input;
  meta["samples"] = samples.size();
  meta["residual_norm"] = result.residual_norm;
  meta["relative_residual"] = result.relative_residual;
  meta["rank_deficient"] = result.rank_deficient;

  std::vector<ordered_json> rows;
  for (std::size_t j = 0; j < result.coefficients.size(); ++j) {
    ordered_json row;
    row["j"] = static_cast<int>(j + 1);
    row["element"] = basis.elements[j].description;
    row["coefficient"] = result.coefficients[j];
    row["tag"] = basis.elements[j].tag;
    rows.push_back(std::move(row));
  }
  write_output(cfg.common, meta, {"j", "element", "coefficient", "tag"}, rows);
  return 0;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "Output format: csv or json");
  cmd->add_option("--out", c.out, "Output path (default stdout)");
  cmd->add_option("--tol", c.tol, "Tolerance override");
  cmd->add_option("--seed", c.seed, "Seed for randomized geometries");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "geokern: fractional-integral operators, Radon-type transforms, and "
      "their null-space verification"};
  app.require_subcommand(1);

  TransformCfg tcfg;
  auto* t_cmd = app.add_subcommand(
      "transform", "Evaluate a transform of a separable function on a grid");
  t_cmd->add_option("--kind", tcfg.kind,
                    "radon|dual|cormack_quinto|funk|slice|hyperbolic");
  t_cmd->add_option("--n", tcfg.n, "Ambient dimension (2 or 3)");
  t_cmd->add_option("--m", tcfg.m, "Harmonic degree");
  t_cmd->add_option("--mu", tcfg.mu, "Harmonic index within the degree");
  t_cmd->add_option("--lambda", tcfg.lambda, "Operator scale (validated)");
  t_cmd->add_option("--region-a", tcfg.region_a, "Region radius metadata");
  t_cmd->add_option("--profile", tcfg.profile,
                    "gauss | exp | power:p | kernel:j=J | sum:w*atom,...");
  t_cmd->add_option("--grid", tcfg.grid, "Grid spec var:a:b:N");
  add_common(t_cmd, tcfg.common);

  VerifyCfg vcfg;
  auto* v_cmd = app.add_subcommand("verify-kernel",
                                   "Run an annihilation sweep over (m, j)");
  v_cmd->add_option("--kind", vcfg.kind,
                    "radon_exterior|dual_interior|cormack_quinto|funk|slice|"
                    "hyperbolic|gc_right|gc_left");
  v_cmd->add_option("--n", vcfg.n, "Ambient dimension (2 or 3)");
  v_cmd->add_option("--m-min", vcfg.m_min, "Lowest harmonic degree");
  v_cmd->add_option("--m-max", vcfg.m_max, "Highest harmonic degree");
  v_cmd->add_option("--mu", vcfg.mu, "Harmonic index within the degree");
  v_cmd->add_option("--lambda", vcfg.lambda,
                    "Operator scale (required for GC kinds)");
  v_cmd->add_option("--grid", vcfg.grid, "Grid spec var:a:b:N");
  v_cmd->add_flag("--inject-nonkernel", vcfg.inject,
                  "Append a deliberately off-kernel probe row");
  add_common(v_cmd, vcfg.common);

  Common icfg;
  std::string ionly;
  auto* i_cmd = app.add_subcommand(
      "identities",
      "Composition, Mellin, reflection, and round-trip identity checks");
  i_cmd->add_option("--only", ionly,
                    "Run a single group: compose|mellin|reflect|roundtrip");
  add_common(i_cmd, icfg);

  DecomposeCfg dcfg;
  auto* d_cmd = app.add_subcommand(
      "decompose", "Least-squares fit of samples onto a kernel basis");
  d_cmd->add_option("--kind", dcfg.kind, "Transform kind");
  d_cmd->add_option("--n", dcfg.n, "Ambient dimension");
  d_cmd->add_option("--m", dcfg.m, "Harmonic degree");
  d_cmd->add_option("--lambda", dcfg.lambda, "Operator scale (GC kinds)");
  d_cmd->add_option("--input", dcfg.input, "CSV of t,value samples");
  add_common(d_cmd, dcfg.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (t_cmd->parsed()) return run_transform(tcfg);
    if (v_cmd->parsed()) return run_verify_kernel(vcfg);
    if (i_cmd->parsed()) return run_identities(icfg, ionly);
    if (d_cmd->parsed()) return run_decompose(dcfg);
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
