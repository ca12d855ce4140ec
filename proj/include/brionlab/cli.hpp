#pragma once
// Command implementations behind the brionlab tool, plus report serialization.
// Kept in the library so tests can drive each command without a process.

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "brionlab/brionlab.hpp"

#ifndef BRIONLAB_VERSION
#define BRIONLAB_VERSION "0.1.0"
#endif

namespace brionlab::cli {

using nlohmann::json;

enum class Command { validate, transform, verify, circle_scan, lemma_check, dominant_probe, bessel_table };
enum class Format { json, csv };

inline std::string command_name(Command c) {
  switch (c) {
    case Command::validate: return "validate";
    case Command::transform: return "transform";
    case Command::verify: return "verify";
    case Command::circle_scan: return "circle-scan";
    case Command::lemma_check: return "lemma-check";
    case Command::dominant_probe: return "dominant-probe";
    case Command::bessel_table: return "bessel-table";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Argument parsing helpers

/// "1.5", "-2i", "i", "0.3-1.2i", "1e-3+4i".
inline Complex parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw Error("empty complex literal");
  auto parse_real = [&](const std::string& part) -> Real {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    std::size_t used = 0;
    Real v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      throw Error("bad complex literal '" + text + "'");
    }
    if (used != part.size()) throw Error("bad complex literal '" + text + "'");
    return v;
  };
  if (s.back() != 'i') return parse_real(s);
  s.pop_back();
  // Split at the last sign that is not part of an exponent and not the leading sign.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  if (split == std::string::npos) return {0.0, parse_real(s)};
  return {parse_real(s.substr(0, split)), parse_real(s.substr(split))};
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

/// "start:stop:step" over reals (inclusive), or a comma list of complex literals.
inline std::vector<Complex> parse_alpha(const std::string& text) {
  std::vector<Complex> out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw Error("alpha range must be start:stop:step");
    const Real a = parse_complex(parts[0]).real(), b = parse_complex(parts[1]).real(),
               h = parse_complex(parts[2]).real();
    if (!(h > 0.0) || b < a) throw Error("alpha range needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((b - a) / h + 1e-9)) + 1;
    for (long k = 0; k < count; ++k) out.emplace_back(a + static_cast<Real>(k) * h, 0.0);
  } else {
    for (const auto& p : split(text, ',')) out.push_back(parse_complex(p));
  }
  for (const auto& a : out)
    if (a == Complex(0.0, 0.0)) throw Error("alpha must be nonzero");
  return out;
}

inline Vec parse_real_vector(const std::string& text) {
  const auto parts = split(text, ',');
  Vec v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Complex c = parse_complex(parts[k]);
    if (c.imag() != 0.0) throw Error("plane vectors must be real");
    v[static_cast<Eigen::Index>(k)] = c.real();
  }
  return v;
}

/// "v1;v2", each a comma list; orthonormalized.
inline Plane2 parse_plane(const std::string& text) {
  const auto parts = split(text, ';');
  if (parts.size() != 2) throw Error("plane must be given as \"v1;v2\"");
  return Plane2::orthonormalized(parse_real_vector(parts[0]), parse_real_vector(parts[1]));
}

/// Points separated by ';', coordinates by ','.
inline std::vector<CVec> parse_points(const std::string& text) {
  std::vector<CVec> out;
  for (const auto& p : split(text, ';')) {
    const auto parts = split(p, ',');
    CVec z(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t k = 0; k < parts.size(); ++k) z[static_cast<Eigen::Index>(k)] = parse_complex(parts[k]);
    out.push_back(z);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Configuration and reports

struct RunConfig {
  Command command = Command::validate;
  std::string polytope_path;
  std::string output_path;  // empty: stdout
  Format format = Format::json;
  std::uint64_t seed = 42;
  std::string z_text;
  std::string alpha_text;
  std::string plane_text;
  std::optional<int> n_max;
  int t_grid = 256;
  int fft_grid = 512;
  std::size_t samples = 100000;

  /// Parse-time checks: files exist, alpha nonzero, plane of rank 2.
  void validate() const {
    if (command != Command::bessel_table) {
      if (polytope_path.empty()) throw Error("--polytope is required for " + command_name(command));
      if (!std::filesystem::exists(polytope_path)) throw Error("polytope file '" + polytope_path + "' does not exist");
    }
    if (!alpha_text.empty()) (void)parse_alpha(alpha_text);
    if (!plane_text.empty()) (void)parse_plane(plane_text);
    if (t_grid < 1) throw Error("--t-grid must be positive");
    if (fft_grid < 4 || (fft_grid & (fft_grid - 1)) != 0) throw Error("--fft-grid must be a power of two >= 4");
    if (samples < 1) throw Error("--samples must be >= 1");
    if (n_max && *n_max < 0) throw Error("--n-max must be >= 0");
  }

  json echo() const {
    json j;
    j["polytope"] = polytope_path;
    j["format"] = format == Format::json ? "json" : "csv";
    j["seed"] = seed;
    j["z"] = z_text;
    j["alpha"] = alpha_text;
    j["plane"] = plane_text;
    j["n_max"] = n_max ? json(*n_max) : json(nullptr);
    j["t_grid"] = t_grid;
    j["fft_grid"] = fft_grid;
    j["samples"] = samples;
    return j;
  }
};

struct Report {
  std::string command;
  json config;
  std::string version = BRIONLAB_VERSION;
  std::vector<json> rows;
  json summary = json::object();
  bool pass = true;

  json to_json() const {
    json j;
    j["command"] = command;
    j["config"] = config;
    j["version"] = version;
    j["rows"] = rows;
    j["summary"] = summary;
    j["pass"] = pass;
    return j;
  }
};

inline std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_json(std::ostream& out, const json& j, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' '), close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out << ",\n";
        first = false;
        out << pad << json(k).dump() << ": ";
        write_json(out, v, indent + 2);
      }
      out << "\n" << close << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out << ",\n";
        out << pad;
        write_json(out, j[i], indent + 2);
      }
      out << "\n" << close << "]";
      return;
    }
    case json::value_t::number_float: out << format_number(j.get<double>()); return;
    default: out << j.dump(); return;
  }
}

inline std::string to_json_text(const Report& r) {
  std::ostringstream os;
  write_json(os, r.to_json());
  os << "\n";
  return os.str();
}

inline std::string csv_cell(const json& v) {
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  if (v.is_null()) return "";
  return v.dump();
}

/// Rows as CSV (columns: union of row keys, sorted), then "# summary" lines.
inline std::string to_csv_text(const Report& r) {
  std::set<std::string> keys;
  for (const auto& row : r.rows)
    for (const auto& [k, _] : row.items()) keys.insert(k);
  std::ostringstream os;
  bool first = true;
  for (const auto& k : keys) {
    os << (first ? "" : ",") << k;
    first = false;
  }
  os << "\n";
  for (const auto& row : r.rows) {
    first = true;
    for (const auto& k : keys) {
      os << (first ? "" : ",") << (row.contains(k) ? csv_cell(row[k]) : "");
      first = false;
    }
    os << "\n";
  }
  os << "# command," << r.command << "\n# version," << r.version << "\n";
  for (const auto& [k, v] : r.summary.items()) os << "# " << k << "," << csv_cell(v) << "\n";
  os << "# pass," << (r.pass ? "true" : "false") << "\n";
  return os.str();
}

inline void put_complex(json& row, const std::string& key, Complex c) {
  row[key + "_re"] = c.real();
  row[key + "_im"] = c.imag();
}

// ---------------------------------------------------------------------------
// Commands

namespace detail {

inline Report start(const RunConfig& cfg) {
  Report r;
  r.command = command_name(cfg.command);
  r.config = cfg.echo();
  return r;
}

inline Plane2 plane_or_default(const RunConfig& cfg, std::size_t dim) {
  if (cfg.plane_text.empty()) return Plane2::coordinate(dim);
  auto p = parse_plane(cfg.plane_text);
  if (p.dim() != dim) throw Error("--plane vectors must have the polytope's dimension");
  return p;
}

inline Complex single_alpha(const RunConfig& cfg, Complex fallback) {
  if (cfg.alpha_text.empty()) return fallback;
  const auto a = parse_alpha(cfg.alpha_text);
  if (a.size() != 1) throw Error("this command takes a single --alpha value");
  return a.front();
}

/// Returns (lo, hi) when P is an axis-parallel box.
inline std::optional<std::pair<Vec, Vec>> as_axis_box(const Polytope& p) {
  const auto d = static_cast<Eigen::Index>(p.dim());
  if (p.size() != (std::size_t{1} << p.dim())) return std::nullopt;
  Vec lo = p.vertex(0), hi = p.vertex(0);
  for (const auto& v : p.vertices()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  for (const auto& v : p.vertices())
    for (Eigen::Index k = 0; k < d; ++k)
      if (std::abs(v[k] - lo[k]) > geom_tol && std::abs(v[k] - hi[k]) > geom_tol) return std::nullopt;
  return std::make_pair(lo, hi);
}

}  // namespace detail

inline Report cmd_validate(const RunConfig& cfg) {
  auto r = detail::start(cfg);
  const auto p = load_polytope_file(cfg.polytope_path);
  const auto cones = decompose(p);
  std::size_t min_degree = p.size();
  for (std::size_t v = 0; v < p.size(); ++v) {
    json row;
    row["vertex"] = v;
    row["degree"] = p.neighbors(v).size();
    row["cones"] = cones.cones[v].size();
    Real det_sum = 0.0;
    for (const auto& s : cones.cones[v]) det_sum += s.det_abs;
    row["det_sum"] = det_sum;
    min_degree = std::min(min_degree, p.neighbors(v).size());
    r.rows.push_back(row);
  }
  const Real vol = volume(p);
  const auto at_zero = brion_transform(cones, CVec::Zero(static_cast<Eigen::Index>(p.dim())));
  const Real vol_err = std::abs(at_zero.value - vol) / vol;
  r.summary["dim"] = p.dim();
  r.summary["vertices"] = p.size();
  r.summary["edges"] = p.edges().size();
  r.summary["facets"] = p.facets().size();
  r.summary["simplicial_cones"] = cones.cone_count();
  r.summary["min_vertex_degree"] = min_degree;
  r.summary["volume"] = vol;
  r.summary["volume_from_transform"] = at_zero.value.real();
  r.summary["volume_rel_err"] = vol_err;
  r.pass = min_degree >= p.dim() && vol_err <= 1e-6;
  return r;
}

inline Report cmd_transform(const RunConfig& cfg) {
  auto r = detail::start(cfg);
  const auto p = load_polytope_file(cfg.polytope_path);
  if (cfg.z_text.empty()) throw Error("--z is required for transform");
  const auto cones = decompose(p);
  std::size_t i = 0;
  for (const auto& z : parse_points(cfg.z_text)) {
    const auto tv = brion_transform(cones, z);
    json row;
    row["point"] = i++;
    for (Eigen::Index k = 0; k < z.size(); ++k) put_complex(row, "z" + std::to_string(k), z[k]);
    put_complex(row, "value", tv.value);
    row["min_denom"] = tv.min_denom;
    row["perturbed"] = tv.perturbed;
    row["err_estimate"] = tv.err_estimate;
    r.rows.push_back(row);
  }
  r.summary["points"] = r.rows.size();
  return r;
}

inline constexpr Real box_tolerance = 1e-10;
inline constexpr Real simplex_tolerance = 1e-9;
inline constexpr Real mc_sigmas = 5.0;

/**
 * Brion values against the box oracle (axis boxes), the divided-difference
 * oracle (simplices, and summed over a pulling triangulation for any P), and
 * stratified Monte Carlo, at 20 seeded random points.
 */
inline Report cmd_verify(const RunConfig& cfg) {
  auto r = detail::start(cfg);
  const auto p = load_polytope_file(cfg.polytope_path);
  const auto cones = decompose(p);
  const auto box = detail::as_axis_box(p);
  const auto simplices = triangulate_polytope(p);
  const auto d = static_cast<Eigen::Index>(p.dim());

  std::mt19937_64 rng(cfg.seed);
  auto uniform = [&](Real a, Real b) { return a + (b - a) * brionlab::detail::unit_real(rng()); };
  Real max_box = 0.0, max_simplex = 0.0, max_sigma = 0.0;
  bool pass = true;
  for (int k = 0; k < 20; ++k) {
    CVec z(d);
    for (Eigen::Index j = 0; j < d; ++j) z[j] = Complex(uniform(-2.0, 2.0), uniform(-0.5, 0.5));
    const Complex b = brion_transform(cones, z).value;
    auto rel = [&](Complex ref) { return std::abs(b - ref) / (1.0 + std::abs(ref)); };

    json row;
    row["point"] = k;
    put_complex(row, "brion", b);
    if (box) {
      const Real e = rel(box_transform_exact(box->first, box->second, z));
      row["box_rel_err"] = e;
      max_box = std::max(max_box, e);
    }
    Complex tri{0.0, 0.0};
    for (const auto& s : simplices) {
      std::vector<Vec> pts;
      for (auto i : s) pts.push_back(p.vertex(i));
      tri += simplex_transform_exact(pts, z);
    }
    const Real es = rel(tri);
    row["simplex_rel_err"] = es;
    max_simplex = std::max(max_simplex, es);
    const auto mc = monte_carlo_transform(p, z, cfg.samples, cfg.seed + static_cast<std::uint64_t>(k));
    const Real sig = std::abs(mc.value - b) / std::max(mc.std_error, 1e-300);
    row["mc_sigmas"] = sig;
    row["mc_std_error"] = mc.std_error;
    max_sigma = std::max(max_sigma, sig);
    const bool ok = (!box || row["box_rel_err"].get<double>() <= box_tolerance) && es <= simplex_tolerance &&
                    std::abs(mc.value - b) <= mc_sigmas * mc.std_error + 1e-12;
    row["pass"] = ok;
    pass = pass && ok;
    r.rows.push_back(row);
  }
  if (box) r.summary["max_box_rel_err"] = max_box;
  r.summary["max_simplex_rel_err"] = max_simplex;
  r.summary["max_mc_sigmas"] = max_sigma;
  r.summary["box_tolerance"] = box_tolerance;
  r.summary["simplex_tolerance"] = simplex_tolerance;
  r.summary["mc_sigma_bound"] = mc_sigmas;
  r.pass = pass;
  return r;
}

inline Report cmd_circle_scan(const RunConfig& cfg) {
  auto r = detail::start(cfg);
  const auto p = load_polytope_file(cfg.polytope_path);
  const auto plane = detail::plane_or_default(cfg, p.dim());
  const auto alphas = parse_alpha(cfg.alpha_text.empty() ? std::string("0.1:5.0:0.1") : cfg.alpha_text);
  const auto rows = circle_scan(p, plane, alphas, cfg.t_grid);
  Real min_all = std::numeric_limits<Real>::infinity();
  std::size_t flagged = 0;
  for (const auto& s : rows) {
    json row;
    put_complex(row, "alpha", s.alpha);
    row["min_modulus"] = s.min_modulus;
    row["argmin_t"] = s.argmin_t;
    row["flagged"] = s.flagged;
    min_all = std::min(min_all, s.min_modulus);
    flagged += s.flagged ? 1 : 0;
    r.rows.push_back(row);
  }
  r.summary["rows"] = rows.size();
  r.summary["min_modulus"] = min_all;
  r.summary["flagged"] = flagged;
  r.pass = flagged == 0;
  return r;
}

inline constexpr Real lemma_tolerance = 1e-8;

inline Report cmd_lemma_check(const RunConfig& cfg) {
  auto r = detail::start(cfg);
  const auto p = load_polytope_file(cfg.polytope_path);
  const auto spec = CircleSpec::make(detail::plane_or_default(cfg, p.dim()), detail::single_alpha(cfg, 1.0));
  int n_max = 0;
  if (cfg.n_max) {
    n_max = *cfg.n_max;
  } else {
    require_plane_ok(p, spec.plane);
    const auto coord = Plane2::coordinate(p.dim());
    n_max = build_circle_model(rotated(p, rotation_to_plane(spec.plane)), CircleSpec::make(coord, spec.alpha))
                .max_pv_degree() + 40;
  }
  const auto rep = lemma_check(p, spec, n_max, cfg.fft_grid);
  for (const auto& row : rep.rows) {
    json j;
    j["n"] = row.n;
    put_complex(j, "lhs", row.lhs);
    put_complex(j, "fft", row.fft);
    j["mismatch"] = row.mismatch;
    j["coefficient_mismatch"] = row.coefficient_mismatch;
    r.rows.push_back(j);
  }
  r.summary["degree_p"] = rep.degree_p;
  r.summary["N"] = rep.max_degree;
  r.summary["fft_grid_used"] = rep.grid;
  r.summary["max_mismatch"] = rep.max_mismatch;
  r.summary["tolerance"] = lemma_tolerance;
  r.pass = rep.max_mismatch <= lemma_tolerance;
  return r;
}

inline constexpr Real probe_tolerance = 0.05;

inline Report cmd_dominant_probe(const RunConfig& cfg) {
  auto r = detail::start(cfg);
  const auto p = load_polytope_file(cfg.polytope_path);
  const auto plane = detail::plane_or_default(cfg, p.dim());
  require_plane_ok(p, plane);
  const auto coord = Plane2::coordinate(p.dim());
  const auto q = normalize_for_probe(rotated(p, rotation_to_plane(plane)), coord);
  const auto model = build_circle_model(q, CircleSpec::make(coord, detail::single_alpha(cfg, 0.5)));
  const int n_max = cfg.n_max.value_or(model.max_pv_degree() + 40);
  const auto rep = dominant_probe(model, n_max);
  const Real cu = std::abs(rep.c_uN);
  for (const auto& row : rep.rows) {
    json j;
    j["n"] = row.n;
    put_complex(j, "scaled", row.scaled);
    put_complex(j, "exact_scaled", row.exact_scaled);
    j["rel_deviation"] = std::abs(row.scaled - rep.target) / cu;
    j["exact_rel_deviation"] = std::abs(row.exact_scaled - rep.target) / cu;
    r.rows.push_back(j);
  }
  r.summary["u"] = rep.u;
  r.summary["N"] = rep.max_degree;
  r.summary["r_u"] = rep.r_u;
  r.summary["r_second"] = rep.r_second;
  put_complex(r.summary, "c_uN", rep.c_uN);
  put_complex(r.summary, "target", rep.target);
  r.summary["final_rel_deviation"] = rep.final_deviation() / cu;
  r.summary["final_exact_rel_deviation"] = rep.final_exact_deviation() / cu;
  r.summary["tolerance"] = probe_tolerance;
  r.pass = !rep.rows.empty() && rep.final_deviation() <= probe_tolerance * cu;
  return r;
}

inline Report cmd_bessel_table(const RunConfig& cfg) {
  auto r = detail::start(cfg);
  std::vector<Complex> zs;
  if (cfg.z_text.empty()) {
    zs = {1.0, 2.0, Complex(1.0, 1.0), 5.0};
  } else {
    for (const auto& s : split(cfg.z_text, ',')) zs.push_back(parse_complex(s));
  }
  const int n_max = cfg.n_max.value_or(10);
  Real worst = 0.0;
  for (const auto& z : zs) {
    for (int n = -n_max; n <= n_max; ++n) {
      const Complex series = bessel_j(n, z), integral = bessel_j_integral(n, z);
      json j;
      j["n"] = n;
      put_complex(j, "z", z);
      put_complex(j, "series", series);
      put_complex(j, "integral", integral);
      j["difference"] = std::abs(series - integral);
      if (n >= 1 && z != Complex(0.0, 0.0)) put_complex(j, "asymptotic_ratio", asymptotic_ratio(n, z));
      if (std::abs(z) <= 5.0) worst = std::max(worst, std::abs(series - integral));
      r.rows.push_back(j);
    }
  }
  r.summary["max_difference_small_z"] = worst;
  r.summary["tolerance"] = 1e-10;
  r.pass = worst <= 1e-10;
  return r;
}

inline Report run(const RunConfig& cfg) {
  cfg.validate();
  switch (cfg.command) {
    case Command::validate: return cmd_validate(cfg);
    case Command::transform: return cmd_transform(cfg);
    case Command::verify: return cmd_verify(cfg);
    case Command::circle_scan: return cmd_circle_scan(cfg);
    case Command::lemma_check: return cmd_lemma_check(cfg);
    case Command::dominant_probe: return cmd_dominant_probe(cfg);
    case Command::bessel_table: return cmd_bessel_table(cfg);
  }
  throw Error("unknown command");
}

inline std::string serialize(const Report& r, Format f) { return f == Format::json ? to_json_text(r) : to_csv_text(r); }

}  // namespace brionlab::cli
