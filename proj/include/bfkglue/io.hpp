// JSON input and output: jet documents, model configurations, coefficient
// reports, experiment reports and symbol dumps.
#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "coefficient_engine.hpp"
#include "harness.hpp"
#include "symbol_engine.hpp"

namespace bfkglue {

using json = nlohmann::ordered_json;

/// Invalid input document; `where()` names the offending field or line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// Parses text, reporting syntax errors with line and column.
inline json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col), "JSON syntax error");
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

// ---------------------------------------------------------------------------
// Exact numbers.
// ---------------------------------------------------------------------------

inline json rational_json(const Rational& r) {
  return {{"num", boost::multiprecision::numerator(r).str()}, {"den", boost::multiprecision::denominator(r).str()}};
}

namespace io_detail {

inline void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError(path + "/" + k, "unknown field");
}

template <class T>
T number(const json& j, const std::string& path) {
  if (j.is_number()) {
    if constexpr (std::is_same_v<T, Rational>) {
      if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
      return Rational(j.get<double>());  // exact binary value of the double
    } else {
      return j.get<double>();
    }
  }
  if (j.is_object() && j.contains("num") && j.contains("den") && j.size() == 2) {
    auto part = [&](const json& v, const char* name) {
      if (v.is_number_integer()) return boost::multiprecision::cpp_int(v.get<std::int64_t>());
      if (v.is_string()) {
        try {
          return boost::multiprecision::cpp_int(v.get<std::string>());
        } catch (const std::exception&) {
        }
      }
      throw ConfigError(path + "/" + name, "expected an integer");
    };
    const auto n = part(j["num"], "num"), d = part(j["den"], "den");
    if (d == 0) throw ConfigError(path + "/den", "zero denominator");
    const Rational r(n, d);
    if constexpr (std::is_same_v<T, Rational>)
      return r;
    else
      return r.convert_to<double>();
  }
  throw ConfigError(path, "expected a number or {\"num\", \"den\"}");
}

template <class T>
Sym2<T> sym2(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(path, "expected a 2x2 matrix");
  Sym2<T> m;
  for (std::size_t a = 0; a < 2; ++a) {
    const std::string rp = path + "/" + std::to_string(a);
    if (!j[a].is_array() || j[a].size() != 2) throw ConfigError(rp, "expected a row of length 2");
    for (std::size_t b = 0; b < 2; ++b) m[a][b] = number<T>(j[a][b], rp + "/" + std::to_string(b));
  }
  if (to_double(m[0][1]) != to_double(m[1][0])) throw ConfigError(path, "matrix is not symmetric");
  return m;
}

template <class T>
RealMat<T> square(const json& j, const std::string& path, int r0) {
  const auto n = static_cast<std::size_t>(r0);
  if (!j.is_array() || j.size() != n) throw ConfigError(path, "expected " + std::to_string(r0) + " rows");
  RealMat<T> m(n * n, T(0));
  for (std::size_t a = 0; a < n; ++a) {
    const std::string rp = path + "/" + std::to_string(a);
    if (!j[a].is_array() || j[a].size() != n) throw ConfigError(rp, "expected a row of length " + std::to_string(r0));
    for (std::size_t b = 0; b < n; ++b) m[a * n + b] = number<T>(j[a][b], rp + "/" + std::to_string(b));
  }
  return m;
}

}  // namespace io_detail

// ---------------------------------------------------------------------------
// Jets.
// ---------------------------------------------------------------------------

/// Parses a jet document. Required: rank_r0, tau_N, g_n1, g_n2. Optional
/// (default zero): g_n1_d {d1, d2}, omega {o1, o2, om},
/// omega_d {d11, d12, d21, d22, dmm}, endo_E.
template <class T>
MetricJet<T> parse_jet(const json& j) {
  using namespace io_detail;
  check_keys(j, "", {"rank_r0", "tau_N", "g_n1", "g_n2", "g_n1_d", "omega", "omega_d", "endo_E"});
  for (const char* k : {"rank_r0", "tau_N", "g_n1", "g_n2"})
    if (!j.contains(k)) throw ConfigError(std::string("/") + k, "missing required field");
  if (!j["rank_r0"].is_number_integer() || j["rank_r0"].get<std::int64_t>() < 1 || j["rank_r0"].get<std::int64_t>() > 16)
    throw ConfigError("/rank_r0", "expected an integer in 1..16");
  const int r0 = j["rank_r0"].get<int>();
  MetricJet<T> m = MetricJet<T>::flat(r0);
  m.tau_N = number<T>(j["tau_N"], "/tau_N");
  m.g_n1 = sym2<T>(j["g_n1"], "/g_n1");
  m.g_n2 = sym2<T>(j["g_n2"], "/g_n2");
  if (j.contains("g_n1_d")) {
    const json& d = j["g_n1_d"];
    check_keys(d, "/g_n1_d", {"d1", "d2"});
    if (d.contains("d1")) m.g_n1_d[0] = sym2<T>(d["d1"], "/g_n1_d/d1");
    if (d.contains("d2")) m.g_n1_d[1] = sym2<T>(d["d2"], "/g_n1_d/d2");
  }
  if (j.contains("omega")) {
    const json& o = j["omega"];
    check_keys(o, "/omega", {"o1", "o2", "om"});
    const char* names[] = {"o1", "o2", "om"};
    for (std::size_t k = 0; k < 3; ++k)
      if (o.contains(names[k])) m.omega[k] = square<T>(o[names[k]], std::string("/omega/") + names[k], r0);
  }
  if (j.contains("omega_d")) {
    const json& o = j["omega_d"];
    check_keys(o, "/omega_d", {"d11", "d12", "d21", "d22", "dmm"});
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) {
        const std::string key = "d" + std::to_string(a + 1) + std::to_string(b + 1);
        if (o.contains(key)) m.omega_d[a][b] = square<T>(o[key], "/omega_d/" + key, r0);
      }
    if (o.contains("dmm")) m.omega_dmm = square<T>(o["dmm"], "/omega_d/dmm", r0);
  }
  if (j.contains("endo_E")) m.endo_E = square<T>(j["endo_E"], "/endo_E", r0);
  return m;
}

inline json jet_to_json(const MetricJet<double>& m) {
  const auto n = static_cast<std::size_t>(m.rank_r0);
  auto sq = [&](const RealMat<double>& a) {
    json rows = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      json row = json::array();
      for (std::size_t k = 0; k < n; ++k) row.push_back(a[i * n + k]);
      rows.push_back(row);
    }
    return rows;
  };
  auto s2 = [](const Sym2<double>& a) { return json::array({json::array({a[0][0], a[0][1]}), json::array({a[1][0], a[1][1]})}); };
  json j;
  j["rank_r0"] = m.rank_r0;
  j["tau_N"] = m.tau_N;
  j["g_n1"] = s2(m.g_n1);
  j["g_n2"] = s2(m.g_n2);
  j["g_n1_d"] = {{"d1", s2(m.g_n1_d[0])}, {"d2", s2(m.g_n1_d[1])}};
  j["omega"] = {{"o1", sq(m.omega[0])}, {"o2", sq(m.omega[1])}, {"om", sq(m.omega[2])}};
  j["omega_d"] = {{"d11", sq(m.omega_d[0][0])}, {"d12", sq(m.omega_d[0][1])}, {"d21", sq(m.omega_d[1][0])},
                  {"d22", sq(m.omega_d[1][1])}, {"dmm", sq(m.omega_dmm)}};
  j["endo_E"] = sq(m.endo_E);
  return j;
}

// ---------------------------------------------------------------------------
// Coefficient report.
// ---------------------------------------------------------------------------

namespace io_detail {

/// Density c0 + c1 ln2 in units of 1/pi, with the ln^2 2 part required to vanish.
inline json lnpoly_json(const LnPoly<Rational>& p) {
  for (const auto& g : p.c)
    if (!is_zero(g.im)) throw std::logic_error("density has an imaginary part");
  if (!is_zero(p.c[2].re)) throw std::logic_error("density has a ln^2 2 part");
  return {{"times_pi", {{"rational", rational_json(p.c[0].re)}, {"ln2", rational_json(p.c[1].re)}}},
          {"value", p.real() / std::numbers::pi}};
}
inline json scalar_json(const Gauss<Rational>& g) {
  if (!is_zero(g.im)) throw std::logic_error("density has an imaginary part");
  return {{"times_pi", {{"rational", rational_json(g.re)}, {"ln2", rational_json(Rational(0))}}},
          {"value", to_double(g.re) / std::numbers::pi}};
}
inline json sfunction_json(const SFunction<Rational>& f) {
  json atoms = json::array();
  for (const auto& a : f.atoms()) atoms.push_back({{"coef_re", rational_json(a.coef.re)}, {"coef_im", rational_json(a.coef.im)}, {"num_shifts", a.num}, {"den_shifts", a.den}});
  const auto l = f.laurent_at_zero();
  return {{"form", "sum coef * 2^-s * prod(s + num) / prod(s + den), times 1/pi"},
          {"atoms", atoms},
          {"value_at_0", lnpoly_json(l[1])},
          {"derivative_at_0", lnpoly_json(l[2])}};
}

}  // namespace io_detail

/// Full density report for one jet, computed in exact rational arithmetic.
inline json coefficient_report(const MetricJet<Rational>& jet, const Rational& lambda) {
  using namespace io_detail;
  const ZetaDensities<Rational> z = zeta_densities(jet);
  const HeatDensities<Rational> h = heat_densities(jet, lambda);
  const ClosedForm<Rational> cf = closed_form_densities(jet, lambda);
  json d;
  for (int k = 0; k < 3; ++k) {
    d["q" + std::to_string(k)] = lnpoly_json(z.q[static_cast<std::size_t>(k)]);
    d["pi" + std::to_string(k)] = lnpoly_json(z.pi[static_cast<std::size_t>(k)]);
  }
  for (int k = 0; k < 3; ++k) d["v" + std::to_string(k)] = scalar_json(h.v[static_cast<std::size_t>(k)]);
  d["c0"] = scalar_json(Gauss<Rational>());
  d["c1"] = scalar_json(cf.c1);
  d["c2"] = scalar_json(Gauss<Rational>());
  d["c3"] = scalar_json(cf.c3);
  const LnPoly<Rational> a1 = LnPoly<Rational>(cf.c1) - z.pi[0];
  const LnPoly<Rational> a0 = z.pi[2] * Gauss<Rational>(Rational(-1));
  d["a0"] = lnpoly_json(a0);
  d["a1"] = lnpoly_json(a1);

  json closed;
  closed["q0"] = lnpoly_json(cf.q0);
  closed["pi0"] = lnpoly_json(cf.pi0);
  closed["q2"] = lnpoly_json(cf.q2);
  closed["pi2"] = lnpoly_json(cf.pi2);
  closed["v0"] = scalar_json(cf.v0);
  closed["v2"] = scalar_json(cf.v2);

  json checks;
  checks["q0_equals_minus_c1"] = z.q[0] == LnPoly<Rational>(cf.c1 * Rational(-1));
  checks["q2_equals_c3"] = z.q[2] == LnPoly<Rational>(cf.c3);
  checks["a0_equals_minus_pi2"] = a0 == cf.a0;
  checks["a1_equals_r0_ln2_over_4pi"] = a1 == LnPoly<Rational>(Gauss<Rational>(), Gauss<Rational>(Rational(jet.rank_r0, 4)));
  checks["pipeline_equals_closed_form"] = z.q[0] == cf.q0 && z.pi[0] == cf.pi0 && z.q[2] == cf.q2 && z.pi[2] == cf.pi2 &&
                                         h.v[0] == cf.v0 && h.v[2] == cf.v2 && z.q[1] == LnPoly<Rational>() &&
                                         z.pi[1] == LnPoly<Rational>() && h.v[1].zero();

  json groups, heat_groups;
  for (int g = 0; g < kResolventGroups; ++g) {
    groups[resolvent_group_name(g)] = sfunction_json(z.groups[static_cast<std::size_t>(g)]);
    heat_groups[resolvent_group_name(g)] = scalar_json(h.groups[static_cast<std::size_t>(g)]);
  }
  for (int g = 1; g <= kThetaGroups; ++g) {
    groups["E" + std::to_string(g)] = sfunction_json(z.e_groups[static_cast<std::size_t>(g)]);
    heat_groups["E" + std::to_string(g)] = scalar_json(h.e_groups[static_cast<std::size_t>(g)]);
  }

  json out;
  out["lambda"] = {{"rational", rational_json(lambda)}, {"value", to_double(lambda)}};
  out["units"] = "each density is (rational + ln2 * ln2_coefficient) / pi; 'value' is the decimal density";
  out["densities"] = d;
  out["closed_form"] = closed;
  out["checks"] = checks;
  out["J2"] = sfunction_json(z.J[2]);
  out["breakdown"] = {{"zeta_J2_groups", groups}, {"heat_v2_groups", heat_groups}};
  return out;
}

/// Debug dump of a symbol: one entry per term with the Taylor table of the
/// coefficient matrix (real and imaginary parts, row-major per monomial).
template <class T>
json symbol_to_json(const SymbolExpr<T>& e) {
  json terms = json::array();
  for (const auto& [k, c] : e.terms()) {
    json coef = json::array();
    for (int m = 0; m < jet_detail::kMonomials; ++m) {
      const auto& mat = c.coef(m);
      if (mat.zero()) continue;
      const auto& ex = jet_detail::kExp[static_cast<std::size_t>(m)];
      json re = json::array(), im = json::array();
      for (int i = 0; i < mat.rank(); ++i)
        for (int j = 0; j < mat.rank(); ++j) {
          re.push_back(to_double(mat(i, j).re));
          im.push_back(to_double(mat(i, j).im));
        }
      coef.push_back({{"monomial", {ex[0], ex[1], ex[2]}}, {"re", re}, {"im", im}});
    }
    terms.push_back({{"xi1", k.a}, {"xi2", k.b}, {"Q_half_power", k.q2}, {"R_power", -k.d}, {"order", c.order()}, {"coef", coef}});
  }
  return {{"variant", variant_name(e.ctx().variant)}, {"terms", terms}};
}

// ---------------------------------------------------------------------------
// Model configurations and experiment reports.
// ---------------------------------------------------------------------------

inline ModelConfig parse_model_config(const json& j) {
  using namespace io_detail;
  check_keys(j, "", {"cross_section", "l1", "l2", "radius", "L", "lambda_grid", "t_grid", "tol", "lambda_asym_grid",
                     "kernel_lambdas", "heat_lambda", "warped", "target_offsets"});
  ModelConfig c;
  if (!j.contains("cross_section") || !j["cross_section"].is_string()) throw ConfigError("/cross_section", "expected \"torus\" or \"sphere\"");
  const std::string cs = j["cross_section"].get<std::string>();
  auto positive = [&](const char* key, double& out) {
    if (!j.contains(key)) return;
    out = number<double>(j[key], std::string("/") + key);
    if (!(out > 0)) throw ConfigError(std::string("/") + key, "must be positive");
  };
  if (cs == "torus") {
    c.cross_section = CrossSection::kTorus;
    if (j.contains("radius")) throw ConfigError("/radius", "not allowed for a torus cross-section");
    positive("l1", c.l1);
    positive("l2", c.l2);
  } else if (cs == "sphere") {
    c.cross_section = CrossSection::kSphere;
    if (j.contains("l1") || j.contains("l2")) throw ConfigError("/l1", "not allowed for a sphere cross-section");
    positive("radius", c.radius);
  } else {
    throw ConfigError("/cross_section", "expected \"torus\" or \"sphere\"");
  }
  positive("L", c.L);
  positive("tol", c.tol);
  auto grid = [&](const char* key, std::vector<double>& out) {
    if (!j.contains(key)) return;
    const std::string p = std::string("/") + key;
    if (!j[key].is_array() || j[key].empty()) throw ConfigError(p, "expected a non-empty array");
    out.clear();
    for (std::size_t i = 0; i < j[key].size(); ++i) {
      out.push_back(number<double>(j[key][i], p + "/" + std::to_string(i)));
      if (!(out.back() > 0)) throw ConfigError(p + "/" + std::to_string(i), "must be positive");
    }
  };
  grid("lambda_grid", c.lambda_grid);
  grid("t_grid", c.t_grid);
  grid("lambda_asym_grid", c.lambda_asym_grid);
  grid("kernel_lambdas", c.kernel_lambdas);
  if (j.contains("heat_lambda")) {
    c.heat_lambda = number<double>(j["heat_lambda"], "/heat_lambda");
    if (c.heat_lambda < 0) throw ConfigError("/heat_lambda", "must be non-negative");
  }
  if (j.contains("warped")) {
    const json& w = j["warped"];
    check_keys(w, "/warped", {"fp", "fpp", "tau_h", "vol"});
    auto list = [&](const char* key, std::vector<double>& out) {
      if (!w.contains(key)) return;
      const std::string p = std::string("/warped/") + key;
      if (!w[key].is_array() || w[key].empty()) throw ConfigError(p, "expected a non-empty array");
      out.clear();
      for (std::size_t i = 0; i < w[key].size(); ++i) out.push_back(number<double>(w[key][i], p + "/" + std::to_string(i)));
    };
    list("fp", c.warped.fp);
    list("fpp", c.warped.fpp);
    if (w.contains("tau_h")) c.warped.tau_h = number<double>(w["tau_h"], "/warped/tau_h");
    if (w.contains("vol")) {
      c.warped.vol = number<double>(w["vol"], "/warped/vol");
      if (!(c.warped.vol > 0)) throw ConfigError("/warped/vol", "must be positive");
    }
  }
  if (j.contains("target_offsets")) {
    const json& t = j["target_offsets"];
    if (!t.is_object()) throw ConfigError("/target_offsets", "expected an object");
    for (const auto& [k, v] : t.items()) c.target_offsets[k] = number<double>(v, "/target_offsets/" + k);
  }
  return c;
}

/// Fully resolved configuration, defaults included.
inline json model_config_json(const ModelConfig& c) {
  json j;
  if (c.cross_section == CrossSection::kTorus) {
    j["cross_section"] = "torus";
    j["l1"] = c.l1;
    j["l2"] = c.l2;
  } else {
    j["cross_section"] = "sphere";
    j["radius"] = c.radius;
  }
  j["L"] = c.L;
  j["lambda_grid"] = c.lambda_grid;
  j["t_grid"] = c.t_grid;
  j["tol"] = c.tol;
  j["lambda_asym_grid"] = c.lambda_asym_grid;
  j["kernel_lambdas"] = c.kernel_lambdas;
  j["heat_lambda"] = c.heat_lambda;
  j["warped"] = {{"fp", c.warped.fp}, {"fpp", c.warped.fpp}, {"tau_h", c.warped.tau_h}, {"vol", c.warped.vol}};
  if (!c.target_offsets.empty()) j["target_offsets"] = c.target_offsets;
  return j;
}

/// report.json content; runtime is deliberately excluded so that reports are
/// byte-identical across runs.
inline json report_json(const ExperimentReport& r, const ModelConfig& cfg) {
  json targets = json::array(), fitted = json::array(), comps = json::array(), audit = json::object();
  for (const auto& t : r.targets) targets.push_back({{"name", t.name}, {"value", t.value}, {"provenance", t.provenance}});
  for (const auto& f : r.fitted) fitted.push_back({{"name", f.name}, {"value", f.value}, {"stderr", f.stderr_}});
  for (const auto& c : r.comparisons)
    comps.push_back({{"name", c.name},
                     {"observed", c.observed},
                     {"target", c.target},
                     {"error", c.error},
                     {"tolerance", c.tolerance},
                     {"tolerance_kind", c.kind == ToleranceKind::kAbsolute ? "absolute" : "relative"},
                     {"pass", c.pass}});
  for (const auto& [k, v] : r.audit) audit[k] = v;
  json j;
  j["id"] = r.id;
  j["config"] = model_config_json(cfg);
  j["targets"] = targets;
  j["fitted"] = fitted;
  j["comparisons"] = comps;
  j["verdict"] = r.verdict ? "pass" : "fail";
  j["audit"] = audit;
  return j;
}

inline std::string plot_csv(const ExperimentReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << r.plot_header << "\n";
  for (const auto& row : r.plot) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  return os.str();
}

}  // namespace bfkglue
