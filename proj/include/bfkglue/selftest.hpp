// Randomised property suites over jets and one-dimensional mode data.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "coefficient_engine.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "spectral_models.hpp"
#include "symbol_engine.hpp"

namespace bfkglue {

struct SelftestOptions {
  std::uint64_t seed = 0;
  int count = 16;  // random cases per property
  int jobs = 1;
  bool inject_fault = false;  // flips the sign of one contour integral
};

struct PropertyOutcome {
  std::string name;
  int cases = 0;
  int failures = 0;
  double worst_defect = 0;
  double tolerance = 0;
};

struct SelftestResult {
  std::vector<PropertyOutcome> properties;
  json counterexamples = json::array();
  bool pass() const {
    for (const auto& p : properties)
      if (p.failures) return false;
    return !properties.empty();
  }
};

namespace selftest_detail {

/// Deterministic generator for case `index` of property `tag`.
inline std::mt19937_64 case_rng(std::uint64_t seed, int tag, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(tag),
                    static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

struct CaseResult {
  double defect = 0;
  bool pass = true;
  json detail;  // serialized counterexample inputs
};

inline double rel(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(a) + std::abs(b)); }

inline double lnpoly_gap(const LnPoly<double>& a, const LnPoly<double>& b) {
  return std::max(rel(a.real(), b.real()), std::abs(a.imag() - b.imag()));
}

inline CaseResult omega_cancellation(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> rank(1, 3);
  std::uniform_real_distribution<double> lam(0.0, 4.0);
  const int r0 = rank(rng);
  const MetricJet<double> jet = random_jet(rng, r0, true);
  MetricJet<double> other = jet;
  randomise_connection(other, rng);
  const double lambda = lam(rng);
  const auto z1 = zeta_densities(jet), z2 = zeta_densities(other);
  const auto h1 = heat_densities(jet, lambda), h2 = heat_densities(other, lambda);
  double d = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    d = std::max(d, lnpoly_gap(z1.q[k], z2.q[k]));
    d = std::max(d, lnpoly_gap(z1.pi[k], z2.pi[k]));
    d = std::max(d, rel(h1.v[k].re, h2.v[k].re));
  }
  return {d, d <= 1e-10, {{"lambda", lambda}, {"jet", jet_to_json(jet)}, {"jet_with_other_connection", jet_to_json(other)}}};
}

inline CaseResult pipeline_vs_closed_form(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> rank(1, 3);
  std::uniform_real_distribution<double> lam(0.0, 4.0);
  const MetricJet<double> jet = random_jet(rng, rank(rng), true);
  const double lambda = lam(rng);
  const auto z = zeta_densities(jet);
  const auto h = heat_densities(jet, lambda);
  const auto cf = closed_form_densities(jet, lambda);
  double d = std::max({lnpoly_gap(z.q[0], cf.q0), lnpoly_gap(z.pi[0], cf.pi0), lnpoly_gap(z.q[2], cf.q2),
                       lnpoly_gap(z.pi[2], cf.pi2), lnpoly_gap(z.q[1], LnPoly<double>()),
                       lnpoly_gap(z.pi[1], LnPoly<double>()), rel(h.v[0].re, cf.v0.re), rel(h.v[2].re, cf.v2.re),
                       std::abs(h.v[1].re)});
  return {d, d <= 1e-10, {{"lambda", lambda}, {"jet", jet_to_json(jet)}}};
}

inline CaseResult homogeneity(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> rank(1, 2);
  std::uniform_real_distribution<double> lam(0.0, 4.0);
  const MetricJet<double> jet = random_jet(rng, rank(rng), true);
  const double lambda = lam(rng);
  int bad = 0;
  try {
    for (Variant v : {Variant::kWeightTwo, Variant::kLambdaConstant}) {
      const auto dtn = dtn_symbols(jet, v, 3, lambda);
      for (int j = 0; j < 3; ++j)
        if (!dtn.theta[static_cast<std::size_t>(j)].homogeneous(1 - j)) ++bad;
      const auto res = resolvent_symbols(dtn, 3);
      for (int j = 0; j < 3; ++j)
        if (!res.layers[static_cast<std::size_t>(j)].homogeneous(-1 - j)) ++bad;
    }
  } catch (const std::logic_error&) {
    ++bad;
  }
  return {double(bad), bad == 0, {{"lambda", lambda}, {"jet", jet_to_json(jet)}}};
}

inline CaseResult two_route_curvature(std::mt19937_64& rng) {
  const MetricJet<double> jet = random_jet(rng, 1, true);
  const double closed = riemann_a3a3_closed(jet);
  const double direct = ambient_curvature_from_germ(jet).sum_R_a3a3;
  const double d = rel(closed, direct);
  return {d, d <= 1e-12, {{"closed", closed}, {"direct", direct}, {"jet", jet_to_json(jet)}}};
}

inline CaseResult per_mode_identity(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double L = 0.25 + 4 * u(rng);
  const double lambda = std::exp(std::log(1e-3) + u(rng) * std::log(1e6));
  const double mu = u(rng) < 0.1 ? 0.0 : std::exp(u(rng) * std::log(1e5));
  const double nu = std::sqrt(mu + lambda);
  const double lhs = lndet_1d(nu, L, OneDimKind::kCircle) - lndet_1d(nu, L, OneDimKind::kDirichletInterval) -
                     std::log(dtn_eigenvalue(mu, lambda, L));
  const double d = std::abs(lhs + std::numbers::ln2) / (1.0 + nu * L);
  return {d, d <= 1e-12, {{"L", L}, {"lambda", lambda}, {"mu", mu}, {"defect", lhs + std::numbers::ln2}}};
}

using Property = CaseResult (*)(std::mt19937_64&);

struct PropertySpec {
  const char* name;
  Property run;
  double tolerance;
};

inline const std::vector<PropertySpec>& properties() {
  static const std::vector<PropertySpec> p{{"omega_cancellation", omega_cancellation, 1e-10},
                                           {"homogeneity_audit", homogeneity, 0},
                                           {"two_route_curvature", two_route_curvature, 1e-12},
                                           {"per_mode_minus_ln2_identity", per_mode_identity, 1e-12},
                                           {"pipeline_vs_closed_form", pipeline_vs_closed_form, 1e-10}};
  return p;
}

}  // namespace selftest_detail

/// Runs every property on `count` cases. Cases are distributed over `jobs`
/// threads; results are assembled in case order so output is deterministic.
inline SelftestResult run_selftest(const SelftestOptions& opt) {
  using namespace selftest_detail;
  const bool saved = contour_fault_injection();
  contour_fault_injection() = opt.inject_fault;
  SelftestResult out;
  const auto& props = properties();
  const int n = std::max(opt.count, 1);
  const std::size_t total = props.size() * static_cast<std::size_t>(n);
  std::vector<CaseResult> results(total);
  std::vector<std::string> errors(total);
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t k = first; k < total; k += stride) {
      const std::size_t p = k / static_cast<std::size_t>(n);
      const int i = static_cast<int>(k % static_cast<std::size_t>(n));
      auto rng = case_rng(opt.seed, static_cast<int>(p), i);
      try {
        results[k] = props[p].run(rng);
      } catch (const std::exception& e) {
        results[k] = {std::numeric_limits<double>::infinity(), false, json::object()};
        errors[k] = e.what();
      }
    }
  };
  const std::size_t jobs = static_cast<std::size_t>(std::clamp(opt.jobs, 1, 64));
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(work, t, jobs);
    for (auto& th : pool) th.join();
  }
  contour_fault_injection() = saved;

  for (std::size_t p = 0; p < props.size(); ++p) {
    PropertyOutcome o{props[p].name, n, 0, 0, props[p].tolerance};
    for (int i = 0; i < n; ++i) {
      const std::size_t k = p * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
      const CaseResult& r = results[k];
      o.worst_defect = std::max(o.worst_defect, r.defect);
      if (r.pass) continue;
      ++o.failures;
      json ce = {{"property", props[p].name}, {"seed", opt.seed}, {"case", i}, {"defect", r.defect}, {"inputs", r.detail}};
      if (!errors[k].empty()) ce["exception"] = errors[k];
      out.counterexamples.push_back(ce);
    }
    out.properties.push_back(o);
  }
  return out;
}

inline json selftest_json(const SelftestOptions& opt, const SelftestResult& r) {
  json props = json::array();
  for (const auto& p : r.properties)
    props.push_back({{"name", p.name},
                     {"cases", p.cases},
                     {"failures", p.failures},
                     {"worst_defect", p.worst_defect},
                     {"tolerance", p.tolerance},
                     {"pass", p.failures == 0}});
  return {{"seed", opt.seed},
          {"count", opt.count},
          {"inject_fault", opt.inject_fault},
          {"properties", props},
          {"counterexamples", r.counterexamples},
          {"verdict", r.pass() ? "pass" : "fail"}};
}

}  // namespace bfkglue
