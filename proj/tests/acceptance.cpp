// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bfkglue/harness.hpp"

using namespace bfkglue;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;
using R = Rational;
using GR = Gauss<Rational>;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what;
      pass = false;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b))); }

/// Relative error with an absolute floor for values that vanish.
double rel_or_abs(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s < 1e-3 ? std::abs(a - b) : std::abs(a - b) / s;
}

SFunction<R> single_atom(R coef, std::vector<int> num, std::vector<int> den) {
  SFunction<R> f;
  f.add({GR(coef), std::move(num), std::move(den)});
  return f;
}

bool same_atoms(const SFunction<R>& f, const SFunction<R>& g) { return f.equals(g) && g.equals(f); }

MetricJet<R> rational_jet(std::mt19937_64& rng, int r0) {
  std::uniform_int_distribution<int> u(-9, 9);
  auto q = [&] { return R(u(rng), 5); };
  MetricJet<R> j = MetricJet<R>::flat(r0);
  j.tau_N = q();
  const R a = q(), b = q(), c = q(), d = q(), e = q(), f = q();
  j.g_n1 = {{{a, b}, {b, c}}};
  j.g_n2 = {{{d, e}, {e, f}}};
  for (auto& m : j.g_n1_d) {
    const R x = q(), y = q(), z = q();
    m = {{{x, y}, {y, z}}};
  }
  for (auto& o : j.omega)
    for (auto& v : o) v = q();
  for (auto& v : j.endo_E) v = q();
  return j;
}

const Comparison& comparison(const ExperimentReport& r, const std::string& name) {
  for (const auto& c : r.comparisons)
    if (c.name == name) return c;
  throw std::out_of_range("missing comparison " + name);
}

void require_comparison(Outcome& o, const ExperimentReport& r, const std::string& name, const std::string& label) {
  const Comparison& c = comparison(r, name);
  std::ostringstream s;
  s << label << " " << name << " observed " << c.observed << " target " << c.target << " error " << c.error << " tol "
    << c.tolerance;
  o.require(c.pass, s.str());
}

ModelConfig torus(double L) {
  ModelConfig c;
  c.L = L;
  return c;
}

// 1. Leading orders on the flat jet.
Outcome criterion1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  for (int r0 : {1, 2, 3}) {
    const auto z = zeta_densities(MetricJet<double>::flat(r0));
    o.require(std::abs(z.pi[0].real() / kPi + r0 * (kLn2 / (4 * kPi) - 1 / (8 * kPi))) < 1e-12, "pi0");
    o.require(std::abs(z.q[0].real() / kPi + r0 / (8 * kPi)) < 1e-12, "q0");
    const auto zr = zeta_densities(MetricJet<R>::flat(r0));
    o.require(zr.J[1].atoms().empty() && zr.q[1] == LnPoly<R>() && zr.pi[1] == LnPoly<R>(), "order one");
  }
  std::mt19937_64 rng(1);
  const auto zr = zeta_densities(rational_jet(rng, 2));
  o.require(zr.J[1].atoms().empty(), "order one on a curved jet");
  const double t = seconds_since(t0);
  o.require(t < 1.0, "runtime");
  o.detail << (o.pass ? "" : "; ") << "runtime " << t << " s";
  return o;
}

// 2. Randomised closed-form oracle and connection independence.
Outcome criterion2() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> rank(1, 3);
  std::uniform_real_distribution<double> lam(0.0, 5.0);
  double worst = 0, worst_omega = 0;
  for (int i = 0; i < 200; ++i) {
    const int r0 = rank(rng);
    const auto jet = random_jet(rng, r0, true);
    const double lambda = lam(rng);
    const auto z = zeta_densities(jet);
    const auto h = heat_densities(jet, lambda);
    const auto cf = closed_form_densities(jet, lambda);
    worst = std::max({worst, rel_or_abs(z.q[2].real(), cf.q2.real()), rel_or_abs(z.pi[2].real(), cf.pi2.real()),
                      rel_or_abs(h.v[0].re, cf.v0.re), std::abs(h.v[1].re), rel_or_abs(h.v[2].re, cf.v2.re)});
    auto other = jet;
    randomise_connection(other, rng);
    const auto z2 = zeta_densities(other);
    const auto h2 = heat_densities(other, lambda);
    worst_omega = std::max({worst_omega, rel_or_abs(z.q[2].real(), z2.q[2].real()), rel_or_abs(z.pi[2].real(), z2.pi[2].real()),
                            rel_or_abs(h.v[2].re, h2.v[2].re)});
  }
  const double t = seconds_since(t0);
  o.require(worst < 1e-10, "closed form");
  o.require(worst_omega < 1e-10, "connection");
  o.require(t < 60, "runtime");
  o.detail << (o.pass ? "" : "; ") << "200 jets, worst defect " << worst << ", connection defect " << worst_omega << ", runtime "
           << t << " s";
  return o;
}

// 3. Moment and contour tables, exact.
Outcome criterion3() {
  Outcome o;
  o.require(same_atoms(xi_moment_zeta<R>(0, 0, 0), single_atom(R(1, 2), {}, {-2})), "zeta (0,0,s)");
  o.require(same_atoms(xi_moment_zeta<R>(0, 0, 2), single_atom(R(1, 2), {}, {0})), "zeta (0,0,s+2)");
  o.require(same_atoms(xi_moment_zeta<R>(2, 0, 4), single_atom(R(1, 2), {}, {0, 2})), "zeta (2,0,s+4)");
  o.require(same_atoms(xi_moment_zeta<R>(2, 2, 6), single_atom(R(1, 2), {}, {0, 2, 4})), "zeta (2,2,s+6)");
  o.require(same_atoms(xi_moment_zeta<R>(4, 0, 6), single_atom(R(3, 2), {}, {0, 2, 4})), "zeta (4,0,s+6)");
  o.require(xi_moment_heat<R>(0, 0, 0) == R(1, 8), "heat (0,0,0)");
  o.require(xi_moment_heat<R>(0, 0, 1) == R(1, 4), "heat (0,0,1)");
  o.require(xi_moment_heat<R>(2, 0, 2) == R(1, 16), "heat (2,0,2)");
  o.require(xi_moment_heat<R>(2, 0, 3) == R(1, 8), "heat (2,0,3)");
  o.require(xi_moment_heat<R>(4, 0, 5) == R(3, 32), "heat (4,0,5)");
  o.require(xi_moment_heat<R>(2, 2, 5) == R(1, 32), "heat (2,2,5)");
  const R heat_factors[] = {R(1), R(-1), R(1, 2), R(-1, 6)};
  for (int d = 1; d <= 4; ++d) o.require(mu_contour_heat<R>(d) == heat_factors[d - 1], "heat contour factor");
  const auto c2 = mu_contour_zeta<R>(2);
  o.require(c2.factor == R(-1) && c2.num == std::vector<int>{0} && c2.z_shift == 1, "zeta contour factor d = 2");
  const auto c3 = mu_contour_zeta<R>(3);
  o.require(c3.factor == R(1, 2) && c3.num == (std::vector<int>{0, 1}) && c3.z_shift == 2, "zeta contour factor d = 3");
  o.detail << (o.pass ? "" : "; ") << "11 moments and 6 contour factors";
  return o;
}

// 4. Group A of the zeta and heat breakdowns.
Outcome criterion4() {
  Outcome o;
  std::mt19937_64 rng(4);
  for (int i = 0; i < 6; ++i) {
    const auto j = rational_jet(rng, 1 + i % 3);
    const R r0(j.rank_r0);
    const auto z = zeta_densities(j);
    o.require(same_atoms(z.groups[kGroupA], single_atom(-r0 * j.tau_N / R(24), {1}, {2})), "zeta group A");
    const auto h = heat_densities(j, R(i + 1, 2));
    o.require(h.groups[kGroupA] == GR(-r0 * j.tau_N / R(48)), "heat group A");
  }
  o.detail << (o.pass ? "" : "; ") << "6 rational jets";
  return o;
}

// 5. Consistency identities.
Outcome criterion5() {
  Outcome o;
  std::mt19937_64 rng(5);
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const int r0 = 1 + i % 3;
    const auto j = random_jet(rng, r0, true);
    const auto z = zeta_densities(j);
    const auto c = c_densities(j);
    const auto cf = closed_form_densities(j, 0.0);
    worst = std::max(worst, std::abs(z.q[0].real() / kPi + c.c1));
    worst = std::max(worst, std::abs(z.q[2].real() / kPi - c.c3));
    worst = std::max(worst, std::abs(cf.a0.real() + z.pi[2].real()));
    worst = std::max(worst, std::abs(c.c1 - z.pi[0].real() / kPi - r0 * kLn2 / (4 * kPi)));
    worst = std::max(worst, std::abs(cf.a1.real() / kPi - r0 * kLn2 / (4 * kPi)));
  }
  o.require(worst < 1e-12, "identity");
  o.detail << (o.pass ? "" : "; ") << "50 jets, worst defect " << worst;
  return o;
}

// 6. Torus gluing polynomial.
Outcome criterion6() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = exp_polynomial(torus(1));
  const double t = seconds_since(t0);
  for (const char* n : {"a1", "a0", "quadratic_residual"}) require_comparison(o, r, n, "torus");
  o.require(t < 120, "runtime");
  o.detail << (o.pass ? "" : "; ") << "a1 " << comparison(r, "a1").observed << ", a0 " << comparison(r, "a0").observed
           << ", runtime " << t << " s";
  return o;
}

// 7. Sphere cross-section.
Outcome criterion7() {
  Outcome o;
  ModelConfig c;
  c.cross_section = CrossSection::kSphere;
  c.radius = 1;
  const auto p = exp_polynomial(c);
  const auto a = exp_lndetR_asymptotics(c);
  const double a0 = comparison(p, "a0").observed, q2 = comparison(a, "q2").observed;
  o.require(std::abs(a0 + kLn2 / 3) < 1e-4, "a0");
  o.require(std::abs(q2 - 1.0 / 6.0) < 2e-3, "q2");
  o.detail << (o.pass ? "" : "; ") << "a0 " << a0 << ", q2 " << q2;
  return o;
}

// 8. Heat-trace fit on the torus.
Outcome criterion8() {
  Outcome o;
  auto c = torus(1);
  c.heat_lambda = 1;
  const auto r = exp_heat_trace(c);
  const double vol = 4 * kPi * kPi;
  const double v0 = comparison(r, "v0").observed, v2 = comparison(r, "v2").observed;
  o.require(rel(v0, vol / (8 * kPi)) < 1e-4, "v0");
  o.require(rel(v2, -vol / (4 * kPi)) < 1e-3, "v2");
  o.require(std::abs(comparison(r, "v1_probe").observed) < 1e-4 * std::abs(v0), "probe");
  require_comparison(o, r, "zeta_R0_from_c", "torus");
  o.detail << (o.pass ? "" : "; ") << "v0 " << v0 << ", v2 " << v2 << ", probe " << comparison(r, "v1_probe").observed;
  return o;
}

// 9. Kernel limit.
Outcome criterion9() {
  Outcome o;
  for (double L : {1.0, 2.0}) {
    const auto r = exp_kernel_limit(torus(L));
    const double defect = comparison(r, "defect_extrapolated").observed;
    o.require(std::abs(defect) < 1e-6, "defect");
    o.require(std::abs(comparison(r, "ln_det_A0").observed + std::log(L)) < 1e-12, "ln det A0");
    o.detail << (o.pass ? "" : "; ") << "L = " << L << " defect " << defect << (L == 1.0 ? ", " : "");
  }
  return o;
}

// 10. Warped-product cross-check.
Outcome criterion10() {
  Outcome o;
  const auto r = exp_warped_crosscheck(torus(1));
  const double gap = comparison(r, "max_relative_gap").observed;
  o.require(r.plot.size() == 100, "grid size");
  o.require(gap < 1e-12, "gap");
  o.detail << (o.pass ? "" : "; ") << r.plot.size() << " points, max relative gap " << gap;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"leading orders on the flat jet", criterion1},
      {"random jets against the closed forms", criterion2},
      {"moment and contour tables", criterion3},
      {"group A breakdown", criterion4},
      {"consistency identities", criterion5},
      {"flat torus gluing polynomial", criterion6},
      {"sphere cross-section", criterion7},
      {"torus heat-trace fit", criterion8},
      {"kernel limit", criterion9},
      {"warped-product cross-check", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("[%s] criterion %zu: %s (%s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
