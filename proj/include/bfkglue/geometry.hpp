// Point data of the metric and bundle at a point of the cutting surface, the
// curvature invariants built from it, and the Taylor germs of the metric in
// boundary normal coordinates (x1, x2, xm).
#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "algebra.hpp"

namespace bfkglue {

template <class T>
using Sym2 = std::array<std::array<T, 2>, 2>;

/// Row-major r0 x r0 real matrix.
template <class T>
using RealMat = std::vector<T>;

/// Metric and bundle jets at a point p of the surface N.
///
/// Conventions: g_n1 = d_m g_ab(p), g_n2 = d_m d_m g_ab(p),
/// g_n1_d[c] = d_c d_m g_ab(p) (mixed jet, optional, defaults to zero),
/// omega_d[a][b] = d_{x_a} omega_b(p).
template <class T = double>
struct MetricJet {
  int rank_r0 = 1;
  T tau_N{0};
  Sym2<T> g_n1{};
  Sym2<T> g_n2{};
  std::array<Sym2<T>, 2> g_n1_d{};
  std::array<RealMat<T>, 3> omega;               // omega_1, omega_2, omega_m
  std::array<std::array<RealMat<T>, 2>, 2> omega_d;  // d_a omega_b
  RealMat<T> omega_dmm;                          // d_m omega_m (accepted, unused)
  RealMat<T> endo_E;

  static MetricJet flat(int r0) {
    MetricJet j;
    j.rank_r0 = r0;
    const RealMat<T> z(static_cast<std::size_t>(r0 * r0), T(0));
    for (auto& o : j.omega) o = z;
    for (auto& row : j.omega_d)
      for (auto& o : row) o = z;
    j.omega_dmm = z;
    j.endo_E = z;
    return j;
  }

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate(double sym_tol = 1e-12) const {
    if (rank_r0 < 1) throw std::invalid_argument("rank_r0 must be >= 1");
    auto sym = [&](const Sym2<T>& m, const char* name) {
      const double d = std::abs(to_double(m[0][1]) - to_double(m[1][0]));
      const double s = 1.0 + std::abs(to_double(m[0][1]));
      if (d > sym_tol * s) throw std::invalid_argument(std::string(name) + " is not symmetric");
    };
    sym(g_n1, "g_n1");
    sym(g_n2, "g_n2");
    sym(g_n1_d[0], "g_n1_d[0]");
    sym(g_n1_d[1], "g_n1_d[1]");
    const std::size_t n = static_cast<std::size_t>(rank_r0 * rank_r0);
    auto sized = [&](const RealMat<T>& m, const char* name) {
      if (m.size() != n) throw std::invalid_argument(std::string(name) + " has wrong size for rank_r0");
    };
    for (int k = 0; k < 3; ++k) sized(omega[static_cast<std::size_t>(k)], "omega");
    for (const auto& row : omega_d)
      for (const auto& o : row) sized(o, "omega_d");
    sized(omega_dmm, "omega_d.dmm");
    sized(endo_E, "endo_E");
  }

  T trace_E() const {
    T t{0};
    for (int i = 0; i < rank_r0; ++i) t += endo_E[static_cast<std::size_t>(i * rank_r0 + i)];
    return t;
  }
};

// ---------------------------------------------------------------------------
// Frame-free curvature invariants (polynomial in the jet entries, so they work
// over exact rationals as well).
// ---------------------------------------------------------------------------

/// Mean curvatures H1 = (k1 + k2)/2 and H2 = k1 k2 where k_a are the
/// eigenvalues of the shape operator -g_n1/2.
template <class T>
T mean_H1(const MetricJet<T>& j) {
  return -(j.g_n1[0][0] + j.g_n1[1][1]) / T(4);
}
template <class T>
T mean_H2(const MetricJet<T>& j) {
  return (j.g_n1[0][0] * j.g_n1[1][1] - j.g_n1[0][1] * j.g_n1[1][0]) / T(4);
}

/// Ambient scalar curvature at p: tau_N + 8 H1^2 - 6 H2 - sum_a g_{aa,mm}.
template <class T>
T ambient_tau_M(const MetricJet<T>& j) {
  const T h1 = mean_H1(j), h2 = mean_H2(j);
  return j.tau_N + T(8) * h1 * h1 - T(6) * h2 - (j.g_n2[0][0] + j.g_n2[1][1]);
}

/// sum_a g^{aa,mm}(p) = 8 sum_a k_a^2 - sum_a g_{aa,mm}(p).
template <class T>
T inverse_metric_trace_mm(const MetricJet<T>& j) {
  const T h1 = mean_H1(j), h2 = mean_H2(j);
  const T sum_k2 = T(4) * h1 * h1 - T(2) * h2;
  return T(8) * sum_k2 - (j.g_n2[0][0] + j.g_n2[1][1]);
}

/// Closed form sum_a R_{a3a3}(p) = -(tau_M - tau_N)/2 - H2.
template <class T>
T riemann_a3a3_closed(const MetricJet<T>& j) {
  return -(ambient_tau_M(j) - j.tau_N) / T(2) - mean_H2(j);
}

/// Principal curvatures in descending order and the rotation whose columns
/// are the corresponding eigenvectors of g_n1.
struct PrincipalFrame {
  double kappa1 = 0, kappa2 = 0;
  Sym2<double> rotation{{{1, 0}, {0, 1}}};
};

inline PrincipalFrame principal_curvatures(const MetricJet<double>& j) {
  // Shape operator S = -g_n1 / 2 (symmetric 2x2).
  const double a = -0.5 * j.g_n1[0][0], b = -0.5 * j.g_n1[0][1], d = -0.5 * j.g_n1[1][1];
  const double mean = 0.5 * (a + d);
  const double rad = std::hypot(0.5 * (a - d), b);
  PrincipalFrame f;
  f.kappa1 = mean + rad;
  f.kappa2 = mean - rad;
  if (b == 0.0) {
    // Already diagonal; keep the identity frame unless the entries are out of order.
    if (a >= d) return f;
    f.rotation = {{{0, -1}, {1, 0}}};
    return f;
  }
  // Eigenvector of kappa1; the angle lies in (-pi/2, pi/2] for determinism.
  const double theta = 0.5 * std::atan2(2.0 * b, a - d);
  const double c = std::cos(theta), s = std::sin(theta);
  f.rotation = {{{c, -s}, {s, c}}};
  return f;
}

struct MeanCurvatures {
  double H1, H2;
};
inline MeanCurvatures mean_curvatures(double k1, double k2) { return {(k1 + k2) / 2.0, k1 * k2}; }

/// Re-expresses every tensorial entry of the jet in the rotated orthonormal
/// frame e'_i = sum_a R(a,i) e_a.
template <class T>
MetricJet<T> rotate_jet(const MetricJet<T>& j, const Sym2<T>& R) {
  MetricJet<T> r = j;
  auto rot2 = [&](const Sym2<T>& m) {
    Sym2<T> o{};
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q) {
        T acc{0};
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) acc += R[a][p] * R[b][q] * m[a][b];
        o[p][q] = acc;
      }
    return o;
  };
  r.g_n1 = rot2(j.g_n1);
  r.g_n2 = rot2(j.g_n2);
  for (int c = 0; c < 2; ++c) {
    Sym2<T> acc{};
    for (int a = 0; a < 2; ++a) {
      const Sym2<T> t = rot2(j.g_n1_d[static_cast<std::size_t>(a)]);
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) acc[p][q] += R[a][c] * t[p][q];
    }
    r.g_n1_d[static_cast<std::size_t>(c)] = acc;
  }
  const std::size_t n = j.endo_E.size();
  for (int i = 0; i < 2; ++i) {
    RealMat<T> o(n, T(0));
    for (int a = 0; a < 2; ++a)
      for (std::size_t k = 0; k < n; ++k) o[k] += R[a][i] * j.omega[static_cast<std::size_t>(a)][k];
    r.omega[static_cast<std::size_t>(i)] = o;
  }
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) {
      RealMat<T> o(n, T(0));
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (std::size_t k = 0; k < n; ++k) o[k] += R[a][p] * R[b][q] * j.omega_d[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)][k];
      r.omega_d[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] = o;
    }
  return r;
}

/// Full invariant record of a numeric jet.
struct CurvatureInvariants {
  double kappa1 = 0, kappa2 = 0;
  double H1 = 0, H2 = 0;
  double tau_M = 0;
  double inverse_trace_mm = 0;  // sum_a g^{aa,mm}(p)
  Sym2<double> rotation{{{1, 0}, {0, 1}}};
  // Tangential second jets in the principal frame.
  double ginv_12_12 = 0;   // g^{12,12}(p)
  double ginv_11_22 = 0;   // g^{11,22}(p) = g^{22,11}(p)
  double dd_log_det = 0;   // d_a d_a ln|g|(p) for a = 1, 2
};

/// Tangential second derivatives of the inverse metric and of ln|g| at p.
struct TangentialJets {
  double ginv_12_12, ginv_11_22, ginv_22_11, ginv_11_11, ginv_12_11;
  double dd_log_det_11, dd_log_det_22, dd_log_det_12;
};
inline TangentialJets tangential_jets(double tau_N) {
  // R_1221 = tau_N/2 is the only independent curvature component.
  const double r1221 = tau_N / 2.0;
  TangentialJets t{};
  t.ginv_12_12 = -r1221 / 3.0;
  t.ginv_11_22 = 2.0 * r1221 / 3.0;
  t.ginv_22_11 = 2.0 * r1221 / 3.0;
  t.ginv_11_11 = 0.0;
  t.ginv_12_11 = 0.0;
  t.dd_log_det_11 = -2.0 / 3.0 * r1221;  // Ricci R_11 = R_1221
  t.dd_log_det_22 = -2.0 / 3.0 * r1221;
  t.dd_log_det_12 = 0.0;
  return t;
}

inline CurvatureInvariants curvature_invariants(const MetricJet<double>& j) {
  CurvatureInvariants c;
  const PrincipalFrame f = principal_curvatures(j);
  c.kappa1 = f.kappa1;
  c.kappa2 = f.kappa2;
  c.rotation = f.rotation;
  const auto mc = mean_curvatures(f.kappa1, f.kappa2);
  c.H1 = mc.H1;
  c.H2 = mc.H2;
  const MetricJet<double> r = rotate_jet(j, f.rotation);
  c.tau_M = r.tau_N + 8 * c.H1 * c.H1 - 6 * c.H2 - (r.g_n2[0][0] + r.g_n2[1][1]);
  c.inverse_trace_mm = 8 * (c.kappa1 * c.kappa1 + c.kappa2 * c.kappa2) - (r.g_n2[0][0] + r.g_n2[1][1]);
  const auto t = tangential_jets(j.tau_N);
  c.ginv_12_12 = t.ginv_12_12;
  c.ginv_11_22 = t.ginv_11_22;
  c.dd_log_det = t.dd_log_det_11;
  return c;
}

/// Heat-coefficient densities c_0..c_3 of the difference of the two heat
/// traces, in absolute units.
struct CDensities {
  double c0, c1, c2, c3;
};
template <class T>
T c3_density_over_pi(const MetricJet<T>& j) {
  // c3 * pi
  const T h1 = mean_H1(j), h2 = mean_H2(j), tm = ambient_tau_M(j);
  const T r0(j.rank_r0);
  return r0 * (tm / T(64) + j.tau_N / T(192) - h1 * h1 / T(64) + h2 / T(64)) + j.trace_E() / T(8);
}
inline CDensities c_densities(const MetricJet<double>& j) {
  const double pi = std::numbers::pi;
  return {0.0, j.rank_r0 / (8 * pi), 0.0, c3_density_over_pi(j) / pi};
}

/// Jet of a warped product f(xm)^2 h + dxm^2 with f(c) = 1, f'(c) = fp,
/// f''(c) = fpp and h of scalar curvature tau_h.
inline MetricJet<double> warped_jet(double fp, double fpp, double tau_h, int r0) {
  MetricJet<double> j = MetricJet<double>::flat(r0);
  j.tau_N = tau_h;
  j.g_n1 = {{{2 * fp, 0}, {0, 2 * fp}}};
  const double s = 2 * (fpp + fp * fp);
  j.g_n2 = {{{s, 0}, {0, s}}};
  return j;
}

/// Jet of the product metric over a round sphere of radius a.
inline MetricJet<double> sphere_product_jet(double a, int r0 = 1) {
  MetricJet<double> j = MetricJet<double>::flat(r0);
  j.tau_N = 2.0 / (a * a);
  return j;
}

// ---------------------------------------------------------------------------
// Taylor germs of the metric in boundary normal coordinates.
// ---------------------------------------------------------------------------

/// 2x2 array of scalar jets, symmetric.
template <class T>
using JetSym2 = std::array<std::array<ScalarJet<T>, 2>, 2>;

/// g_ab(x, xm) through second order:
///   delta + xm g_n1 + xm^2 g_n2 / 2 + x_c xm g_n1_d[c] + (1/3) R_{a u b v} x^u x^v.
template <class T>
JetSym2<T> metric_lower(const MetricJet<T>& j) {
  JetSym2<T> g;
  const T third_tau = j.tau_N / T(6);  // (1/3) * R_1221 with R_1221 = tau/2
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      ScalarJet<T> s = scalar_jet<T>(2);
      if (a == b) s.coef(0, 0, 0) = Gauss<T>(T(1));
      s.coef(0, 0, 1) = Gauss<T>(j.g_n1[a][b]);
      s.coef(0, 0, 2) = Gauss<T>(j.g_n2[a][b] / T(2));
      s.coef(1, 0, 1) = Gauss<T>(j.g_n1_d[0][a][b]);
      s.coef(0, 1, 1) = Gauss<T>(j.g_n1_d[1][a][b]);
      g[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = s;
    }
  // Intrinsic part: g11 = 1 - tau/6 x2^2, g22 = 1 - tau/6 x1^2, g12 = tau/6 x1 x2.
  g[0][0].coef(0, 2, 0) = Gauss<T>(-third_tau);
  g[1][1].coef(2, 0, 0) = Gauss<T>(-third_tau);
  g[0][1].coef(1, 1, 0) = Gauss<T>(third_tau);
  g[1][0].coef(1, 1, 0) = Gauss<T>(third_tau);
  return g;
}

template <class T>
JetSym2<T> jet_mul(const JetSym2<T>& a, const JetSym2<T>& b) {
  JetSym2<T> c;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) c[i][k] = a[i][0] * b[0][k] + a[i][1] * b[1][k];
  return c;
}

/// Inverse of a jet matrix equal to the identity at the base point:
/// (I + N)^{-1} = I - N + N^2 through second order.
template <class T>
JetSym2<T> metric_inverse(const JetSym2<T>& g) {
  JetSym2<T> n = g;
  n[0][0].coef(0) -= Gauss<T>(T(1));
  n[1][1].coef(0) -= Gauss<T>(T(1));
  const JetSym2<T> n2 = jet_mul(n, n);
  JetSym2<T> inv;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) {
      ScalarJet<T> s = n2[i][k] - n[i][k];
      if (i == k) s.coef(0) += Gauss<T>(T(1));
      inv[i][k] = s;
    }
  return inv;
}

/// ln det g through second order, using ln(1 + u) = u - u^2/2.
template <class T>
ScalarJet<T> log_det(const JetSym2<T>& g) {
  ScalarJet<T> det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
  det.coef(0) -= Gauss<T>(T(1));
  ScalarJet<T> sq = det * det;
  sq.scale(frac<T>(1, 2));
  return det - sq;
}

// ---------------------------------------------------------------------------
// Independent curvature route through the full ambient metric germ.
// ---------------------------------------------------------------------------

/// Curvature data of the ambient metric diag(g_ab(x, xm), 1) at p computed
/// directly from Christoffel symbols of the Taylor germ.
template <class T>
struct AmbientCurvature {
  T tau_M;
  T sum_R_a3a3;  // sum_a <R(d_a, d_3) d_a, d_3>
  T tau_N;       // intrinsic scalar curvature of the slice xm = 0
};

template <class T>
AmbientCurvature<T> ambient_curvature_from_germ(const MetricJet<T>& j) {
  const JetSym2<T> g2 = metric_lower(j);
  const JetSym2<T> gi2 = metric_inverse(g2);
  using J = ScalarJet<T>;
  auto zero = [] {
    J z = scalar_jet<T>(2);
    return z;
  };
  auto one = [] {
    J z = scalar_jet<T>(kExactOrder);
    z.coef(0) = Gauss<T>(T(1));
    return z;
  };
  std::array<std::array<J, 3>, 3> G, Gi;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      if (a < 2 && b < 2) {
        G[a][b] = g2[a][b];
        Gi[a][b] = gi2[a][b];
      } else if (a == 2 && b == 2) {
        G[a][b] = one();
        Gi[a][b] = one();
      } else {
        G[a][b] = zero();
        Gi[a][b] = zero();
      }
    }
  // dG[c][a][b] = d_c G_ab
  std::array<std::array<std::array<J, 3>, 3>, 3> dG;
  for (int c = 0; c < 3; ++c)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) dG[c][a][b] = G[a][b].derivative(c);
  // Gamma[k][i][j]
  std::array<std::array<std::array<J, 3>, 3>, 3> Gam;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int jj = 0; jj < 3; ++jj) {
        J acc = zero();
        acc.set_order(1);
        for (int l = 0; l < 3; ++l) {
          J t = dG[i][jj][l] + dG[jj][i][l] - dG[l][i][jj];
          acc += Gi[k][l] * t;
        }
        acc.scale(frac<T>(1, 2));
        Gam[k][i][jj] = acc;
      }
  // R^l_{ijk} at p.
  auto riem = [&](int l, int i, int jj, int k) {
    Gauss<T> v = Gam[l][jj][k].derivative(i).at_base() - Gam[l][i][k].derivative(jj).at_base();
    for (int m = 0; m < 3; ++m) {
      v += Gam[l][i][m].at_base() * Gam[m][jj][k].at_base();
      v -= Gam[l][jj][m].at_base() * Gam[m][i][k].at_base();
    }
    return v.re;
  };
  AmbientCurvature<T> out{T(0), T(0), T(0)};
  for (int i = 0; i < 3; ++i)
    for (int jj = 0; jj < 3; ++jj) out.tau_M += riem(i, i, jj, jj);
  for (int a = 0; a < 2; ++a) out.sum_R_a3a3 += riem(2, a, 2, a);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      // Intrinsic curvature of the slice: Christoffels restricted to tangential indices.
      Gauss<T> v = Gam[a][b][b].derivative(a).at_base() - Gam[a][a][b].derivative(b).at_base();
      for (int m = 0; m < 2; ++m) {
        v += Gam[a][a][m].at_base() * Gam[m][b][b].at_base();
        v -= Gam[a][b][m].at_base() * Gam[m][a][b].at_base();
      }
      out.tau_N += v.re;
    }
  return out;
}

/// sum_a R_{a3a3}(p) by both routes; throws if they disagree.
inline double riemann_R_alpha3alpha3(const MetricJet<double>& j, double rel_tol = 1e-12) {
  const double closed = riemann_a3a3_closed(j);
  const double direct = ambient_curvature_from_germ(j).sum_R_a3a3;
  const double scale = 1.0 + std::abs(closed) + std::abs(direct);
  if (std::abs(closed - direct) > rel_tol * scale)
    throw std::runtime_error("inconsistent jet: sum R_a3a3 routes disagree");
  return closed;
}

/// Randomised jet for property suites. Entries are O(1); omega is generic
/// (not skew) so that noncommutative terms are exercised.
template <class Rng>
MetricJet<double> random_jet(Rng& rng, int r0, bool with_mixed = false) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MetricJet<double> j = MetricJet<double>::flat(r0);
  j.tau_N = 2.0 * u(rng);
  const double a = u(rng), b = u(rng), c = u(rng);
  j.g_n1 = {{{a, b}, {b, c}}};
  const double d = u(rng), e = u(rng), f = u(rng);
  j.g_n2 = {{{d, e}, {e, f}}};
  if (with_mixed)
    for (auto& m : j.g_n1_d) {
      const double p = u(rng), q = u(rng), r = u(rng);
      m = {{{p, q}, {q, r}}};
    }
  auto fill = [&](RealMat<double>& m) {
    for (auto& v : m) v = u(rng);
  };
  for (auto& o : j.omega) fill(o);
  for (auto& row : j.omega_d)
    for (auto& o : row) fill(o);
  fill(j.omega_dmm);
  fill(j.endo_E);
  return j;
}

/// Replaces the connection data of a jet with fresh random values.
template <class Rng>
void randomise_connection(MetricJet<double>& j, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& o : j.omega)
    for (auto& v : o) v = u(rng);
  for (auto& row : j.omega_d)
    for (auto& o : row)
      for (auto& v : o) v = u(rng);
}

}  // namespace bfkglue
