// Contour and xi-plane integration of resolvent symbols, giving the zeta and
// heat densities of the Dirichlet-to-Neumann operator at a point, their
// closed forms, and the assembled gluing polynomial.
//
// All densities are carried in units of 1/pi; transcendental parts are
// polynomials in L = ln 2.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "geometry.hpp"
#include "symbol_engine.hpp"

namespace bfkglue {

/// c0 + c1 L + c2 L^2 with L = ln 2.
template <class T>
struct LnPoly {
  std::array<Gauss<T>, 3> c{};
  LnPoly() = default;
  explicit LnPoly(Gauss<T> v) { c[0] = std::move(v); }
  LnPoly(Gauss<T> v0, Gauss<T> v1) {
    c[0] = std::move(v0);
    c[1] = std::move(v1);
  }
  LnPoly& operator+=(const LnPoly& o) {
    for (int i = 0; i < 3; ++i) c[static_cast<std::size_t>(i)] += o.c[static_cast<std::size_t>(i)];
    return *this;
  }
  LnPoly& operator-=(const LnPoly& o) {
    for (int i = 0; i < 3; ++i) c[static_cast<std::size_t>(i)] -= o.c[static_cast<std::size_t>(i)];
    return *this;
  }
  LnPoly operator*(const Gauss<T>& s) const {
    LnPoly r = *this;
    for (auto& v : r.c) v *= s;
    return r;
  }
  friend LnPoly operator+(LnPoly a, const LnPoly& b) { return a += b; }
  friend LnPoly operator-(LnPoly a, const LnPoly& b) { return a -= b; }
  friend bool operator==(const LnPoly& a, const LnPoly& b) { return a.c == b.c; }
  /// Real part as a double (the value is multiplied by 1/pi by the caller).
  double real() const {
    const double L = std::numbers::ln2;
    return to_double(c[0].re) + L * to_double(c[1].re) + L * L * to_double(c[2].re);
  }
  double imag() const {
    const double L = std::numbers::ln2;
    return to_double(c[0].im) + L * to_double(c[1].im) + L * L * to_double(c[2].im);
  }
};

/// One summand coef * 2^{-s} * prod(s + num_i) / prod(s + den_j).
template <class T>
struct SAtom {
  Gauss<T> coef;
  std::vector<int> num;
  std::vector<int> den;
};

/// Finite sum of atoms; values in units of 1/pi.
template <class T>
class SFunction {
 public:
  const std::vector<SAtom<T>>& atoms() const { return atoms_; }

  /// Adds an atom, merging it with an atom of identical shifts.
  void add(SAtom<T> a) {
    if (a.coef.zero()) return;
    cancel(a);
    for (auto it = atoms_.begin(); it != atoms_.end(); ++it) {
      if (it->num != a.num || it->den != a.den) continue;
      it->coef += a.coef;
      if (it->coef.zero()) atoms_.erase(it);
      return;
    }
    atoms_.push_back(std::move(a));
  }
  SFunction& operator+=(const SFunction& o) {
    for (const auto& a : o.atoms_) add(a);
    return *this;
  }
  friend SFunction operator+(SFunction a, const SFunction& b) { return a += b; }
  SFunction scaled(const Gauss<T>& s) const {
    SFunction r;
    for (auto a : atoms_) {
      a.coef *= s;
      r.add(std::move(a));
    }
    return r;
  }

  /// Value at real or complex s (times 1/pi omitted).
  std::complex<double> evaluate(std::complex<double> s) const {
    std::complex<double> acc = 0;
    for (const auto& a : atoms_) {
      std::complex<double> v(to_double(a.coef.re), to_double(a.coef.im));
      for (int n : a.num) v *= s + double(n);
      for (int m : a.den) v /= s + double(m);
      acc += v * std::pow(2.0, -s);
    }
    return acc;
  }

  /// Laurent coefficients at s = 0 of orders -1, 0, 1.
  std::array<LnPoly<T>, 3> laurent_at_zero() const {
    std::array<LnPoly<T>, 3> out{};
    for (const auto& a : atoms_) {
      int poles = 0;
      std::array<Gauss<T>, 3> ser{a.coef, Gauss<T>(), Gauss<T>()};
      auto mul_lin = [&](const T& c0, const T& c1) {  // multiply by c0 + c1 s
        std::array<Gauss<T>, 3> r{};
        for (int i = 0; i < 3; ++i) {
          r[static_cast<std::size_t>(i)] += ser[static_cast<std::size_t>(i)] * c0;
          if (i + 1 < 3) r[static_cast<std::size_t>(i + 1)] += ser[static_cast<std::size_t>(i)] * c1;
        }
        ser = r;
      };
      for (int n : a.num) mul_lin(T(n), T(1));
      for (int m : a.den) {
        if (m == 0) {
          ++poles;
          continue;
        }
        // 1/(s + m) = (1/m)(1 - s/m + s^2/m^2)
        const T im = T(1) / T(m);
        std::array<Gauss<T>, 3> r{};
        const std::array<T, 3> g{im, -im * im, im * im * im};
        for (int i = 0; i < 3; ++i)
          for (int k = 0; i + k < 3; ++k) r[static_cast<std::size_t>(i + k)] += ser[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(k)];
        ser = r;
      }
      if (poles > 1) throw std::domain_error("SFunction atom has a higher-order pole at s = 0");
      // 2^{-s} = 1 - L s + L^2 s^2 / 2
      std::array<LnPoly<T>, 3> full{};
      for (int i = 0; i < 3; ++i) {
        full[static_cast<std::size_t>(i)].c[0] += ser[static_cast<std::size_t>(i)];
        if (i + 1 < 3) full[static_cast<std::size_t>(i + 1)].c[1] -= ser[static_cast<std::size_t>(i)];
        if (i + 2 < 3) full[static_cast<std::size_t>(i + 2)].c[2] += ser[static_cast<std::size_t>(i)] * frac<T>(1, 2);
      }
      if (poles == 0) {
        out[1] += full[0];
        out[2] += full[1];
      } else {
        out[0] += full[0];
        out[1] += full[1];
        out[2] += full[2];
      }
    }
    return out;
  }

  LnPoly<T> value_at_zero() const { return checked_laurent()[1]; }
  LnPoly<T> derivative_at_zero() const { return checked_laurent()[2]; }

  /// Central finite difference of the derivative at 0 (independent check).
  double derivative_fd(double h = 1e-5) const { return ((evaluate(h) - evaluate(-h)) / (2 * h)).real(); }

  /// The sum as a single ratio num(s)/den(s) of polynomials (coefficients
  /// listed from the constant term up), without the 2^{-s} factor.
  std::pair<std::vector<Gauss<T>>, std::vector<Gauss<T>>> as_rational() const {
    using P = std::vector<Gauss<T>>;
    auto mul = [](const P& x, const P& y) {
      P r(x.size() + y.size() - 1);
      for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
      return r;
    };
    auto lin = [](int n) { return P{Gauss<T>(T(n)), Gauss<T>(T(1))}; };
    auto add = [](P x, const P& y) {
      if (y.size() > x.size()) x.resize(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) x[i] += y[i];
      return x;
    };
    P num{Gauss<T>()}, den{Gauss<T>(T(1))};
    for (const auto& a : atoms_) {
      P an{a.coef}, ad{Gauss<T>(T(1))};
      for (int n : a.num) an = mul(an, lin(n));
      for (int m : a.den) ad = mul(ad, lin(m));
      num = add(mul(num, ad), mul(an, den));
      den = mul(den, ad);
    }
    return {num, den};
  }

  /// Exact functional equality (cross-multiplied polynomial identity).
  bool equals(const SFunction& o) const {
    auto [n1, d1] = as_rational();
    auto [n2, d2] = o.as_rational();
    using P = std::vector<Gauss<T>>;
    auto mul = [](const P& x, const P& y) {
      P r(x.size() + y.size() - 1);
      for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
      return r;
    };
    P l = mul(n1, d2), r = mul(n2, d1);
    const std::size_t n = std::max(l.size(), r.size());
    l.resize(n);
    r.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      if (!((l[i] - r[i]).zero())) return false;
    return true;
  }

 private:
  std::array<LnPoly<T>, 3> checked_laurent() const {
    auto l = laurent_at_zero();
    const double res = std::abs(l[0].real()) + std::abs(l[0].imag());
    double scale = 0;
    for (const auto& a : atoms_) scale += std::abs(to_double(a.coef.re)) + std::abs(to_double(a.coef.im));
    if (res > 1e-9 * (1.0 + scale)) throw std::domain_error("SFunction has a pole at s = 0");
    return l;
  }
  static void cancel(SAtom<T>& a) {
    for (auto it = a.num.begin(); it != a.num.end();) {
      auto jt = std::find(a.den.begin(), a.den.end(), *it);
      if (jt != a.den.end()) {
        a.den.erase(jt);
        it = a.num.erase(it);
      } else {
        ++it;
      }
    }
    std::sort(a.num.begin(), a.num.end());
    std::sort(a.den.begin(), a.den.end());
  }

  std::vector<SAtom<T>> atoms_;
};

// ---------------------------------------------------------------------------
// Contour and moment integrals.
// ---------------------------------------------------------------------------

/// (1/2 pi i) \oint mu^{-s} (mu - z)^{-d} dmu
///   = [(-1)^{d-1}/(d-1)!] s(s+1)...(s+d-2) z^{-s-d+1}.
template <class T>
struct ContourZeta {
  T factor;              // (-1)^{d-1}/(d-1)!
  std::vector<int> num;  // shifts 0..d-2
  int z_shift;           // d - 1 added to the z exponent (z^{-s - z_shift})
};

/// Test hook: flips the sign of every double-pole contour factor.
inline bool& contour_fault_injection() {
  static bool flag = false;
  return flag;
}

template <class T>
ContourZeta<T> mu_contour_zeta(int d) {
  if (d < 1) throw std::invalid_argument("contour integral needs a pole of order >= 1");
  ContourZeta<T> c{frac<T>((d - 1) % 2 ? -1 : 1, factorial(d - 1)), {}, d - 1};
  for (int i = 0; i <= d - 2; ++i) c.num.push_back(i);
  if (d == 2 && contour_fault_injection()) c.factor = -c.factor;
  return c;
}

/// (1/2 pi i) \oint e^{-mu} (mu - z)^{-d} dmu = [(-1)^{d-1}/(d-1)!] e^{-z}.
template <class T>
T mu_contour_heat(int d) {
  if (d < 1) throw std::invalid_argument("contour integral needs a pole of order >= 1");
  return frac<T>((d - 1) % 2 ? -1 : 1, factorial(d - 1));
}

/// Angular moment (1/2pi) \int cos^a sin^b = (a-1)!!(b-1)!!/(a+b)!! for even a, b.
template <class T>
T angular_moment(int a, int b) {
  return frac<T>(double_factorial(a - 1) * double_factorial(b - 1), double_factorial(a + b));
}

/// (1/4pi^2) \int xi1^a xi2^b (|xi|^2 + 1)^{-w/2} dxi with w = s_coeff * s + K,
/// returned as an atom in units of 1/pi (without the 2^{-s} factor, which the
/// caller supplies). Only w = s + K is supported; a constant w is accepted
/// when the integral converges absolutely.
template <class T>
SFunction<T> xi_moment_zeta(int a, int b, int K, int s_coeff = 1) {
  SFunction<T> f;
  if (a < 0 || b < 0) throw std::invalid_argument("negative xi power");
  if (a % 2 || b % 2) return f;
  const int n = (a + b) / 2;
  if (s_coeff == 0) {
    if (K <= a + b + 2) throw std::domain_error("nonconvergent xi moment");
    throw std::invalid_argument("constant moment exponents are not representable as SFunction atoms");
  }
  if (s_coeff != 1) throw std::invalid_argument("moment exponent must be s + K");
  // (1/2pi) ang * 1/2 * n! * prod_{j=1}^{n+1} 2/(s + K - 2j), in units of 1/pi.
  SAtom<T> at;
  T c = angular_moment<T>(a, b) * T(factorial(n));
  c *= n >= 1 ? T(std::int64_t{1} << (n - 1)) : frac<T>(1, 2);
  at.coef = Gauss<T>(c);
  for (int j = 1; j <= n + 1; ++j) at.den.push_back(K - 2 * j);
  f.add(at);
  return f;
}

/// (1/4pi^2) \int xi1^a xi2^b |xi|^{-n} e^{-2|xi|} dxi in units of 1/pi.
template <class T>
T xi_moment_heat(int a, int b, int n) {
  if (a < 0 || b < 0) throw std::invalid_argument("negative xi power");
  if (a % 2 || b % 2) return T(0);
  const int m = a + b - n + 1;
  if (m < 0) throw std::domain_error("divergent heat moment");
  // 1/2 * ang * m! / 2^{m+1}
  return angular_moment<T>(a, b) * T(factorial(m)) / T(std::int64_t{1} << (m + 2));
}

/// J(s) of an expression evaluated at the base point (weight-two variant, lambda = 1).
template <class T>
SFunction<T> integrate_zeta(const SymbolExpr<T>& e) {
  if (e.ctx().variant != Variant::kWeightTwo) throw std::invalid_argument("zeta integration needs the weight-2 variant");
  const SymbolExpr<T> at = evaluate_at_p(e);
  SFunction<T> out;
  for (const auto& [k, c] : at.terms()) {
    if (k.d == 0) continue;  // holomorphic inside the contour
    if (k.a % 2 || k.b % 2) continue;
    const Gauss<T> tr = c.at_base().trace();
    if (tr.zero()) continue;
    const ContourZeta<T> cz = mu_contour_zeta<T>(k.d);
    // z = 2 sqrt(Q): z^{-s-d+1} = 2^{-s} 2^{1-d} Q^{(1-d-s)/2}
    const int K = k.d - 1 - k.q2;
    const SFunction<T> m = xi_moment_zeta<T>(k.a, k.b, K);
    for (auto atom : m.atoms()) {
      atom.coef *= tr;
      atom.coef *= cz.factor / T(std::int64_t{1} << (k.d - 1));
      atom.num.insert(atom.num.end(), cz.num.begin(), cz.num.end());
      out.add(std::move(atom));
    }
  }
  return out;
}

/// Heat integral of an expression evaluated at the base point (lambda-constant
/// variant), in units of 1/pi.
template <class T>
Gauss<T> integrate_heat(const SymbolExpr<T>& e) {
  if (e.ctx().variant != Variant::kLambdaConstant) throw std::invalid_argument("heat integration needs the lambda-constant variant");
  const SymbolExpr<T> at = evaluate_at_p(e);
  Gauss<T> out;
  for (const auto& [k, c] : at.terms()) {
    if (k.d == 0) continue;
    const Gauss<T> tr = c.at_base().trace();
    if (tr.zero()) continue;
    const T m = xi_moment_heat<T>(k.a, k.b, -k.q2);
    if (is_zero(m)) continue;
    out += tr * (mu_contour_heat<T>(k.d) * m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Density pipelines.
// ---------------------------------------------------------------------------

template <class T>
struct ZetaDensities {
  std::array<SFunction<T>, 3> J;
  std::array<LnPoly<T>, 3> q;   // q_j = J_j(0)/2
  std::array<LnPoly<T>, 3> pi;  // pi_j = -J_j'(0)
  std::array<SFunction<T>, kResolventGroups> groups;        // J_2 by group A..E
  std::array<SFunction<T>, kThetaGroups + 1> e_groups;      // J_2 group E split 1..8
};

template <class T>
ZetaDensities<T> zeta_densities(const MetricJet<T>& jet) {
  const DtnSymbols<T> dtn = dtn_symbols(jet, Variant::kWeightTwo, 3);
  const ResolventSymbols<T> res = resolvent_symbols(dtn, 3);
  ZetaDensities<T> z;
  for (int j = 0; j < 3; ++j) {
    z.J[static_cast<std::size_t>(j)] = integrate_zeta(res.layers[static_cast<std::size_t>(j)]);
    z.q[static_cast<std::size_t>(j)] = z.J[static_cast<std::size_t>(j)].value_at_zero() * Gauss<T>(frac<T>(1, 2));
    z.pi[static_cast<std::size_t>(j)] = z.J[static_cast<std::size_t>(j)].derivative_at_zero() * Gauss<T>(T(-1));
  }
  for (int g = 0; g < kResolventGroups; ++g) z.groups[static_cast<std::size_t>(g)] = integrate_zeta(res.groups[static_cast<std::size_t>(g)]);
  for (int g = 1; g <= kThetaGroups; ++g) z.e_groups[static_cast<std::size_t>(g)] = integrate_zeta(res.e_groups[static_cast<std::size_t>(g)]);
  return z;
}

template <class T>
struct HeatDensities {
  std::array<Gauss<T>, 3> v;
  std::array<Gauss<T>, kResolventGroups> groups;
  std::array<Gauss<T>, kThetaGroups + 1> e_groups;
};

template <class T>
HeatDensities<T> heat_densities(const MetricJet<T>& jet, const T& lambda) {
  const DtnSymbols<T> dtn = dtn_symbols(jet, Variant::kLambdaConstant, 3, lambda);
  const ResolventSymbols<T> res = resolvent_symbols(dtn, 3);
  HeatDensities<T> h;
  for (int j = 0; j < 3; ++j) h.v[static_cast<std::size_t>(j)] = integrate_heat(res.layers[static_cast<std::size_t>(j)]);
  for (int g = 0; g < kResolventGroups; ++g) h.groups[static_cast<std::size_t>(g)] = integrate_heat(res.groups[static_cast<std::size_t>(g)]);
  for (int g = 1; g <= kThetaGroups; ++g) h.e_groups[static_cast<std::size_t>(g)] = integrate_heat(res.e_groups[static_cast<std::size_t>(g)]);
  return h;
}

// ---------------------------------------------------------------------------
// Closed forms, in units of 1/pi.
// ---------------------------------------------------------------------------

template <class T>
struct ClosedForm {
  LnPoly<T> q0, pi0, q2, pi2;
  Gauss<T> v0, v2;
  Gauss<T> c1, c3;
  LnPoly<T> a0, a1;
};

template <class T>
ClosedForm<T> closed_form_densities(const MetricJet<T>& jet, const T& lambda) {
  const T r0(jet.rank_r0);
  const T h1 = mean_H1(jet), h2 = mean_H2(jet), tm = ambient_tau_M(jet), tn = jet.tau_N, tre = jet.trace_E();
  const T h11 = h1 * h1;
  ClosedForm<T> f;
  auto G = [](const T& v) { return Gauss<T>(v); };
  f.q0 = LnPoly<T>(G(-r0 / T(8)));
  f.pi0 = LnPoly<T>(G(r0 / T(8)), G(-r0 / T(4)));
  const T bracket = tm / T(32) + tn / T(96) - h11 / T(32) + h2 / T(32);
  f.q2 = LnPoly<T>(G(r0 * bracket / T(2) + tre / T(8)));
  f.pi2 = LnPoly<T>(G(r0 * (-(tm - tn) / T(64) - T(3) * h11 / T(128) + T(5) * h2 / T(128))),
                    G(r0 * bracket + tre / T(4)));
  f.v0 = G(r0 / T(8));
  f.v2 = G(r0 * (-lambda / T(4) + bracket) + tre / T(4));
  f.c1 = G(r0 / T(8));
  f.c3 = G(c3_density_over_pi(jet));
  f.a1 = LnPoly<T>(f.c1) - f.pi0;
  f.a0 = f.pi2 * Gauss<T>(T(-1));
  return f;
}

/// Gluing polynomial P(lambda) = a1 lambda + a0 from a weighted field of jets.
struct PolynomialP {
  double a0 = 0, a1 = 0, vol = 0;
};

enum class DensitySource { kPipeline, kClosedForm };

inline PolynomialP polynomial_P(const std::vector<std::pair<double, MetricJet<double>>>& field,
                                DensitySource src = DensitySource::kPipeline) {
  if (field.empty()) throw std::invalid_argument("empty jet field");
  PolynomialP p;
  double pi2 = 0;
  for (const auto& [w, jet] : field) {
    const LnPoly<double> d = src == DensitySource::kPipeline ? zeta_densities(jet).pi[2] : closed_form_densities(jet, 0.0).pi2;
    pi2 += w * d.real();
    p.vol += w;
    p.a1 += w * jet.rank_r0;
  }
  p.a1 *= std::numbers::ln2 / (4 * std::numbers::pi);
  p.a0 = -pi2 / std::numbers::pi;
  return p;
}

/// zeta_{R(lambda)}(0) = integral of v2(lambda), and the same quantity from the
/// heat coefficients of the two Laplacians, 2 (c3 - lambda c1).
struct ZetaRAtZero {
  double from_v2 = 0;
  double from_c = 0;
};
inline ZetaRAtZero zeta_R_at_zero(const std::vector<std::pair<double, MetricJet<double>>>& field, double lambda,
                                  DensitySource src = DensitySource::kPipeline) {
  ZetaRAtZero z;
  for (const auto& [w, jet] : field) {
    const double v2 = src == DensitySource::kPipeline ? heat_densities(jet, lambda).v[2].re : closed_form_densities(jet, lambda).v2.re;
    z.from_v2 += w * v2 / std::numbers::pi;
    const auto c = c_densities(jet);
    z.from_c += w * 2 * (c.c3 - lambda * c.c1);
  }
  return z;
}

}  // namespace bfkglue
