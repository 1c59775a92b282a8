// Canonical term algebra for parameter-dependent symbols near the cutting
// surface, the Riccati recursion for the two half-space Dirichlet-to-Neumann
// symbols, and the resolvent recursion for their sum.
//
// A term is  C(x) * xi1^a xi2^b * Q^(q2/2) * (mu - 2 sqrt(Q))^(-d)  where C is
// a matrix-valued Taylor jet in (x1, x2, xm) and
//   Q = g^{ab}(x, xm) xi_a xi_b + lambda   (weight-two variant) or
//   Q = g^{ab}(x, xm) xi_a xi_b            (lambda-constant variant).
// Q is never expanded: x- and xi-derivatives act on it through the chain rule,
// so the term basis is closed under every operation used below.
#pragma once

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "algebra.hpp"
#include "geometry.hpp"

namespace bfkglue {

enum class Variant { kWeightTwo, kLambdaConstant };

inline const char* variant_name(Variant v) { return v == Variant::kWeightTwo ? "weight-2" : "lambda-constant"; }

/// Exponent data of a canonical term.
struct TermKey {
  int a = 0;   // power of xi1
  int b = 0;   // power of xi2
  int q2 = 0;  // twice the power of Q
  int d = 0;   // power of (mu - 2 sqrt Q)^{-1}
  auto operator<=>(const TermKey&) const = default;
  /// Degree of homogeneity in (xi, sqrt(lambda), mu).
  int degree() const { return a + b + q2 - d; }
};

/// Shared per-jet data: the inverse metric germ that defines Q.
template <class T>
struct SymbolContext {
  int rank = 1;
  Variant variant = Variant::kWeightTwo;
  JetSym2<T> ginv;  // g^{ab}(x, xm)
  // d_c g^{ab} for c in {x1, x2, xm}.
  std::array<JetSym2<T>, 3> d_ginv;
};

template <class T>
std::shared_ptr<const SymbolContext<T>> make_context(const MetricJet<T>& jet, Variant v) {
  auto ctx = std::make_shared<SymbolContext<T>>();
  ctx->rank = jet.rank_r0;
  ctx->variant = v;
  ctx->ginv = metric_inverse(metric_lower(jet));
  for (int c = 0; c < 3; ++c)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) ctx->d_ginv[static_cast<std::size_t>(c)][a][b] = ctx->ginv[a][b].derivative(c);
  return ctx;
}

template <class T>
class SymbolExpr {
 public:
  using Coef = MatJet<T>;
  using Map = std::map<TermKey, Coef>;

  SymbolExpr() = default;
  explicit SymbolExpr(std::shared_ptr<const SymbolContext<T>> ctx) : ctx_(std::move(ctx)) {}

  const SymbolContext<T>& ctx() const { return *ctx_; }
  std::shared_ptr<const SymbolContext<T>> ctx_ptr() const { return ctx_; }
  int rank() const { return ctx_->rank; }
  const Map& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Adds a term, merging with an existing term of the same exponents.
  void add(const TermKey& k, const Coef& c) {
    if (c.zero()) {
      // A zero coefficient still constrains the order of an existing term.
      auto it = terms_.find(k);
      if (it != terms_.end()) it->second.set_order(std::min(it->second.order(), c.order()));
      return;
    }
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      terms_.emplace(k, c);
    } else {
      it->second += c;
      if (it->second.zero()) terms_.erase(it);
    }
  }

  SymbolExpr& operator+=(const SymbolExpr& o) {
    if (!ctx_) ctx_ = o.ctx_;
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
  }
  SymbolExpr& operator-=(const SymbolExpr& o) {
    if (!ctx_) ctx_ = o.ctx_;
    for (const auto& [k, c] : o.terms_) {
      Coef n = c;
      n.scale(T(-1));
      add(k, n);
    }
    return *this;
  }
  friend SymbolExpr operator+(SymbolExpr a, const SymbolExpr& b) { return a += b; }
  friend SymbolExpr operator-(SymbolExpr a, const SymbolExpr& b) { return a -= b; }

  SymbolExpr scaled(const Gauss<T>& s) const {
    SymbolExpr r(ctx_);
    for (const auto& [k, c] : terms_) {
      Coef n = c;
      n.scale(s);
      r.add(k, n);
    }
    return r;
  }

  /// Multiplies every term by Q^(dq2/2) (mu - 2 sqrt Q)^(-dd).
  SymbolExpr shifted(int dq2, int dd) const {
    SymbolExpr r(ctx_);
    for (const auto& [k, c] : terms_) r.add({k.a, k.b, k.q2 + dq2, k.d + dd}, c);
    return r;
  }

  /// Minimal remaining Taylor order over all terms.
  int min_order() const {
    int o = kExactOrder;
    for (const auto& [k, c] : terms_) o = std::min(o, c.order());
    return o;
  }

  /// Every term has degree `deg`; returns false otherwise.
  bool homogeneous(int deg) const {
    for (const auto& [k, c] : terms_)
      if (k.degree() != deg) return false;
    return true;
  }

 private:
  std::shared_ptr<const SymbolContext<T>> ctx_;
  Map terms_;
};

// ---------------------------------------------------------------------------
// Elementary constructors and operations.
// ---------------------------------------------------------------------------

template <class T>
MatJet<T> identity_jet(int rank) {
  return MatJet<T>::constant(Mat<T>::identity(rank), Mat<T>(rank));
}

/// The single term C * xi^a * Q^(q2/2) * R^(-d).
template <class T>
SymbolExpr<T> monomial(const std::shared_ptr<const SymbolContext<T>>& ctx, TermKey k, const MatJet<T>& c) {
  SymbolExpr<T> e(ctx);
  e.add(k, c);
  return e;
}

/// sqrt(Q) * Id.
template <class T>
SymbolExpr<T> sqrt_Q(const std::shared_ptr<const SymbolContext<T>>& ctx) {
  return monomial(ctx, {0, 0, 1, 0}, identity_jet<T>(ctx->rank));
}

/// Left multiplication by a matrix-valued function of x.
template <class T>
SymbolExpr<T> left_mul(const MatJet<T>& f, const SymbolExpr<T>& e) {
  SymbolExpr<T> r(e.ctx_ptr());
  for (const auto& [k, c] : e.terms()) r.add(k, f * c);
  return r;
}
template <class T>
SymbolExpr<T> right_mul(const SymbolExpr<T>& e, const MatJet<T>& f) {
  SymbolExpr<T> r(e.ctx_ptr());
  for (const auto& [k, c] : e.terms()) r.add(k, c * f);
  return r;
}
template <class T>
SymbolExpr<T> scalar_mul(const ScalarJet<T>& f, const SymbolExpr<T>& e) {
  SymbolExpr<T> r(e.ctx_ptr());
  for (const auto& [k, c] : e.terms()) r.add(k, c * f);
  return r;
}

/// Pointwise product of two symbols (no derivative corrections).
template <class T>
SymbolExpr<T> operator*(const SymbolExpr<T>& x, const SymbolExpr<T>& y) {
  SymbolExpr<T> r(x.ctx_ptr() ? x.ctx_ptr() : y.ctx_ptr());
  for (const auto& [kx, cx] : x.terms())
    for (const auto& [ky, cy] : y.terms()) r.add({kx.a + ky.a, kx.b + ky.b, kx.q2 + ky.q2, kx.d + ky.d}, cx * cy);
  return r;
}

/// Partial derivative in x_var (0 = x1, 1 = x2, 2 = xm).
template <class T>
SymbolExpr<T> d_x(const SymbolExpr<T>& e, int var) {
  const auto& ctx = e.ctx();
  const auto& dg = ctx.d_ginv[static_cast<std::size_t>(var)];
  SymbolExpr<T> r(e.ctx_ptr());
  // dQ = dg11 xi1^2 + 2 dg12 xi1 xi2 + dg22 xi2^2
  const std::array<std::tuple<int, int, ScalarJet<T>>, 3> dq{{{2, 0, dg[0][0]}, {1, 1, [&] {
                                                                ScalarJet<T> s = dg[0][1];
                                                                s.scale(T(2));
                                                                return s;
                                                              }()},
                                                              {0, 2, dg[1][1]}}};
  for (const auto& [k, c] : e.terms()) {
    r.add(k, c.derivative(var));
    if (k.q2 != 0) {
      for (const auto& [da, db, s] : dq) {
        MatJet<T> n = c * s;
        n.scale(frac<T>(k.q2, 2));
        r.add({k.a + da, k.b + db, k.q2 - 2, k.d}, n);
      }
    }
    if (k.d != 0) {
      for (const auto& [da, db, s] : dq) {
        MatJet<T> n = c * s;
        n.scale(T(k.d));
        r.add({k.a + da, k.b + db, k.q2 - 1, k.d + 1}, n);
      }
    }
  }
  return r;
}

/// Partial derivative in xi_alpha (alpha in {0, 1}).
template <class T>
SymbolExpr<T> d_xi(const SymbolExpr<T>& e, int alpha) {
  const auto& ctx = e.ctx();
  SymbolExpr<T> r(e.ctx_ptr());
  for (const auto& [k, c] : e.terms()) {
    const int pw = alpha == 0 ? k.a : k.b;
    if (pw > 0) {
      MatJet<T> n = c;
      n.scale(T(pw));
      r.add({k.a - (alpha == 0), k.b - (alpha == 1), k.q2, k.d}, n);
    }
    // d_xi Q = 2 sum_b g^{alpha b} xi_b
    for (int beta = 0; beta < 2; ++beta) {
      const ScalarJet<T>& g = ctx.ginv[static_cast<std::size_t>(alpha)][static_cast<std::size_t>(beta)];
      const int da = beta == 0, db = beta == 1;
      if (k.q2 != 0) {
        MatJet<T> n = c * g;
        n.scale(T(k.q2));
        r.add({k.a + da, k.b + db, k.q2 - 2, k.d}, n);
      }
      if (k.d != 0) {
        MatJet<T> n = c * g;
        n.scale(T(2 * k.d));
        r.add({k.a + da, k.b + db, k.q2 - 1, k.d + 1}, n);
      }
    }
  }
  return r;
}

/// d_xi^(w1, w2)
template <class T>
SymbolExpr<T> d_xi_multi(SymbolExpr<T> e, int w1, int w2) {
  for (int i = 0; i < w1; ++i) e = d_xi(e, 0);
  for (int i = 0; i < w2; ++i) e = d_xi(e, 1);
  return e;
}

/// D_x^(w1, w2) with D_x = -i d_x (tangential directions only).
template <class T>
SymbolExpr<T> D_x_multi(SymbolExpr<T> e, int w1, int w2) {
  for (int i = 0; i < w1; ++i) e = d_x(e, 0);
  for (int i = 0; i < w2; ++i) e = d_x(e, 1);
  Gauss<T> f(T(1));
  for (int i = 0; i < w1 + w2; ++i) f *= Gauss<T>(T(0), T(-1));
  return e.scaled(f);
}

/// Multi-indices over (xi1, xi2) of total size n.
inline std::vector<std::pair<int, int>> multi_indices(int n) {
  std::vector<std::pair<int, int>> out;
  for (int w1 = n; w1 >= 0; --w1) out.emplace_back(w1, n - w1);
  return out;
}

/// sum_{|w| = n} (1/w!) d_xi^w a . D_x^w b
template <class T>
SymbolExpr<T> compose_level(const SymbolExpr<T>& a, const SymbolExpr<T>& b, int n) {
  SymbolExpr<T> r(a.ctx_ptr() ? a.ctx_ptr() : b.ctx_ptr());
  for (auto [w1, w2] : multi_indices(n)) {
    const T inv = T(1) / T(factorial(w1) * factorial(w2));
    r += (d_xi_multi(a, w1, w2) * D_x_multi(b, w1, w2)).scaled(Gauss<T>(inv));
  }
  return r;
}

/// Symbol of the composition truncated at |w| <= depth.
template <class T>
SymbolExpr<T> leibniz_compose(const SymbolExpr<T>& a, const SymbolExpr<T>& b, int depth) {
  SymbolExpr<T> r(a.ctx_ptr() ? a.ctx_ptr() : b.ctx_ptr());
  for (int n = 0; n <= depth; ++n) r += compose_level(a, b, n);
  return r;
}

/// Collapses every Taylor coefficient to its value at the base point.
template <class T>
SymbolExpr<T> evaluate_at_p(const SymbolExpr<T>& e) {
  SymbolExpr<T> r(e.ctx_ptr());
  for (const auto& [k, c] : e.terms()) r.add(k, MatJet<T>::constant(c.at_base(), Mat<T>(e.rank())));
  return r;
}

/// Numeric value of an expression at the base point for given (xi, lambda, mu).
/// In the lambda-constant variant the lambda argument is ignored inside Q.
template <class T>
std::vector<std::complex<double>> evaluate_numeric(const SymbolExpr<T>& e, double xi1, double xi2, double lambda,
                                                   std::complex<double> mu) {
  const int n = e.rank();
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n * n));
  const double q0 = xi1 * xi1 + xi2 * xi2 + (e.ctx().variant == Variant::kWeightTwo ? lambda : 0.0);
  const std::complex<double> res = mu - 2.0 * std::sqrt(q0);
  for (const auto& [k, c] : e.terms()) {
    const Mat<T>& m = c.at_base();
    const std::complex<double> f =
        std::pow(xi1, k.a) * std::pow(xi2, k.b) * std::pow(q0, 0.5 * k.q2) * std::pow(res, -k.d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const auto& g = m(i, j);
        out[static_cast<std::size_t>(i * n + j)] += f * std::complex<double>(to_double(g.re), to_double(g.im));
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Operator data of the Laplace-type operator in boundary normal coordinates.
// ---------------------------------------------------------------------------

template <class T>
struct OperatorData {
  std::shared_ptr<const SymbolContext<T>> ctx;
  ScalarJet<T> A;                // -1/2 g^{ab} d_m g_ab
  std::array<SymbolExpr<T>, 3> p;  // p[0] = p2, p[1] = p1, p[2] = p0
  MatJet<T> omega_m;
};

template <class T>
MatJet<T> real_mat_jet(const RealMat<T>& m, int rank, int order) {
  return MatJet<T>::constant(Mat<T>::from_real(rank, m), Mat<T>(rank), order);
}

/// Builds A and the three layers p2, p1, p0 of the tangential operator. In the
/// lambda-constant variant lambda * Id is placed in p0.
template <class T>
OperatorData<T> build_operator_data(const MetricJet<T>& jet, Variant variant, const T& lambda = T(0)) {
  jet.validate();
  OperatorData<T> od;
  od.ctx = make_context(jet, variant);
  const auto& ctx = *od.ctx;
  const int r = jet.rank_r0;
  const JetSym2<T> g = metric_lower(jet);
  const ScalarJet<T> ldet = log_det(g);

  // A
  ScalarJet<T> A = scalar_jet<T>(kExactOrder);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) A += ctx.ginv[a][b] * g[a][b].derivative(2);
  A.scale(frac<T>(-1, 2));
  od.A = A;

  // Connection germ omega_a(x) = omega_a(p) + x_c d_c omega_a; the normal
  // derivative of omega_a is not part of the input and is taken as zero.
  std::array<MatJet<T>, 2> om;
  for (int a = 0; a < 2; ++a) {
    MatJet<T> o = real_mat_jet(jet.omega[static_cast<std::size_t>(a)], r, 1);
    o.coef(1, 0, 0) = Mat<T>::from_real(r, jet.omega_d[0][static_cast<std::size_t>(a)]);
    o.coef(0, 1, 0) = Mat<T>::from_real(r, jet.omega_d[1][static_cast<std::size_t>(a)]);
    om[static_cast<std::size_t>(a)] = o;
  }
  od.omega_m = real_mat_jet(jet.omega[2], r, 0);

  // p2 = Q Id
  od.p[0] = monomial(od.ctx, {0, 0, 2, 0}, identity_jet<T>(r));

  // p1 = -i sum_b (1/2 g^{ab} d_a ln|g| + d_a g^{ab}) xi_b - 2i sum g^{ab} omega_a xi_b
  SymbolExpr<T> p1(od.ctx);
  const Gauss<T> minus_i(T(0), T(-1));
  for (int beta = 0; beta < 2; ++beta) {
    ScalarJet<T> bb = scalar_jet<T>(kExactOrder);
    for (int a = 0; a < 2; ++a) {
      ScalarJet<T> t = ctx.ginv[a][beta] * ldet.derivative(a);
      t.scale(frac<T>(1, 2));
      bb += t;
      bb += ctx.ginv[a][beta].derivative(a);
    }
    MatJet<T> c = identity_times(bb, r);
    for (int a = 0; a < 2; ++a) {
      MatJet<T> t = om[static_cast<std::size_t>(a)] * ctx.ginv[a][beta];
      t.scale(T(2));
      c += t;
    }
    c.scale(minus_i);
    p1.add({beta == 0, beta == 1, 0, 0}, c);
  }
  od.p[1] = p1;

  // Tangential Christoffel symbols Gamma^c_{ab}.
  std::array<std::array<std::array<ScalarJet<T>, 2>, 2>, 2> gam;
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        ScalarJet<T> acc = scalar_jet<T>(kExactOrder);
        for (int d = 0; d < 2; ++d)
          acc += ctx.ginv[c][d] * (g[b][d].derivative(a) + g[a][d].derivative(b) - g[a][b].derivative(d));
        acc.scale(frac<T>(1, 2));
        gam[c][a][b] = acc;
      }

  // p0 = -sum g^{ab}(d_a omega_b + omega_a omega_b - Gamma^c_ab omega_c) - E
  MatJet<T> p0 = mat_jet<T>(r, kExactOrder);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      MatJet<T> inner = om[static_cast<std::size_t>(b)].derivative(a) + om[static_cast<std::size_t>(a)] * om[static_cast<std::size_t>(b)];
      for (int c = 0; c < 2; ++c) inner -= om[static_cast<std::size_t>(c)] * gam[c][a][b];
      p0 -= inner * ctx.ginv[a][b];
    }
  p0 -= real_mat_jet(jet.endo_E, r, 0);
  if (variant == Variant::kLambdaConstant) p0 += MatJet<T>::constant(Mat<T>::identity(r, Gauss<T>(lambda)), Mat<T>(r));
  od.p[2] = monomial(od.ctx, {0, 0, 0, 0}, p0);
  return od;
}

// ---------------------------------------------------------------------------
// Riccati recursion.
// ---------------------------------------------------------------------------

/// Labels of the contributions to the order -1 layer, numbered as in the
/// standard decomposition of theta_{-1}:
///   1 second-order composition of the principal symbols
///   2 d_xi(order 0) . D_x(order 1)
///   3 d_xi(order 1) . D_x(order 0)
///   4 square of the order 0 layer
///   5 A times the order 0 layer
///   6 normal derivative of the order 0 layer
///   7 zeroth-order operator layer
///   8 commutator with omega_m
constexpr int kThetaGroups = 8;

template <class T>
struct RiccatiResult {
  std::vector<SymbolExpr<T>> layers;  // layers[j] has order 1 - j
  // Labelled pieces of layers[2] (index 1..8; index 0 unused).
  std::array<SymbolExpr<T>, kThetaGroups + 1> minus_one_groups;
};

/// Solves Q^2 = D + sign (A Q - d_m Q + [Q, omega_m]) order by order; sign = +1
/// gives the symbol of Q+, sign = -1 that of Q-.
template <class T>
RiccatiResult<T> solve_riccati(const OperatorData<T>& od, int sign, int depth = 3) {
  if (depth < 1 || depth > 3) throw std::invalid_argument("Riccati depth must be 1..3");
  const auto& ctx = od.ctx;
  const Gauss<T> sg{T(sign)};
  RiccatiResult<T> res;
  res.layers.push_back(sqrt_Q(ctx));
  for (auto& g : res.minus_one_groups) g = SymbolExpr<T>(ctx);
  for (int k = 1; k < depth; ++k) {
    std::array<SymbolExpr<T>, kThetaGroups + 1> grp;
    for (auto& g : grp) g = SymbolExpr<T>(ctx);
    const SymbolExpr<T>& prev = res.layers[static_cast<std::size_t>(k - 1)];
    if (2 - k >= 0) grp[7] += od.p[static_cast<std::size_t>(k)];
    grp[5] += scalar_mul(od.A, prev).scaled(sg);
    grp[6] -= d_x(prev, 2).scaled(sg);
    const SymbolExpr<T> comm = right_mul(prev, od.omega_m) - left_mul(od.omega_m, prev);
    if (!comm.empty()) grp[8] += comm.scaled(sg);
    // Composition terms with |w| + i + j = k other than the two principal ones.
    for (int i = 0; i <= k; ++i)
      for (int j = 0; i + j <= k; ++j) {
        const int n = k - i - j;
        if (n == 0 && (i == k || j == k)) continue;
        const SymbolExpr<T> c =
            compose_level(res.layers[static_cast<std::size_t>(i)], res.layers[static_cast<std::size_t>(j)], n);
        int label = 0;
        if (n == 2 && i == 0 && j == 0) label = 1;
        else if (n == 1 && i == 1 && j == 0) label = 2;
        else if (n == 1 && i == 0 && j == 1) label = 3;
        else if (n == 0 && i == 1 && j == 1) label = 4;
        else label = 1;  // only reached for k = 1, where all pieces are lumped
        grp[static_cast<std::size_t>(label)] -= c;
      }
    SymbolExpr<T> layer(ctx);
    for (int g = 1; g <= kThetaGroups; ++g) {
      grp[static_cast<std::size_t>(g)] = grp[static_cast<std::size_t>(g)].shifted(-1, 0).scaled(Gauss<T>(frac<T>(1, 2)));
      layer += grp[static_cast<std::size_t>(g)];
    }
    if (!layer.homogeneous(1 - k)) throw std::logic_error("Riccati layer is not homogeneous of the expected degree");
    res.layers.push_back(layer);
    if (k == 2) res.minus_one_groups = grp;
  }
  return res;
}

template <class T>
struct DtnSymbols {
  OperatorData<T> op;
  RiccatiResult<T> alpha;  // Q+
  RiccatiResult<T> beta;   // Q-
  std::vector<SymbolExpr<T>> theta;
  std::array<SymbolExpr<T>, kThetaGroups + 1> theta_minus_one_groups;
};

template <class T>
DtnSymbols<T> dtn_symbols(const MetricJet<T>& jet, Variant variant, int depth = 3, const T& lambda = T(0)) {
  DtnSymbols<T> s;
  s.op = build_operator_data(jet, variant, lambda);
  s.alpha = solve_riccati(s.op, +1, depth);
  s.beta = solve_riccati(s.op, -1, depth);
  for (int j = 0; j < depth; ++j)
    s.theta.push_back(s.alpha.layers[static_cast<std::size_t>(j)] + s.beta.layers[static_cast<std::size_t>(j)]);
  for (int g = 0; g <= kThetaGroups; ++g)
    s.theta_minus_one_groups[static_cast<std::size_t>(g)] =
        s.alpha.minus_one_groups[static_cast<std::size_t>(g)] + s.beta.minus_one_groups[static_cast<std::size_t>(g)];
  return s;
}

// ---------------------------------------------------------------------------
// Resolvent recursion.
// ---------------------------------------------------------------------------

/// Groups of the order -3 resolvent layer:
///   A second xi-derivative block, B d_xi theta_1 . D_x r_-2,
///   C d_xi theta_0 . D_x r_-1, D theta_0 r_-2, E theta_-1 r_-1.
enum ResolventGroup { kGroupA = 0, kGroupB, kGroupC, kGroupD, kGroupE, kResolventGroups };

inline const char* resolvent_group_name(int g) {
  static const char* names[] = {"A", "B", "C", "D", "E"};
  return names[g];
}

template <class T>
struct ResolventSymbols {
  std::vector<SymbolExpr<T>> layers;  // layers[j] = r_{-1-j}
  std::array<SymbolExpr<T>, kResolventGroups> groups;
  // Group E split along the labelled pieces of theta_{-1} (index 1..8).
  std::array<SymbolExpr<T>, kThetaGroups + 1> e_groups;
};

template <class T>
ResolventSymbols<T> resolvent_symbols(const DtnSymbols<T>& dtn, int depth = 3) {
  const auto& theta = dtn.theta;
  if (static_cast<int>(theta.size()) < depth) throw std::invalid_argument("theta list shorter than resolvent depth");
  const auto ctx = theta[0].ctx_ptr();
  ResolventSymbols<T> r;
  r.layers.push_back(monomial(ctx, {0, 0, 0, 1}, identity_jet<T>(ctx->rank)));
  for (auto& g : r.groups) g = SymbolExpr<T>(ctx);
  for (auto& g : r.e_groups) g = SymbolExpr<T>(ctx);
  for (int j = 1; j < depth; ++j) {
    SymbolExpr<T> acc(ctx);
    for (int k = 0; k < j; ++k)
      for (int l = 0; l + k <= j; ++l) {
        const int n = j - k - l;
        const SymbolExpr<T> c =
            compose_level(theta[static_cast<std::size_t>(l)], r.layers[static_cast<std::size_t>(k)], n).shifted(0, 1);
        acc += c;
        if (j == 2) {
          int g = -1;
          if (n == 2 && l == 0 && k == 0) g = kGroupA;
          else if (n == 1 && l == 0 && k == 1) g = kGroupB;
          else if (n == 1 && l == 1 && k == 0) g = kGroupC;
          else if (n == 0 && l == 1 && k == 1) g = kGroupD;
          else if (n == 0 && l == 2 && k == 0) g = kGroupE;
          r.groups[static_cast<std::size_t>(g)] += c;
        }
      }
    if (!acc.homogeneous(-1 - j)) throw std::logic_error("resolvent layer is not homogeneous of the expected degree");
    r.layers.push_back(acc);
  }
  if (depth >= 3)
    for (int g = 1; g <= kThetaGroups; ++g)
      r.e_groups[static_cast<std::size_t>(g)] =
          (dtn.theta_minus_one_groups[static_cast<std::size_t>(g)] * r.layers[0]).shifted(0, 1);
  return r;
}

}  // namespace bfkglue
