// Scalar, matrix and truncated Taylor-jet arithmetic shared by all modules.
//
// Every container here is templated on a real field T. Two instantiations are
// used: double for numeric work and Rational (arbitrary precision) for exact
// golden computations.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace bfkglue {

using Rational = boost::multiprecision::cpp_rational;

/// Raised when a computation would need more Taylor data than was supplied.
struct OverdrawError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class T>
inline double to_double(const T& v) {
  return static_cast<double>(v);
}
template <>
inline double to_double<Rational>(const Rational& v) {
  return v.convert_to<double>();
}

/// p/q in the field T.
template <class T>
inline T frac(std::int64_t p, std::int64_t q = 1) {
  return T(p) / T(q);
}

template <class T>
inline bool is_zero(const T& v) {
  return v == T(0);
}

/// Complex numbers over an arbitrary real field (std::complex is only
/// specified for floating-point types).
template <class T>
struct Gauss {
  T re{0};
  T im{0};

  Gauss() = default;
  Gauss(T r) : re(std::move(r)) {}  // NOLINT(implicit)
  Gauss(T r, T i) : re(std::move(r)), im(std::move(i)) {}

  static Gauss i_unit() { return Gauss(T(0), T(1)); }

  Gauss& operator+=(const Gauss& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Gauss& operator-=(const Gauss& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Gauss& operator*=(const Gauss& o) {
    T r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Gauss& operator*=(const T& s) {
    re *= s;
    im *= s;
    return *this;
  }
  friend Gauss operator+(Gauss a, const Gauss& b) { return a += b; }
  friend Gauss operator-(Gauss a, const Gauss& b) { return a -= b; }
  friend Gauss operator*(Gauss a, const Gauss& b) { return a *= b; }
  friend Gauss operator*(Gauss a, const T& s) { return a *= s; }
  friend Gauss operator*(const T& s, Gauss a) { return a *= s; }
  Gauss operator-() const { return Gauss(-re, -im); }
  friend bool operator==(const Gauss& a, const Gauss& b) { return a.re == b.re && a.im == b.im; }
  bool zero() const { return is_zero(re) && is_zero(im); }
};

/// Dense square matrix of Gaussian numbers with a runtime rank.
template <class T>
class Mat {
 public:
  Mat() = default;
  explicit Mat(int n) : n_(n), a_(static_cast<std::size_t>(n * n)) {}

  static Mat identity(int n, const Gauss<T>& diag = Gauss<T>(T(1))) {
    Mat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = diag;
    return m;
  }
  static Mat from_real(int n, const std::vector<T>& row_major) {
    Mat m(n);
    for (int i = 0; i < n * n; ++i) m.a_[static_cast<std::size_t>(i)] = Gauss<T>(row_major[static_cast<std::size_t>(i)]);
    return m;
  }

  int rank() const { return n_; }
  Gauss<T>& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * n_ + j)]; }
  const Gauss<T>& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * n_ + j)]; }

  Mat& operator+=(const Mat& o) {
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  Mat& operator*=(const Gauss<T>& s) {
    for (auto& v : a_) v *= s;
    return *this;
  }
  Mat& operator*=(const T& s) {
    for (auto& v : a_) v *= s;
    return *this;
  }
  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(Mat a, const Gauss<T>& s) { return a *= s; }
  friend Mat operator*(Mat a, const T& s) { return a *= s; }
  friend Mat operator*(const Mat& a, const Mat& b) {
    Mat c(a.n_);
    for (int i = 0; i < a.n_; ++i)
      for (int k = 0; k < a.n_; ++k) {
        const auto& aik = a(i, k);
        if (aik.zero()) continue;
        for (int j = 0; j < a.n_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  /// Accumulates a*b into *this without a temporary.
  void add_product(const Mat& a, const Mat& b) {
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < n_; ++k) {
        const auto& aik = a(i, k);
        if (aik.zero()) continue;
        for (int j = 0; j < n_; ++j) (*this)(i, j) += aik * b(k, j);
      }
  }
  void add_scaled(const Mat& a, const Gauss<T>& s) {
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += a.a_[k] * s;
  }
  Gauss<T> trace() const {
    Gauss<T> t;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }
  bool zero() const {
    for (const auto& v : a_)
      if (!v.zero()) return false;
    return true;
  }
  friend bool operator==(const Mat& a, const Mat& b) { return a.n_ == b.n_ && a.a_ == b.a_; }
  const std::vector<Gauss<T>>& data() const { return a_; }

 private:
  int n_ = 0;
  std::vector<Gauss<T>> a_;
};

// ---------------------------------------------------------------------------
// Taylor jets in the three coordinates (x1, x2, xm) around the base point,
// stored through total degree two.
// ---------------------------------------------------------------------------

namespace jet_detail {
constexpr int kMonomials = 10;
constexpr int kStoredDegree = 2;
// Exponent triples in storage order.
constexpr std::array<std::array<int, 3>, kMonomials> kExp{{{0, 0, 0},
                                                           {1, 0, 0},
                                                           {0, 1, 0},
                                                           {0, 0, 1},
                                                           {2, 0, 0},
                                                           {1, 1, 0},
                                                           {1, 0, 1},
                                                           {0, 2, 0},
                                                           {0, 1, 1},
                                                           {0, 0, 2}}};
constexpr int degree(int k) { return kExp[static_cast<std::size_t>(k)][0] + kExp[static_cast<std::size_t>(k)][1] + kExp[static_cast<std::size_t>(k)][2]; }
constexpr int index_of(int e1, int e2, int e3) {
  for (int k = 0; k < kMonomials; ++k)
    if (kExp[static_cast<std::size_t>(k)][0] == e1 && kExp[static_cast<std::size_t>(k)][1] == e2 && kExp[static_cast<std::size_t>(k)][2] == e3) return k;
  return -1;
}
constexpr int product_index(int i, int j) {
  const auto& a = kExp[static_cast<std::size_t>(i)];
  const auto& b = kExp[static_cast<std::size_t>(j)];
  if (degree(i) + degree(j) > kStoredDegree) return -1;
  return index_of(a[0] + b[0], a[1] + b[1], a[2] + b[2]);
}
}  // namespace jet_detail

/// Marks a jet whose stored polynomial is exact (no truncated higher terms).
constexpr int kExactOrder = 1000;

/// Taylor polynomial with coefficients in C, valid through total degree
/// `order`. Differentiation lowers the order by one; evaluating or
/// differentiating past order zero raises OverdrawError.
template <class C>
class Jet {
 public:
  Jet() = default;
  Jet(const C& zero, int order) : order_(order) { c_.fill(zero); }

  static Jet constant(const C& value, const C& zero, int order = kExactOrder) {
    Jet j(zero, order);
    j.c_[0] = value;
    return j;
  }

  int order() const { return order_; }
  void set_order(int o) { order_ = o; }
  C& coef(int k) { return c_[static_cast<std::size_t>(k)]; }
  const C& coef(int k) const { return c_[static_cast<std::size_t>(k)]; }
  C& coef(int e1, int e2, int e3) { return c_[static_cast<std::size_t>(jet_detail::index_of(e1, e2, e3))]; }
  const C& coef(int e1, int e2, int e3) const { return c_[static_cast<std::size_t>(jet_detail::index_of(e1, e2, e3))]; }

  /// Highest degree that carries meaningful data.
  int live_degree() const { return order_ < jet_detail::kStoredDegree ? order_ : jet_detail::kStoredDegree; }

  bool has_nonconstant() const {
    for (int k = 1; k < jet_detail::kMonomials; ++k)
      if (!c_[static_cast<std::size_t>(k)].zero()) return true;
    return false;
  }
  bool zero() const {
    for (int k = 0; k < jet_detail::kMonomials; ++k)
      if (jet_detail::degree(k) <= live_degree() && !c_[static_cast<std::size_t>(k)].zero()) return false;
    return true;
  }

  Jet& operator+=(const Jet& o) {
    order_ = std::min(order_, o.order_);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    normalise_order();
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    order_ = std::min(order_, o.order_);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    normalise_order();
    return *this;
  }
  template <class S>
  Jet& scale(const S& s) {
    for (auto& v : c_) v *= s;
    return *this;
  }

  /// Partial derivative along coordinate `var` (0 = x1, 1 = x2, 2 = xm).
  Jet derivative(int var) const {
    if (order_ < 1) throw OverdrawError("Taylor jet differentiated beyond its declared order");
    Jet d(zero_like(), order_ >= kExactOrder ? kExactOrder : order_ - 1);
    for (int k = 0; k < jet_detail::kMonomials; ++k) {
      auto e = jet_detail::kExp[static_cast<std::size_t>(k)];
      if (e[static_cast<std::size_t>(var)] == 0) continue;
      const int mult = e[static_cast<std::size_t>(var)];
      e[static_cast<std::size_t>(var)] -= 1;
      C v = c_[static_cast<std::size_t>(k)];
      v *= static_cast_scalar(mult);
      d.c_[static_cast<std::size_t>(jet_detail::index_of(e[0], e[1], e[2]))] += v;
    }
    d.normalise_order();
    return d;
  }

  /// Constant term; requires order >= 0.
  const C& at_base() const {
    if (order_ < 0) throw OverdrawError("Taylor jet evaluated with negative remaining order");
    return c_[0];
  }

  /// Jet product with an arbitrary bilinear multiplication.
  template <class C2, class Op, class R>
  static Jet<R> multiply(const Jet& a, const Jet<C2>& b, Op op, const R& zero) {
    int order = std::min(a.order(), b.order());
    Jet<R> r(zero, order);
    const int live = r.live_degree();
    bool truncated = false;
    for (int i = 0; i < jet_detail::kMonomials; ++i) {
      if (jet_detail::degree(i) > live) continue;
      const C& ai = a.coef(i);
      if (ai.zero()) continue;
      for (int j = 0; j < jet_detail::kMonomials; ++j) {
        if (jet_detail::degree(i) + jet_detail::degree(j) > live) {
          if (!b.coef(j).zero()) truncated = true;
          continue;
        }
        const int k = jet_detail::product_index(i, j);
        if (k < 0) {
          if (!b.coef(j).zero()) truncated = true;
          continue;
        }
        op(r.coef(k), ai, b.coef(j));
      }
    }
    if (order >= kExactOrder && truncated) r.set_order(jet_detail::kStoredDegree);
    r.normalise_order();
    return r;
  }

  void normalise_order() {
    if (order_ >= kExactOrder) return;
    // Terms beyond the live degree are meaningless; keep them zeroed so that
    // equality and zero tests behave.
    for (int k = 0; k < jet_detail::kMonomials; ++k)
      if (jet_detail::degree(k) > order_) c_[static_cast<std::size_t>(k)] = zero_like();
  }

 private:
  C zero_like() const {
    C z = c_[0];
    z -= c_[0];
    return z;
  }
  static auto static_cast_scalar(int m) {
    using S = decltype(scalar_of(std::declval<C>()));
    return S(m);
  }
  template <class T>
  static T scalar_of(const Gauss<T>&);
  template <class T>
  static T scalar_of(const Mat<T>&);

  int order_ = kExactOrder;
  std::array<C, jet_detail::kMonomials> c_{};
};

template <class T>
using ScalarJet = Jet<Gauss<T>>;
template <class T>
using MatJet = Jet<Mat<T>>;

template <class T>
ScalarJet<T> scalar_jet(int order) {
  return ScalarJet<T>(Gauss<T>(), order);
}
template <class T>
MatJet<T> mat_jet(int rank, int order) {
  return MatJet<T>(Mat<T>(rank), order);
}

template <class T>
ScalarJet<T> operator*(const ScalarJet<T>& a, const ScalarJet<T>& b) {
  return ScalarJet<T>::multiply(
      a, b, [](Gauss<T>& r, const Gauss<T>& x, const Gauss<T>& y) { r += x * y; }, Gauss<T>());
}
template <class T>
MatJet<T> operator*(const MatJet<T>& a, const MatJet<T>& b) {
  return MatJet<T>::multiply(
      a, b, [](Mat<T>& r, const Mat<T>& x, const Mat<T>& y) { r.add_product(x, y); }, Mat<T>(a.coef(0).rank()));
}
template <class T>
MatJet<T> operator*(const MatJet<T>& a, const ScalarJet<T>& b) {
  return MatJet<T>::multiply(
      a, b, [](Mat<T>& r, const Mat<T>& x, const Gauss<T>& y) { r.add_scaled(x, y); }, Mat<T>(a.coef(0).rank()));
}
template <class T>
MatJet<T> operator*(const ScalarJet<T>& b, const MatJet<T>& a) {
  return a * b;
}
template <class T>
ScalarJet<T> operator+(ScalarJet<T> a, const ScalarJet<T>& b) {
  return a += b;
}
template <class T>
ScalarJet<T> operator-(ScalarJet<T> a, const ScalarJet<T>& b) {
  return a -= b;
}
template <class T>
MatJet<T> operator+(MatJet<T> a, const MatJet<T>& b) {
  return a += b;
}
template <class T>
MatJet<T> operator-(MatJet<T> a, const MatJet<T>& b) {
  return a -= b;
}

/// Scalar jet times the identity matrix of the given rank.
template <class T>
MatJet<T> identity_times(const ScalarJet<T>& s, int rank) {
  MatJet<T> m(Mat<T>(rank), s.order());
  for (int k = 0; k < jet_detail::kMonomials; ++k) m.coef(k) = Mat<T>::identity(rank, s.coef(k));
  return m;
}

/// Double factorial with (-1)!! = 0!! = 1.
inline std::int64_t double_factorial(int n) {
  std::int64_t r = 1;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}
inline std::int64_t factorial(int n) {
  std::int64_t r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

}  // namespace bfkglue
