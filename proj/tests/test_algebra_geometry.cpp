// Exact arithmetic, Taylor jets and boundary-jet geometry.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bfkglue/geometry.hpp"

using namespace bfkglue;

namespace {

constexpr double kPi = std::numbers::pi;

MetricJet<double> round_sphere_in_flat_space(double a) {
  // g = (1 + xm/a)^2 g_S in boundary normal coordinates of a round sphere.
  MetricJet<double> j = MetricJet<double>::flat(1);
  j.tau_N = 2 / (a * a);
  j.g_n1 = {{{2 / a, 0}, {0, 2 / a}}};
  j.g_n2 = {{{2 / (a * a), 0}, {0, 2 / (a * a)}}};
  return j;
}

}  // namespace

TEST(Rational, GaussArithmeticIsExact) {
  const Gauss<Rational> a(Rational(1, 3), Rational(2, 5));
  const Gauss<Rational> b(Rational(-3, 7), Rational(1, 2));
  const Gauss<Rational> p = a * b;
  // (1/3 + 2i/5)(-3/7 + i/2) = (-1/7 - 1/5) + i(1/6 - 6/35)
  EXPECT_EQ(p.re, Rational(-12, 35));
  EXPECT_EQ(p.im, Rational(-1, 210));
  EXPECT_TRUE((a - a).zero());
  EXPECT_EQ(frac<Rational>(6, 4), Rational(3, 2));
}

TEST(Rational, Factorials) {
  EXPECT_EQ(factorial(0), 1);
  EXPECT_EQ(factorial(6), 720);
  EXPECT_EQ(double_factorial(-1), 1);
  EXPECT_EQ(double_factorial(0), 1);
  EXPECT_EQ(double_factorial(7), 105);
  EXPECT_EQ(double_factorial(8), 384);
}

TEST(Matrix, ProductAndTrace) {
  const auto a = Mat<Rational>::from_real(2, {Rational(1), Rational(2), Rational(3), Rational(4)});
  const auto b = Mat<Rational>::identity(2, Gauss<Rational>(Rational(2)));
  const auto c = a * b;
  EXPECT_EQ(c(1, 0).re, Rational(6));
  EXPECT_EQ(c.trace().re, Rational(10));
  const auto sq = a * a;
  EXPECT_EQ(sq(0, 0).re, Rational(7));
  EXPECT_EQ(sq(1, 1).re, Rational(22));
}

TEST(TaylorJet, ProductAndDerivative) {
  // f = 1 + 2 x1 + 3 xm, g = x1 - xm: (fg)_{x1} at p = 1, (fg)_{x1 xm} = 3 - 2.
  auto f = scalar_jet<Rational>(kExactOrder);
  f.coef(0, 0, 0) = Gauss<Rational>(Rational(1));
  f.coef(1, 0, 0) = Gauss<Rational>(Rational(2));
  f.coef(0, 0, 1) = Gauss<Rational>(Rational(3));
  auto g = scalar_jet<Rational>(kExactOrder);
  g.coef(1, 0, 0) = Gauss<Rational>(Rational(1));
  g.coef(0, 0, 1) = Gauss<Rational>(Rational(-1));
  const auto fg = f * g;
  EXPECT_EQ(fg.derivative(0).at_base().re, Rational(1));
  EXPECT_EQ(fg.derivative(0).derivative(2).at_base().re, Rational(1));
  EXPECT_EQ(fg.derivative(0).derivative(0).at_base().re, Rational(4));
}

TEST(TaylorJet, OverdrawThrows) {
  auto f = scalar_jet<double>(1);
  EXPECT_THROW((void)f.derivative(0).derivative(0), OverdrawError);
}

TEST(Geometry, FlatJetInvariants) {
  const auto j = MetricJet<double>::flat(3);
  EXPECT_EQ(mean_H1(j), 0.0);
  EXPECT_EQ(mean_H2(j), 0.0);
  EXPECT_EQ(ambient_tau_M(j), 0.0);
  const auto c = c_densities(j);
  EXPECT_NEAR(c.c1, 3 / (8 * kPi), 1e-16);
  EXPECT_EQ(c.c3, 0.0);
}

TEST(Geometry, RoundSphereInFlatSpaceHasFlatAmbient) {
  for (double a : {0.5, 1.0, 3.0}) {
    const auto j = round_sphere_in_flat_space(a);
    EXPECT_NEAR(mean_H1(j), -1 / a, 1e-15);
    EXPECT_NEAR(mean_H2(j), 1 / (a * a), 1e-15);
    EXPECT_NEAR(ambient_tau_M(j), 0.0, 1e-13);
    EXPECT_NEAR(riemann_R_alpha3alpha3(j), 0.0, 1e-13);
    const auto germ = ambient_curvature_from_germ(j);
    EXPECT_NEAR(germ.tau_M, 0.0, 1e-12);
    EXPECT_NEAR(germ.tau_N, 2 / (a * a), 1e-12);
  }
}

TEST(Geometry, WarpedProductScalarCurvature) {
  // Scalar curvature of f(u)^2 h + du^2 with 2-dimensional fibres at f = 1:
  // tau_h - 4 f'' - 2 f'^2.
  for (double fp : {-0.4, 0.0, 0.3})
    for (double fpp : {-0.2, 0.5})
      for (double th : {0.0, 1.5}) {
        const auto j = warped_jet(fp, fpp, th, 1);
        EXPECT_NEAR(ambient_tau_M(j), th - 4 * fpp - 2 * fp * fp, 1e-14);
        EXPECT_NEAR(ambient_curvature_from_germ(j).tau_M, th - 4 * fpp - 2 * fp * fp, 1e-12);
      }
}

TEST(Geometry, SphereProductJet) {
  const auto j = sphere_product_jet(2.0, 2);
  EXPECT_NEAR(j.tau_N, 0.5, 1e-16);
  EXPECT_NEAR(ambient_tau_M(j), 0.5, 1e-16);
  EXPECT_EQ(riemann_R_alpha3alpha3(j), 0.0);
}

TEST(Geometry, TwoRouteCurvatureOnRandomJets) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const auto j = random_jet(rng, 1, i % 2 == 0);
    const double closed = riemann_a3a3_closed(j);
    const auto germ = ambient_curvature_from_germ(j);
    EXPECT_NEAR(closed, germ.sum_R_a3a3, 1e-12 * (1 + std::abs(closed)));
    EXPECT_NEAR(ambient_tau_M(j), germ.tau_M, 1e-12 * (1 + std::abs(germ.tau_M)));
    EXPECT_NEAR(j.tau_N, germ.tau_N, 1e-12 * (1 + std::abs(j.tau_N)));
  }
}

TEST(Geometry, InvariantsAreFrameIndependent) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 2 * kPi);
  for (int i = 0; i < 20; ++i) {
    const auto j = random_jet(rng, 2, true);
    const double th = u(rng), c = std::cos(th), s = std::sin(th);
    const auto r = rotate_jet(j, Sym2<double>{{{c, -s}, {s, c}}});
    EXPECT_NEAR(mean_H1(j), mean_H1(r), 1e-13);
    EXPECT_NEAR(mean_H2(j), mean_H2(r), 1e-13);
    EXPECT_NEAR(ambient_tau_M(j), ambient_tau_M(r), 1e-13);
    EXPECT_NEAR(c_densities(j).c3, c_densities(r).c3, 1e-13);
  }
}

TEST(Geometry, PrincipalCurvatures) {
  MetricJet<double> j = MetricJet<double>::flat(1);
  j.g_n1 = {{{-2.0, 0.0}, {0.0, 4.0}}};  // shape operator diag(1, -2)
  const auto f = principal_curvatures(j);
  EXPECT_NEAR(f.kappa1, 1.0, 1e-15);
  EXPECT_NEAR(f.kappa2, -2.0, 1e-15);
  const auto m = mean_curvatures(f.kappa1, f.kappa2);
  EXPECT_NEAR(m.H1, mean_H1(j), 1e-15);
  EXPECT_NEAR(m.H2, mean_H2(j), 1e-15);
}

TEST(Geometry, ValidateRejectsBadJets) {
  MetricJet<double> j = MetricJet<double>::flat(2);
  j.g_n1 = {{{0.0, 1.0}, {0.0, 0.0}}};
  EXPECT_THROW(j.validate(), std::invalid_argument);
  MetricJet<double> k = MetricJet<double>::flat(2);
  k.endo_E.resize(3);
  EXPECT_THROW(k.validate(), std::invalid_argument);
}

TEST(Geometry, TraceOfEndomorphism) {
  MetricJet<Rational> j = MetricJet<Rational>::flat(2);
  j.endo_E = {Rational(1, 2), Rational(7), Rational(-3), Rational(1, 3)};
  EXPECT_EQ(j.trace_E(), Rational(5, 6));
}
