#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles/reference_values.hpp"
#include "twinfringe/errors.hpp"
#include "twinfringe/special_functions.hpp"

using namespace twinfringe;
using special::Complex;

namespace
{

double rel_err(Complex got, Complex want)
{
  return std::abs(got - want) / std::abs(want);
}

} // namespace

TEST(Faddeeva, MatchesHighPrecisionTable)
{
  for (const auto& [z, want] : reference::faddeeva)
  {
    const double tol = std::abs(z) <= 10.0 ? 1e-13 : 1e-12;
    EXPECT_LT(rel_err(special::faddeeva(z), want), tol) << "z = " << z;
  }
}

TEST(Faddeeva, RealAxisGivesDawsonImaginaryPart)
{
  // w(x) = exp(-x^2) + (2i/sqrt(pi)) F(x); F(1) from A&S table 7.5.
  const Complex w = special::faddeeva({1.0, 0.0});
  EXPECT_NEAR(w.real(), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(w.imag(), 2.0 / std::sqrt(std::numbers::pi) * 0.5380795069127684, 1e-14);
}

TEST(Faddeeva, SymmetryUnderReflection)
{
  // w(-conj z) = conj w(z)
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int i = 0; i < 200; ++i)
  {
    const Complex z{u(rng), std::abs(u(rng))};
    const Complex a = special::faddeeva(-std::conj(z));
    const Complex b = std::conj(special::faddeeva(z));
    EXPECT_LT(std::abs(a - b), 1e-14 * std::abs(b) + 1e-300);
  }
}

TEST(Faddeeva, ContinuesAcrossTheSwitchRadius)
{
  for (double phase : {0.1, 0.7, 1.3})
  {
    const Complex in = std::polar(12.0 - 1e-9, phase);
    const Complex out = std::polar(12.0 + 1e-9, phase);
    // first-order step from the inner side, w' = -2zw + 2i/sqrt(pi)
    const Complex w_in = special::faddeeva(in);
    const Complex slope = -2.0 * in * w_in + Complex{0.0, 2.0 / std::sqrt(std::numbers::pi)};
    EXPECT_LT(rel_err(special::faddeeva(out), w_in + slope * (out - in)), 1e-12);
  }
}

TEST(Faddeeva, OverflowIsReported)
{
  try
  {
    special::faddeeva({0.0, -30.0});
    FAIL() << "expected overflow";
  }
  catch (const Error& e)
  {
    EXPECT_EQ(e.code(), ErrorCode::Overflow);
  }
  EXPECT_THROW(special::faddeeva({std::nan(""), 0.0}), Error);
}

TEST(Erfc, MatchesHighPrecisionTable)
{
  for (const auto& [z, want] : reference::erfc)
    EXPECT_LT(rel_err(special::erfc_complex(z), want), 1e-13) << "z = " << z;
}

TEST(Erfc, RealArgumentAgreesWithStd)
{
  for (double x : {-3.0, -0.5, 0.0, 0.25, 1.0, 2.0, 5.0})
    EXPECT_NEAR(special::erfc_complex({x, 0.0}).real(), std::erfc(x), 1e-15 * std::erfc(x) + 1e-16);
  EXPECT_EQ(special::erfc_complex({0.0, 0.0}), Complex(1.0, 0.0));
}

TEST(Erfc, ReflectionIdentity)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 500; ++i)
  {
    const Complex z{u(rng), u(rng)};
    const Complex sum = special::erfc_complex(z) + special::erfc_complex(-z);
    EXPECT_LT(std::abs(sum - 2.0), 1e-12) << "z = " << z;
  }
}

TEST(ParabolicCylinder, OrderZeroIsGaussian)
{
  EXPECT_EQ(special::parabolic_cylinder_D0({0.0, 0.0}), Complex(1.0, 0.0));
  EXPECT_NEAR(special::parabolic_cylinder_D0({2.0, 0.0}).real(), std::exp(-1.0), 1e-16);
}

TEST(ParabolicCylinder, NegativeOrdersMatchTable)
{
  for (const auto& [z, want] : reference::dm1)
    EXPECT_LT(rel_err(special::parabolic_cylinder_Dm1(z), want), 1e-12) << "z = " << z;
  for (const auto& [z, want] : reference::dm2)
    EXPECT_LT(rel_err(special::parabolic_cylinder_Dm2(z), want), 1e-12) << "z = " << z;
}

TEST(ParabolicCylinder, Dm2AtOriginIsExactlyOne)
{
  EXPECT_EQ(special::parabolic_cylinder_Dm2({0.0, 0.0}), Complex(1.0, 0.0));
  EXPECT_EQ(special::dm2_even_scaled({0.0, 0.0}), Complex(2.0, 0.0));
}

TEST(ParabolicCylinder, RecurrenceResidual)
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> r(0.0, 5.0), t(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < 1000; ++i)
  {
    const Complex z = std::polar(r(rng), t(rng));
    const Complex res = special::parabolic_cylinder_Dm2(z) + z * special::parabolic_cylinder_Dm1(z) -
                        special::parabolic_cylinder_D0(z);
    EXPECT_LT(std::abs(res), 1e-12) << "z = " << z;
  }
}

TEST(ParabolicCylinder, EvenCombinationIsBitwiseSymmetric)
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 300; ++i)
  {
    const Complex z{u(rng), u(rng)};
    EXPECT_EQ(special::dm2_even(z), special::dm2_even(-z));
    EXPECT_EQ(special::dm2_even_scaled(z), special::dm2_even_scaled(-z));
  }
}

TEST(ParabolicCylinder, ScaledPairMatchesUnscaled)
{
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 300; ++i)
  {
    const Complex z{u(rng), u(rng)};
    const Complex scaled = std::exp(0.25 * z * z) * special::dm2_even(z);
    EXPECT_LT(std::abs(scaled - special::dm2_even_scaled(z)), 1e-11 * (1.0 + std::abs(scaled)));
  }
}

TEST(ParabolicCylinder, ScaledPairStaysFiniteWhereUnscaledOverflows)
{
  // |exp(-z^2/4)| ~ exp(1000) along the imaginary axis.
  const Complex z{0.5, 63.0};
  EXPECT_THROW(special::dm2_even(z), Error);
  const Complex v = special::dm2_even_scaled(z);
  EXPECT_TRUE(std::isfinite(v.real()) && std::isfinite(v.imag()));
}
