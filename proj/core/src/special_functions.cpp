#include "twinfringe/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "twinfringe/errors.hpp"

namespace twinfringe::special
{

namespace
{

constexpr double kStep = 0.5;                 // trapezoid step h
constexpr int kTerms = 40;                    // nodes n h up to 20
constexpr double kPoleLimit = std::numbers::pi / kStep;
constexpr double kContinuedFractionRadius = 12.0;
constexpr int kContinuedFractionDepth = 40;

bool finite(Complex z)
{
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

Complex checked(Complex value, const char* what, Complex arg)
{
  if (!finite(value))
  {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << " not representable at z = " << arg;
    throw Error(ErrorCode::Overflow, msg.str());
  }
  return value;
}

// exp(-z^2) with the overflow reported against the caller's argument.
Complex exp_minus_square(Complex z)
{
  const Complex z2 = z * z;
  if (-z2.real() > 709.0)
    throw Error(ErrorCode::Overflow, "exp(-z^2) overflows");
  return std::exp(-z2);
}

Complex faddeeva_continued_fraction(Complex z)
{
  Complex t = z;
  for (int k = kContinuedFractionDepth; k >= 1; --k)
    t = z - (0.5 * k) / t;
  return Complex{0.0, 1.0 / std::sqrt(std::numbers::pi)} / t;
}

// Im z >= 0, |z| <= kContinuedFractionRadius.
Complex faddeeva_trapezoid(Complex z)
{
  using std::numbers::pi;
  const double frac = std::fmod(std::abs(z.real()) / kStep, 1.0);
  // Nodes at n h when Re z sits between them, half-shifted nodes otherwise.
  const bool shifted = frac < 0.25 || frac > 0.75;
  const Complex z2 = z * z;

  Complex sum{0.0, 0.0};
  if (!shifted)
  {
    sum = 1.0 / z2;
    for (int n = 1; n <= kTerms; ++n)
    {
      const double t = n * kStep;
      sum += 2.0 * std::exp(-t * t) / (z2 - t * t);
    }
  }
  else
  {
    for (int n = 0; n < kTerms; ++n)
    {
      const double t = (n + 0.5) * kStep;
      sum += 2.0 * std::exp(-t * t) / (z2 - t * t);
    }
  }
  Complex result = Complex{0.0, kStep / pi} * z * sum;

  if (z.imag() < kPoleLimit)
  {
    const Complex e = std::exp(Complex{0.0, -2.0 * pi / kStep} * z);
    result += 2.0 * std::exp(-z2) / (shifted ? 1.0 + e : 1.0 - e);
  }
  return result;
}

Complex faddeeva_upper(Complex z)
{
  if (std::abs(z) > kContinuedFractionRadius)
    return faddeeva_continued_fraction(z);
  return faddeeva_trapezoid(z);
}

} // namespace

Complex faddeeva(Complex z)
{
  if (!finite(z))
    throw Error(ErrorCode::Overflow, "faddeeva argument is not finite");
  if (z.imag() >= 0.0)
    return faddeeva_upper(z);
  return checked(2.0 * exp_minus_square(z) - faddeeva_upper(-z), "w(z)", z);
}

Complex erfc_complex(Complex z)
{
  if (!finite(z))
    throw Error(ErrorCode::Overflow, "erfc argument is not finite");
  if (z.real() >= 0.0)
  {
    if (z == Complex{0.0, 0.0})
      return {1.0, 0.0};
    return checked(exp_minus_square(z) * faddeeva(Complex{-z.imag(), z.real()}), "erfc(z)", z);
  }
  return 2.0 - erfc_complex(-z);
}

Complex parabolic_cylinder_D0(Complex z)
{
  return checked(std::exp(-0.25 * z * z), "D_0(z)", z);
}

Complex parabolic_cylinder_Dm1(Complex z)
{
  const Complex iz = Complex{-z.imag(), z.real()} / std::numbers::sqrt2;
  const double root_half_pi = std::sqrt(0.5 * std::numbers::pi);
  return checked(root_half_pi * std::exp(-0.25 * z * z) * faddeeva(iz), "D_-1(z)", z);
}

Complex parabolic_cylinder_Dm2(Complex z)
{
  return checked(parabolic_cylinder_D0(z) - z * parabolic_cylinder_Dm1(z), "D_-2(z)", z);
}

Complex dm2_even(Complex z)
{
  const Complex plus = parabolic_cylinder_Dm2(z);
  const Complex minus = parabolic_cylinder_Dm2(-z);
  return plus + minus;
}

Complex dm2_even_scaled(Complex z)
{
  const Complex iz = Complex{-z.imag(), z.real()} / std::numbers::sqrt2;
  const double root_half_pi = std::sqrt(0.5 * std::numbers::pi);
  // Written so that z -> -z swaps the two Faddeeva terms and negates both
  // the prefactor and their difference: the result is even bit for bit.
  const Complex wp = faddeeva(iz);
  const Complex wm = faddeeva(-iz);
  return checked(2.0 - z * root_half_pi * (wp - wm), "scaled D_-2 pair", z);
}

} // namespace twinfringe::special
