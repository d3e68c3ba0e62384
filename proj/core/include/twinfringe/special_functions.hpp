#pragma once

#include <complex>

namespace twinfringe::special
{

using Complex = std::complex<double>;

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
///
/// Upper half plane: for |z| <= 12 the trapezoidal rule with step h = 0.5
/// applied to w(z) = (iz/pi) * int exp(-t^2)/(z^2 - t^2) dt, with the pole
/// correction 2 exp(-z^2)/(1 -+ exp(-2 pi i z/h)) for Im z < pi/h. Two node
/// lattices (t = nh and t = (n+1/2)h) are available; the one farther from
/// Re z is used so the pole term never cancels against a nearby node.
/// Discretization error is O(exp(-pi^2/h^2)) ~ 1e-17. For |z| > 12 the
/// Laplace continued fraction is used. Lower half plane via
/// w(z) = 2 exp(-z^2) - w(-z).
///
/// Relative accuracy is better than 1e-13 for |z| <= 10. Throws
/// ErrorCode::Overflow when the exact result is not representable.
Complex faddeeva(Complex z);

/// erfc(z) = exp(-z^2) w(iz) for Re z >= 0, and 2 - erfc(-z) otherwise.
Complex erfc_complex(Complex z);

/// D_0(z) = exp(-z^2/4).
Complex parabolic_cylinder_D0(Complex z);

/// D_-1(z) = exp(z^2/4) sqrt(pi/2) erfc(z/sqrt2), evaluated as
/// sqrt(pi/2) exp(-z^2/4) w(iz/sqrt2).
Complex parabolic_cylinder_Dm1(Complex z);

/// D_-2(z) = D_0(z) - z D_-1(z), i.e.
/// exp(-z^2/4) - z exp(z^2/4) sqrt(pi/2) erfc(z/sqrt2).
Complex parabolic_cylinder_Dm2(Complex z);

/// Even combination D_-2(z) + D_-2(-z). Bitwise symmetric in z.
Complex dm2_even(Complex z);

/// exp(z^2/4) [D_-2(z) + D_-2(-z)]
///   = 2 - z sqrt(pi/2) [w(iz/sqrt2) - w(-iz/sqrt2)].
/// Stays finite where the unscaled pair overflows.
Complex dm2_even_scaled(Complex z);

} // namespace twinfringe::special
