#pragma once

#include <cstddef>
#include <functional>

namespace twinfringe::special
{

struct QuadratureResult
{
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
};

struct QuadratureOptions
{
  std::size_t max_intervals = 4096;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature of f over
/// [lower, upper].
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate is <= abs_tol. The subdivision sequence depends only on f and the
/// bounds, so a smaller abs_tol continues the same sequence and never returns
/// a larger error estimate. Throws ToleranceNotReached once
/// `max_intervals` is exhausted.
QuadratureResult integrate_radial(const std::function<double(double)>& f,
                                  double lower, double upper, double abs_tol,
                                  const QuadratureOptions& options = {});

} // namespace twinfringe::special
