#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "twinfringe/biphoton_state.hpp"
#include "twinfringe/optics_config.hpp"

namespace twinfringe
{

/// sigma_theta = sqrt(8 pi sqrt(1/v0^2 - 1) / (k0'^2 lambda_a n d_a)), the
/// inverse of central_visibility. Returns 0 for v0 = 1; throws
/// DegenerateVisibility outside (0, 1], MissingPumpWavelength, ZeroDistance.
double estimate_sigma_theta(double v0, const ExperimentConfig& cfg);

/// Independent inverter: bisection on central_visibility in log sigma over
/// [1e-9, 1]. Poorly conditioned as v0 -> 1 (V(0) - 1 ~ sigma^4).
double estimate_sigma_theta_scan(double v0, const ExperimentConfig& cfg);

/// sigma_theta whose visibility_hwhm equals r0, by bisection over
/// [sigma_lo, sigma_hi] (r0 decreases with sigma).
double estimate_sigma_theta_from_hwhm(double r0, const ExperimentConfig& cfg,
                                      double sigma_lo = 1e-5, double sigma_hi = 1e-2);

struct FringeObservation
{
  double d_a = 0.0;
  std::vector<std::pair<int, double>> ring_radii;  ///< (N, rho_N), meters
  std::optional<double> v0;
  std::optional<double> hwhm;
};

struct WavelengthFit
{
  double lambda_eq = 0.0;
  double std_error = 0.0;   ///< OLS slope standard error, meters
  std::size_t points = 0;
};

/// Least squares through the origin of rho_1^2 against x = 2 f0^2 / (n d_a);
/// the slope is lambda_eq. f0 and n_a come from cfg. Needs >= 3
/// observations with distinct d_a > 0 and an N = 1 ring (InsufficientData);
/// throws NegativeSlope for a non-positive slope.
WavelengthFit estimate_equivalent_wavelength(std::span<const FringeObservation> observations,
                                             const ExperimentConfig& cfg);

/// lambda_b^2 / lambda_eq.
double infer_lambda_a(double lambda_eq, double lambda_b);

/// GaussianPartial table for the measured widths; sigma_theta = 0 gives the
/// Maximal table on the same grids.
TwoPhotonState reconstruct_joint_probability(double sigma_theta, double sigma_b,
                                             const ModeGrid& grid_a, const ModeGrid& grid_b,
                                             const ExperimentConfig& cfg);

/// lambda_p / (pi w_p).
double pump_waist_to_sigma(double w_p, double lambda_p);

} // namespace twinfringe
