#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "twinfringe/detection_oracle.hpp"
#include "twinfringe/optics_config.hpp"
#include "twinfringe/quadrature.hpp"

namespace twinfringe
{

struct ProfileSample
{
  double rho = 0.0;
  double rate = 0.0;
  double visibility = 0.0;
};

struct RadialProfile
{
  std::vector<ProfileSample> samples;  ///< rho strictly increasing
};

/// Square image centred on the axis, row-major, top row first.
struct FringeImage
{
  std::size_t width = 0;
  std::size_t height = 0;
  double pixel_pitch = 0.0;    ///< meters per pixel
  std::vector<double> values;  ///< rates, >= 0
  double normalization = 0.0;  ///< largest value in the frame

  double at(std::size_t row, std::size_t col) const { return values[row * width + col]; }
};

/// P(k_b) = exp(-2 rho^2 / (f0 sigma_b)^2).
double envelope(double rho, const ExperimentConfig& cfg);

/// P(k_b) {1 + cos[A rho^2 - phi_0]}.
double counting_rate_maxcorr(double rho, double phi_0, const ExperimentConfig& cfg);

/// sqrt(2 N lambda_eq f0^2 / (n d_a)). Throws ZeroDistance for d_a = 0 and
/// UsageError for N < 0.
double fringe_radius(int N, const ExperimentConfig& cfg);

/// P(k_b): the phi_0-independent rate once phi_a is averaged over P(k_a).
double counting_rate_uncorrelated(double rho, const ExperimentConfig& cfg);

/// Shell-Gaussian rate, integrated over theta' in [0, 6 sigma_theta]:
///   2 P(rho) int_0^6 u e^{-2u^2} {2 + cos[A(B sigma u - rho)^2 - phi_0]
///                                  + cos[A(B sigma u + rho)^2 - phi_0]} du
/// with u = theta'/sigma_theta. Normalized so that sigma_theta -> 0 gives
/// counting_rate_maxcorr. Throws ToleranceNotReached.
double counting_rate_partial_quadrature(double rho, double phi_0, const ExperimentConfig& cfg,
                                        special::QuadratureResult* info = nullptr);

/// Visibility of the quadrature rate from a uniform phi_0 sweep.
PhaseSweep quadrature_sweep(double rho, const ExperimentConfig& cfg, std::size_t n_phases = 64);

/// (1/gamma) exp(-sigma^2 rho^2 / chi^2) |D_-2(rho g) + D_-2(-rho g)|.
double visibility_closed_form(double rho, const ExperimentConfig& cfg);

/// 2 / gamma.
double central_visibility(const ExperimentConfig& cfg);

/// Radius where visibility_closed_form drops to half its central value.
/// Throws NoHalfPoint when that does not happen within 10 f0 sigma_b.
double visibility_hwhm(const ExperimentConfig& cfg);

/// Rate of cfg.model from its closed form (quadrature for GaussianPartial).
double model_rate(double rho, double phi_0, const ExperimentConfig& cfg);

/// Visibility of cfg.model: 1, 0, or visibility_closed_form.
double model_visibility(double rho, const ExperimentConfig& cfg);

/// n_samples uniformly spaced radii in [0, rho_max].
RadialProfile radial_profile(const ExperimentConfig& cfg, double rho_max, std::size_t n_samples,
                             double phi_0);

/// Maps a radial profile onto a resolution x resolution grid by linear
/// interpolation in rho. The profile must reach the screen corner.
FringeImage render_from_profile(const RadialProfile& profile, double screen_size,
                                std::size_t resolution);

/// Profile at 4x the pixel density out to the corner, then
/// render_from_profile. Requires resolution >= 64.
FringeImage render_pattern(const ExperimentConfig& cfg, double screen_size,
                           std::size_t resolution, double phi_0,
                           RadialProfile* profile_out = nullptr);

} // namespace twinfringe
