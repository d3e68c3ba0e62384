#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "twinfringe/optics_config.hpp"

namespace twinfringe
{

/// Polar grid of paraxial plane-wave modes for one photon species.
///
/// Mode index = azimuth_index * theta.size() + theta_index. The transverse
/// wave vector of a mode is k * theta * (cos psi, sin psi).
struct ModeGrid
{
  std::vector<double> theta;    ///< strictly increasing polar angles in [0, 0.1)
  std::vector<double> azimuth;  ///< strictly increasing azimuths in [0, 2 pi)
  double k_magnitude = 0.0;     ///< |k| = 2 pi / lambda

  std::size_t size() const { return theta.size() * azimuth.size(); }
  std::size_t theta_index(std::size_t mode) const { return mode % theta.size(); }
  std::size_t azimuth_index(std::size_t mode) const { return mode / theta.size(); }
  double theta_of(std::size_t mode) const { return theta[theta_index(mode)]; }
  double azimuth_of(std::size_t mode) const { return azimuth[azimuth_index(mode)]; }
};

/// Throws InvalidGrid when the invariants above do not hold.
void check_grid(const ModeGrid& grid);

/// n midpoint samples (j + 1/2) theta_max / n at the given azimuths.
ModeGrid uniform_grid(double theta_max, std::size_t n, std::vector<double> azimuths, double k);

/// Transverse line through the axis: uniform_grid at azimuths {0, pi}, so
/// 2 n modes with signed coordinates +-(j + 1/2) theta_max / n.
ModeGrid line_grid(double theta_max, std::size_t n, double k);

/// b-photon modes that the camera lens maps to the given radii
/// (theta_b = rho / f0, azimuth 0).
ModeGrid camera_grid(std::span<const double> radii, const ExperimentConfig& cfg);

/// a-photon modes paired with `grid_b` under k_a = k0 - k_b:
/// theta_a = (lambda_a / lambda_b) theta_b, azimuth shifted by pi.
ModeGrid image_grid(const ModeGrid& grid_b, const ExperimentConfig& cfg);

/// Single-azimuth a-photon grid sampled uniformly in theta^2 (equal
/// transverse area per mode) over a disk whose excess phase
/// (pi n d_a / lambda_a) theta^2 spans exactly `cycles` periods. Uniform
/// weights on it average exp(i phi_a) to zero. Requires d_a > 0.
ModeGrid phase_balanced_disk(const ExperimentConfig& cfg, std::size_t n, std::size_t cycles);

/// Discretized two-photon state: amplitudes C[k_a, k_b] stored a-major.
struct TwoPhotonState
{
  ModeGrid grid_a;
  ModeGrid grid_b;
  std::vector<std::complex<double>> amplitudes;

  std::size_t index(std::size_t ka, std::size_t kb) const { return ka * grid_b.size() + kb; }
  const std::complex<double>& amplitude(std::size_t ka, std::size_t kb) const
  {
    return amplitudes[index(ka, kb)];
  }
};

/// Source amplitudes and the a-path phase table attached to a base state.
struct SuperposedState
{
  TwoPhotonState base;
  std::complex<double> alpha1;
  std::complex<double> alpha2;
  double phi_b = 0.0;
  std::vector<double> phase_a;   ///< full phi_a(k_a) over grid_a
  std::vector<double> excess_a;  ///< phi_a(k_a) - phi_a(on axis), computed directly
};

/// b-photon envelope exp(-2 theta_b^2 / sigma_b^2) sampled per mode.
std::vector<double> envelope_weights(const ModeGrid& grid_b, const ExperimentConfig& cfg);

/// |C|^2 = p_a(k_a) p_b(k_b) for arbitrary non-negative marginal weights.
TwoPhotonState product_state(const ModeGrid& grid_a, std::span<const double> weights_a,
                             const ModeGrid& grid_b, std::span<const double> weights_b);

/// Builds |C|^2 for one correlation model and normalizes the table.
///
/// - Maximal: P(k_b) on the single a-mode k_a = f(k_b); grid_a must contain
///   the image of every b-mode (GridMismatch otherwise).
/// - Uncorrelated: P(k_a) P(k_b) with P(k_a) uniform over grid_a.
/// - GaussianPartial: P(k_b) |mu(k_a + k_b)|^2 with the delta on |k'|
///   resolved analytically. Both grids must lie on one transverse line; the
///   weight of each a-mode is the integral of |theta'| exp(-2 theta'^2 /
///   sigma^2) over the mode's cell in theta', i.e. the shell Gaussian with
///   its polar area element.
TwoPhotonState build_amplitudes(CorrelationModel model, const ModeGrid& grid_a,
                                const ModeGrid& grid_b, const ExperimentConfig& cfg);

double joint_probability(const TwoPhotonState& state, std::size_t ka, std::size_t kb);
double marginal_a(const TwoPhotonState& state, std::size_t ka);
double marginal_b(const TwoPhotonState& state, std::size_t kb);
double conditional_probability(const TwoPhotonState& state, std::size_t ka, std::size_t given_kb);
double total_probability(const TwoPhotonState& state);

/// Mutual information of the discretized joint distribution, in bits.
double mutual_information_bits(const TwoPhotonState& state);

/// Signed angle theta' of k' = k_a + k_b along the common transverse line.
double shell_angle(const TwoPhotonState& state, std::size_t ka, std::size_t kb,
                   const ExperimentConfig& cfg);

SuperposedState superpose_sources(const TwoPhotonState& state, const ExperimentConfig& cfg);

} // namespace twinfringe
