#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "twinfringe/biphoton_state.hpp"

namespace twinfringe
{

/// Relative counting rate at one camera point, meters / arbitrary units.
struct CountingRateSample
{
  double rho = 0.0;
  double rate = 0.0;
};

/// Phase gained by an a-mode at angle theta_a between the sources, small-angle
/// form (2 pi n d_a / lambda_a)(1 + theta_a^2 / 2). Appends a warning to
/// `warnings` (when given) for |theta_a| >= 0.1.
double phase_a(double theta_a, const ExperimentConfig& cfg,
               std::vector<std::string>* warnings = nullptr);

/// phase_a(theta) - phase_a(0) = (pi n d_a / lambda_a) theta^2, computed
/// without the large on-axis term.
double excess_phase_a(double theta_a, const ExperimentConfig& cfg);

/// theta_a = (lambda_a / lambda_b) rho / f0 under maximal correlation.
double map_kb_to_theta_a(double rho, const ExperimentConfig& cfg);

/// Direct sum of the counting rate with unequal amplitudes allowed:
///   sum_ka |C|^2 { |a1|^2 + |a2|^2 + 2|a1||a2| cos[phi_b + phi_scan - phi_a(k_a) + phi2 - phi1] }.
/// `phi_scan` is an extra delay added to the b-path phase.
double counting_rate_full(const SuperposedState& state, std::size_t kb, double phi_scan);

/// phi_0 that makes counting_rate_reduced(phi_0) proportional to
/// counting_rate_full(phi_scan), reduced to [0, 2 pi).
double equivalent_reference_phase(const SuperposedState& state, double phi_scan);

/// sum_ka |C|^2 {1 + cos[(phi_a(k_a) - phi_a(0)) - phi_0]} for equal source
/// amplitudes; the on-axis phase is absorbed into phi_0 so that phi_0 = 0
/// gives a bright centre under maximal correlation. Throws UnequalAmplitudes.
double counting_rate_reduced(const SuperposedState& state, std::size_t kb, double phi_0);

struct PhaseSweep
{
  double rate_max = 0.0;
  double rate_min = 0.0;
  double visibility = 0.0;
  double mean = 0.0;
};

/// Sweeps phi_0 over n_phases uniform values in [0, 2 pi) (n_phases >= 16).
/// The reduced rate is exactly a0 + Re(c1 exp(-i phi_0)), so the extrema are
/// a0 +- |c1| from the first discrete Fourier coefficient.
PhaseSweep sweep_phase(const SuperposedState& state, std::size_t kb, std::size_t n_phases = 64);

/// Visibility (max - min)/(max + min) at the b-mode nearest to rho on the
/// first azimuth of grid_b. Throws ZeroRate when max + min = 0.
double visibility_scan(const SuperposedState& state, double rho, const ExperimentConfig& cfg,
                       std::size_t n_phases = 64);

/// Index of the b-mode nearest to camera radius rho (first azimuth).
std::size_t nearest_b_mode(const SuperposedState& state, double rho, const ExperimentConfig& cfg);

} // namespace twinfringe

namespace twinfringe
{

/// Brute-force state for cfg.model with one b-mode per camera radius
/// (radii strictly increasing, b-mode index = radius index).
///
/// - Maximal: a-grid is the image of the camera grid.
/// - Uncorrelated: phase_balanced_disk with `grid_points` modes.
/// - GaussianPartial: line_grid with grid_points / 2 samples per side,
///   covering every shell out to 6 sigma_theta.
SuperposedState build_oracle_state(const ExperimentConfig& cfg, std::span<const double> radii,
                                   std::size_t grid_points);

} // namespace twinfringe
