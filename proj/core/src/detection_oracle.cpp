#include "twinfringe/detection_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "compensated_sum.hpp"

namespace twinfringe
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_b_mode(const SuperposedState& state, std::size_t kb)
{
  if (kb >= state.base.grid_b.size())
  {
    std::ostringstream msg;
    msg << "b-mode " << kb << " outside grid of size " << state.base.grid_b.size();
    throw Error(ErrorCode::IndexOutOfRange, msg.str());
  }
}

} // namespace

double phase_a(double theta_a, const ExperimentConfig& cfg, std::vector<std::string>* warnings)
{
  if (warnings && std::abs(theta_a) >= 0.1)
  {
    std::ostringstream msg;
    msg << "ParaxialViolation: theta_a = " << theta_a << " >= 0.1";
    warnings->push_back(msg.str());
  }
  return kTwoPi * cfg.n_a * cfg.d_a / cfg.lambda_a * (1.0 + 0.5 * theta_a * theta_a);
}

double excess_phase_a(double theta_a, const ExperimentConfig& cfg)
{
  return std::numbers::pi * cfg.n_a * cfg.d_a / cfg.lambda_a * theta_a * theta_a;
}

double map_kb_to_theta_a(double rho, const ExperimentConfig& cfg)
{
  return cfg.lambda_a / cfg.lambda_b * rho / cfg.f0;
}

double counting_rate_full(const SuperposedState& state, std::size_t kb, double phi_scan)
{
  check_b_mode(state, kb);
  const double m1 = std::abs(state.alpha1);
  const double m2 = std::abs(state.alpha2);
  const double fixed = state.phi_b + phi_scan + std::arg(state.alpha2) - std::arg(state.alpha1);

  detail::CompensatedSum sum;
  for (std::size_t ka = 0; ka < state.base.grid_a.size(); ++ka)
  {
    const double p = std::norm(state.base.amplitude(ka, kb));
    if (p == 0.0)
      continue;
    sum.add(p * (m1 * m1 + m2 * m2 + 2.0 * m1 * m2 * std::cos(fixed - state.phase_a[ka])));
  }
  return sum.value();
}

double equivalent_reference_phase(const SuperposedState& state, double phi_scan)
{
  // cos[fixed - phi_a] = cos[(phi_a - phi_a(0)) - (fixed - phi_a(0))]
  const double on_axis = state.phase_a.empty() ? 0.0
                                               : state.phase_a.front() - state.excess_a.front();
  const double fixed = state.phi_b + phi_scan + std::arg(state.alpha2) - std::arg(state.alpha1);
  double phi0 = std::fmod(fixed - on_axis, kTwoPi);
  if (phi0 < 0.0)
    phi0 += kTwoPi;
  return phi0;
}

double counting_rate_reduced(const SuperposedState& state, std::size_t kb, double phi_0)
{
  check_b_mode(state, kb);
  if (std::abs(std::abs(state.alpha1) - std::abs(state.alpha2)) > 1e-12)
    throw Error(ErrorCode::UnequalAmplitudes, "reduced counting rate needs |alpha1| = |alpha2|");

  detail::CompensatedSum sum;
  for (std::size_t ka = 0; ka < state.base.grid_a.size(); ++ka)
  {
    const double p = std::norm(state.base.amplitude(ka, kb));
    if (p == 0.0)
      continue;
    sum.add(p * (1.0 + std::cos(state.excess_a[ka] - phi_0)));
  }
  return sum.value();
}

PhaseSweep sweep_phase(const SuperposedState& state, std::size_t kb, std::size_t n_phases)
{
  if (n_phases < 16)
    throw Error(ErrorCode::UsageError, "phase sweep needs at least 16 phases");

  detail::CompensatedSum mean_sum, re_sum, im_sum;
  for (std::size_t j = 0; j < n_phases; ++j)
  {
    const double phi = kTwoPi * static_cast<double>(j) / static_cast<double>(n_phases);
    const double rate = counting_rate_reduced(state, kb, phi);
    mean_sum.add(rate);
    re_sum.add(rate * std::cos(phi));
    im_sum.add(rate * std::sin(phi));
  }
  const double n = static_cast<double>(n_phases);
  const double a0 = mean_sum.value() / n;
  const double c1 = 2.0 / n * std::hypot(re_sum.value(), im_sum.value());

  PhaseSweep out;
  out.mean = a0;
  out.rate_max = a0 + c1;
  out.rate_min = std::max(a0 - c1, 0.0);
  if (!(out.rate_max + out.rate_min > 0.0))
    throw Error(ErrorCode::ZeroRate, "counting rate vanishes for every phase");
  out.visibility = std::clamp((out.rate_max - out.rate_min) / (out.rate_max + out.rate_min), 0.0, 1.0);
  return out;
}

std::size_t nearest_b_mode(const SuperposedState& state, double rho, const ExperimentConfig& cfg)
{
  const auto& theta = state.base.grid_b.theta;
  const double target = rho / cfg.f0;
  const auto it = std::min_element(theta.begin(), theta.end(), [target](double x, double y) {
    return std::abs(x - target) < std::abs(y - target);
  });
  return static_cast<std::size_t>(it - theta.begin());
}

double visibility_scan(const SuperposedState& state, double rho, const ExperimentConfig& cfg,
                       std::size_t n_phases)
{
  return sweep_phase(state, nearest_b_mode(state, rho, cfg), n_phases).visibility;
}

} // namespace twinfringe

namespace twinfringe
{

SuperposedState build_oracle_state(const ExperimentConfig& cfg, std::span<const double> radii,
                                   std::size_t grid_points)
{
  require_valid(cfg);
  if (radii.empty())
    throw Error(ErrorCode::UsageError, "oracle needs at least one radius");
  if (grid_points < 4)
    throw Error(ErrorCode::InvalidGrid, "oracle needs at least 4 a-modes");

  const ModeGrid grid_b = camera_grid(radii, cfg);
  ModeGrid grid_a;
  switch (cfg.model)
  {
    case CorrelationModel::Maximal:
      grid_a = image_grid(grid_b, cfg);
      break;
    case CorrelationModel::Uncorrelated:
      // 3 full cycles of the excess phase; the disk edge stays near 0.03 rad
      // at the reference parameters.
      grid_a = phase_balanced_disk(cfg, grid_points, grid_points % 3 == 0 ? 4 : 3);
      break;
    case CorrelationModel::GaussianPartial:
    {
      const double spread = 6.0 * *cfg.sigma_theta * cfg.lambda_a / *cfg.lambda_p;
      const double reach = cfg.lambda_a / cfg.lambda_b * radii.back() / cfg.f0 + spread;
      grid_a = line_grid(reach, grid_points / 2, 2.0 * std::numbers::pi / cfg.lambda_a);
      break;
    }
  }
  return superpose_sources(build_amplitudes(cfg.model, grid_a, grid_b, cfg), cfg);
}

} // namespace twinfringe
