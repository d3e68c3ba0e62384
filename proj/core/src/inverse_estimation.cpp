#include "twinfringe/inverse_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "twinfringe/fringe_analytics.hpp"

namespace twinfringe
{

double estimate_sigma_theta(double v0, const ExperimentConfig& cfg)
{
  if (!(v0 > 0.0 && v0 <= 1.0))
  {
    std::ostringstream msg;
    msg << "central visibility " << v0 << " outside (0, 1]";
    throw Error(ErrorCode::DegenerateVisibility, msg.str());
  }
  if (!cfg.lambda_p)
    throw Error(ErrorCode::MissingPumpWavelength, "inversion needs lambda_p");
  if (!(cfg.d_a > 0.0))
    throw Error(ErrorCode::ZeroDistance, "inversion needs d_a > 0");
  if (v0 == 1.0)
    return 0.0;
  const double k0 = 2.0 * std::numbers::pi / *cfg.lambda_p;
  const double root = std::sqrt((1.0 / v0 - 1.0) * (1.0 / v0 + 1.0));
  return std::sqrt(8.0 * std::numbers::pi * root / (k0 * k0 * cfg.lambda_a * cfg.n_a * cfg.d_a));
}

double estimate_sigma_theta_scan(double v0, const ExperimentConfig& cfg)
{
  if (!(v0 > 0.0 && v0 < 1.0))
    throw Error(ErrorCode::DegenerateVisibility, "scan inverter needs v0 in (0, 1)");
  ExperimentConfig probe = cfg;
  probe.model = CorrelationModel::GaussianPartial;
  auto v_at = [&probe](double log_sigma) {
    probe.sigma_theta = std::exp(log_sigma);
    return central_visibility(probe);
  };
  double lo = std::log(1e-9);
  double hi = 0.0;
  if (v_at(lo) < v0 || v_at(hi) > v0)
    throw Error(ErrorCode::DegenerateVisibility, "v0 outside the scan range sigma in [1e-9, 1]");
  for (;;)
  {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
      break;
    if (v_at(mid) > v0)
      lo = mid;
    else
      hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

double estimate_sigma_theta_from_hwhm(double r0, const ExperimentConfig& cfg, double sigma_lo,
                                      double sigma_hi)
{
  if (!(r0 > 0.0) || !(sigma_lo > 0.0) || !(sigma_hi > sigma_lo))
    throw Error(ErrorCode::UsageError, "need r0 > 0 and 0 < sigma_lo < sigma_hi");
  ExperimentConfig probe = cfg;
  probe.model = CorrelationModel::GaussianPartial;
  auto r_at = [&probe](double sigma) {
    probe.sigma_theta = sigma;
    return visibility_hwhm(probe);
  };
  double lo = sigma_lo;
  double hi = sigma_hi;
  if (r_at(lo) < r0 || r_at(hi) > r0)
    throw Error(ErrorCode::NoHalfPoint, "r0 is not bracketed by the sigma range");
  // r0(sigma) is monotone; 60 halvings of the log bracket is ample.
  for (int i = 0; i < 60; ++i)
  {
    const double mid = std::sqrt(lo * hi);
    if (r_at(mid) > r0)
      lo = mid;
    else
      hi = mid;
  }
  return std::sqrt(lo * hi);
}

WavelengthFit estimate_equivalent_wavelength(std::span<const FringeObservation> observations,
                                             const ExperimentConfig& cfg)
{
  std::vector<double> xs, ys;
  std::set<double> distances;
  for (const FringeObservation& obs : observations)
  {
    if (!(obs.d_a > 0.0))
      continue;
    const auto ring = std::find_if(obs.ring_radii.begin(), obs.ring_radii.end(),
                                   [](const auto& r) { return r.first == 1; });
    if (ring == obs.ring_radii.end() || !(ring->second > 0.0))
      continue;
    xs.push_back(2.0 * cfg.f0 * cfg.f0 / (cfg.n_a * obs.d_a));
    ys.push_back(ring->second * ring->second);
    distances.insert(obs.d_a);
  }
  if (distances.size() < 3)
  {
    std::ostringstream msg;
    msg << "need >= 3 distinct d_a with an N = 1 ring, got " << distances.size();
    throw Error(ErrorCode::InsufficientData, msg.str());
  }

  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
  {
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = sxy / sxx;
  if (!(slope > 0.0))
    throw Error(ErrorCode::NegativeSlope, "fitted rho_1^2 slope is not positive");

  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
  {
    const double r = ys[i] - slope * xs[i];
    rss += r * r;
  }
  WavelengthFit fit;
  fit.lambda_eq = slope;
  fit.points = xs.size();
  fit.std_error = std::sqrt(rss / static_cast<double>(xs.size() - 1) / sxx);
  return fit;
}

double infer_lambda_a(double lambda_eq, double lambda_b)
{
  if (!(lambda_eq > 0.0) || !(lambda_b > 0.0))
    throw Error(ErrorCode::NonPositiveParameter, "wavelengths must be positive");
  return lambda_b * lambda_b / lambda_eq;
}

TwoPhotonState reconstruct_joint_probability(double sigma_theta, double sigma_b,
                                             const ModeGrid& grid_a, const ModeGrid& grid_b,
                                             const ExperimentConfig& cfg)
{
  if (!(sigma_theta >= 0.0) || !(sigma_b > 0.0))
    throw Error(ErrorCode::NonPositiveParameter, "widths must be positive");
  ExperimentConfig rc = cfg;
  rc.sigma_b = sigma_b;
  if (sigma_theta == 0.0)
  {
    rc.model = CorrelationModel::Maximal;
    rc.sigma_theta.reset();
  }
  else
  {
    rc.model = CorrelationModel::GaussianPartial;
    rc.sigma_theta = sigma_theta;
  }
  return build_amplitudes(rc.model, grid_a, grid_b, rc);
}

double pump_waist_to_sigma(double w_p, double lambda_p)
{
  if (!(w_p > 0.0) || !(lambda_p > 0.0))
    throw Error(ErrorCode::NonPositiveParameter, "pump waist and wavelength must be positive");
  return lambda_p / (std::numbers::pi * w_p);
}

} // namespace twinfringe
