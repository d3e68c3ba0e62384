#include "twinfringe/fringe_analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "compensated_sum.hpp"
#include "twinfringe/special_functions.hpp"

namespace twinfringe
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_partial(const ExperimentConfig& cfg, const char* what)
{
  if (cfg.model != CorrelationModel::GaussianPartial)
  {
    std::ostringstream msg;
    msg << what << " needs the gaussian_partial model, got " << to_string(cfg.model);
    throw Error(ErrorCode::UsageError, msg.str());
  }
  require_valid(cfg);
}

} // namespace

double envelope(double rho, const ExperimentConfig& cfg)
{
  const double t = rho / (cfg.f0 * cfg.sigma_b);
  return std::exp(-2.0 * t * t);
}

double counting_rate_maxcorr(double rho, double phi_0, const ExperimentConfig& cfg)
{
  const double A = derive_constants(cfg).A;
  return envelope(rho, cfg) * (1.0 + std::cos(A * rho * rho - phi_0));
}

double fringe_radius(int N, const ExperimentConfig& cfg)
{
  if (N < 0)
    throw Error(ErrorCode::UsageError, "ring order must be >= 0");
  if (!(cfg.d_a > 0.0))
    throw Error(ErrorCode::ZeroDistance, "d_a = 0 gives no rings");
  const double lambda_eq = cfg.lambda_b * cfg.lambda_b / cfg.lambda_a;
  return std::sqrt(2.0 * N * lambda_eq * cfg.f0 * cfg.f0 / (cfg.n_a * cfg.d_a));
}

double counting_rate_uncorrelated(double rho, const ExperimentConfig& cfg)
{
  return envelope(rho, cfg);
}

double counting_rate_partial_quadrature(double rho, double phi_0, const ExperimentConfig& cfg,
                                        special::QuadratureResult* info)
{
  require_partial(cfg, "shell quadrature");
  const FringeConstants fc = derive_constants(cfg);
  const double b_sigma = fc.B * *cfg.sigma_theta;
  const double A = fc.A;

  auto integrand = [=](double u) {
    const double minus = b_sigma * u - rho;
    const double plus = b_sigma * u + rho;
    return u * std::exp(-2.0 * u * u) *
           (2.0 + std::cos(A * minus * minus - phi_0) + std::cos(A * plus * plus - phi_0));
  };
  const special::QuadratureResult r = special::integrate_radial(integrand, 0.0, 6.0, 1e-10);
  if (info)
    *info = r;
  return 2.0 * envelope(rho, cfg) * r.value;
}

PhaseSweep quadrature_sweep(double rho, const ExperimentConfig& cfg, std::size_t n_phases)
{
  if (n_phases < 16)
    throw Error(ErrorCode::UsageError, "phase sweep needs at least 16 phases");
  detail::CompensatedSum mean_sum, re_sum, im_sum;
  for (std::size_t j = 0; j < n_phases; ++j)
  {
    const double phi = kTwoPi * static_cast<double>(j) / static_cast<double>(n_phases);
    const double rate = counting_rate_partial_quadrature(rho, phi, cfg);
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
    throw Error(ErrorCode::ZeroRate, "quadrature rate vanishes for every phase");
  out.visibility = std::clamp((out.rate_max - out.rate_min) / (out.rate_max + out.rate_min), 0.0, 1.0);
  return out;
}

double visibility_closed_form(double rho, const ExperimentConfig& cfg)
{
  require_partial(cfg, "closed-form visibility");
  const FringeConstants fc = derive_constants(cfg);
  // exp(-sigma^2 rho^2/chi^2) |D-2(z) + D-2(-z)| = |exp(z^2/4) (D-2(z) + D-2(-z))|
  // because |exp(-z^2/4)| = exp(sigma^2 rho^2/chi^2) for z = rho g.
  const special::Complex z = std::abs(rho) * fc.g;
  const double v = std::abs(special::dm2_even_scaled(z)) / fc.gamma;
  return std::clamp(v, 0.0, 1.0);
}

double central_visibility(const ExperimentConfig& cfg)
{
  require_partial(cfg, "central visibility");
  return 2.0 / derive_constants(cfg).gamma;
}

double visibility_hwhm(const ExperimentConfig& cfg)
{
  const double v0 = central_visibility(cfg);
  if (!(v0 > 0.0))
    throw Error(ErrorCode::NoHalfPoint, "central visibility is zero");
  const double half = 0.5 * v0;
  const double window = 10.0 * cfg.f0 * cfg.sigma_b;
  constexpr int steps = 4000;

  double lo = 0.0;
  double hi = -1.0;
  for (int i = 1; i <= steps; ++i)
  {
    const double r = window * i / steps;
    if (visibility_closed_form(r, cfg) < half)
    {
      hi = r;
      break;
    }
    lo = r;
  }
  if (hi < 0.0)
  {
    std::ostringstream msg;
    msg << "visibility stays above V(0)/2 = " << half << " out to " << window << " m";
    throw Error(ErrorCode::NoHalfPoint, msg.str());
  }

  // Bisect until the bracket cannot shrink any further.
  for (;;)
  {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
      break;
    if (visibility_closed_form(mid, cfg) < half)
      hi = mid;
    else
      lo = mid;
  }
  const double dlo = std::abs(visibility_closed_form(lo, cfg) - half);
  const double dhi = std::abs(visibility_closed_form(hi, cfg) - half);
  return dlo <= dhi ? lo : hi;
}

double model_rate(double rho, double phi_0, const ExperimentConfig& cfg)
{
  switch (cfg.model)
  {
    case CorrelationModel::Maximal:
      return counting_rate_maxcorr(rho, phi_0, cfg);
    case CorrelationModel::Uncorrelated:
      return counting_rate_uncorrelated(rho, cfg);
    case CorrelationModel::GaussianPartial:
      return counting_rate_partial_quadrature(rho, phi_0, cfg);
  }
  throw Error(ErrorCode::UsageError, "unknown correlation model");
}

double model_visibility(double rho, const ExperimentConfig& cfg)
{
  switch (cfg.model)
  {
    case CorrelationModel::Maximal:
      return envelope(rho, cfg) > 0.0 ? 1.0 : 0.0;
    case CorrelationModel::Uncorrelated:
      return 0.0;
    case CorrelationModel::GaussianPartial:
      return visibility_closed_form(rho, cfg);
  }
  throw Error(ErrorCode::UsageError, "unknown correlation model");
}

RadialProfile radial_profile(const ExperimentConfig& cfg, double rho_max, std::size_t n_samples,
                             double phi_0)
{
  require_valid(cfg);
  if (n_samples < 2 || !(rho_max > 0.0))
    throw Error(ErrorCode::UsageError, "radial profile needs rho_max > 0 and >= 2 samples");
  RadialProfile out;
  out.samples.resize(n_samples);
  const double step = rho_max / static_cast<double>(n_samples - 1);
  for (std::size_t i = 0; i < n_samples; ++i)
  {
    const double rho = step * static_cast<double>(i);
    out.samples[i] = {rho, model_rate(rho, phi_0, cfg), model_visibility(rho, cfg)};
  }
  return out;
}

FringeImage render_from_profile(const RadialProfile& profile, double screen_size,
                                std::size_t resolution)
{
  const auto& s = profile.samples;
  if (s.size() < 2)
    throw Error(ErrorCode::UsageError, "profile needs at least 2 samples");
  if (resolution == 0 || !(screen_size > 0.0))
    throw Error(ErrorCode::UsageError, "screen size and resolution must be positive");
  const double pitch = screen_size / static_cast<double>(resolution);
  const double corner = std::numbers::sqrt2 * 0.5 * screen_size;
  if (s.back().rho < corner * (1.0 - 1e-12))
    throw Error(ErrorCode::UsageError, "profile does not reach the screen corner");

  FringeImage img;
  img.width = img.height = resolution;
  img.pixel_pitch = pitch;
  img.values.resize(resolution * resolution);
  const double half = 0.5 * static_cast<double>(resolution);

  auto lookup = [&s](double rho) {
    const auto it = std::upper_bound(s.begin(), s.end(), rho,
                                     [](double r, const ProfileSample& p) { return r < p.rho; });
    if (it == s.begin())
      return s.front().rate;
    if (it == s.end())
      return s.back().rate;
    const ProfileSample& a = *(it - 1);
    const ProfileSample& b = *it;
    const double t = (rho - a.rho) / (b.rho - a.rho);
    return a.rate + t * (b.rate - a.rate);
  };

  for (std::size_t row = 0; row < resolution; ++row)
  {
    const double y = (half - static_cast<double>(row) - 0.5) * pitch;
    for (std::size_t col = 0; col < resolution; ++col)
    {
      const double x = (static_cast<double>(col) + 0.5 - half) * pitch;
      const double v = std::max(lookup(std::hypot(x, y)), 0.0);
      img.values[row * resolution + col] = v;
      img.normalization = std::max(img.normalization, v);
    }
  }
  return img;
}

FringeImage render_pattern(const ExperimentConfig& cfg, double screen_size,
                           std::size_t resolution, double phi_0, RadialProfile* profile_out)
{
  if (resolution < 64)
    throw Error(ErrorCode::UsageError, "resolution must be >= 64");
  if (!(screen_size > 0.0))
    throw Error(ErrorCode::UsageError, "screen size must be positive");
  const double step = screen_size / static_cast<double>(resolution) / 4.0;
  const double corner = std::numbers::sqrt2 * 0.5 * screen_size;
  const auto n = static_cast<std::size_t>(std::ceil(corner / step)) + 2;
  RadialProfile profile = radial_profile(cfg, step * static_cast<double>(n - 1), n, phi_0);
  FringeImage img = render_from_profile(profile, screen_size, resolution);
  if (profile_out)
    *profile_out = std::move(profile);
  return img;
}

} // namespace twinfringe
