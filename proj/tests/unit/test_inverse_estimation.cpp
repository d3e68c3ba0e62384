#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "twinfringe/detection_oracle.hpp"
#include "twinfringe/fringe_analytics.hpp"
#include "twinfringe/inverse_estimation.hpp"

using namespace twinfringe;

namespace
{

ExperimentConfig partial_cfg(double sigma = 9.37e-4)
{
  ExperimentConfig cfg = reference_config(CorrelationModel::GaussianPartial);
  cfg.sigma_theta = sigma;
  return cfg;
}

ErrorCode code_of(auto&& fn)
{
  try
  {
    fn();
  }
  catch (const Error& e)
  {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::UsageError;
}

std::vector<FringeObservation> forward_rings(const ExperimentConfig& cfg,
                                             const std::vector<double>& distances)
{
  std::vector<FringeObservation> obs;
  for (double d : distances)
  {
    ExperimentConfig c = cfg;
    c.d_a = d;
    obs.push_back({d, {{1, fringe_radius(1, c)}, {2, fringe_radius(2, c)}}, std::nullopt, std::nullopt});
  }
  return obs;
}

} // namespace

TEST(SigmaFromVisibility, ReferenceValue)
{
  const ExperimentConfig cfg = partial_cfg();
  EXPECT_NEAR(estimate_sigma_theta(0.99612, cfg), 9.37e-4, 2e-6);
  const double v0 = central_visibility(cfg);
  EXPECT_NEAR(estimate_sigma_theta(v0, cfg) / 9.37e-4, 1.0, 1e-10);
}

TEST(SigmaFromVisibility, RoundTripWithinOneUlpOfV0)
{
  const ExperimentConfig cfg = partial_cfg();
  for (int i = 0; i < 50; ++i)
  {
    const double sigma = std::pow(10.0, -5.0 + 3.0 * i / 49.0);
    const double v0 = central_visibility(partial_cfg(sigma));
    const double back = estimate_sigma_theta(v0, cfg);
    // sigmas that map to the neighbouring doubles of v0
    const double lo = estimate_sigma_theta(std::nextafter(v0, 2.0), cfg);
    const double hi = estimate_sigma_theta(std::nextafter(v0, 0.0), cfg);
    EXPECT_LE(std::abs(back - sigma), (hi - lo) + 1e-14 * sigma) << sigma;
  }
}

TEST(SigmaFromVisibility, RoundTripAboveOneEMinusFour)
{
  const ExperimentConfig cfg = partial_cfg();
  for (int i = 0; i < 50; ++i)
  {
    const double sigma = std::pow(10.0, -4.0 + 2.0 * i / 49.0);
    const double back = estimate_sigma_theta(central_visibility(partial_cfg(sigma)), cfg);
    EXPECT_NEAR(back / sigma, 1.0, 1e-10) << sigma;
  }
}

TEST(SigmaFromVisibility, ScanInverterAgrees)
{
  const ExperimentConfig cfg = partial_cfg();
  for (double sigma : {1e-4, 5e-4, 9.37e-4, 2e-3, 8e-3})
  {
    const double v0 = central_visibility(partial_cfg(sigma));
    // bisection on V(0) loses digits as V(0) -> 1
    EXPECT_NEAR(estimate_sigma_theta_scan(v0, cfg) / estimate_sigma_theta(v0, cfg), 1.0, 1e-6) << sigma;
  }
}

TEST(SigmaFromVisibility, StrictlyDecreasingInV0)
{
  const ExperimentConfig cfg = partial_cfg();
  double last = INFINITY;
  for (int i = 1; i < 100; ++i)
  {
    const double s = estimate_sigma_theta(i / 100.0, cfg);
    EXPECT_LT(s, last);
    last = s;
  }
}

TEST(SigmaFromVisibility, EdgeCases)
{
  const ExperimentConfig cfg = partial_cfg();
  EXPECT_EQ(estimate_sigma_theta(1.0, cfg), 0.0);
  EXPECT_EQ(code_of([&] { estimate_sigma_theta(0.0, cfg); }), ErrorCode::DegenerateVisibility);
  EXPECT_EQ(code_of([&] { estimate_sigma_theta(1.2, cfg); }), ErrorCode::DegenerateVisibility);
  ExperimentConfig no_pump = cfg;
  no_pump.lambda_p.reset();
  EXPECT_EQ(code_of([&] { estimate_sigma_theta(0.9, no_pump); }), ErrorCode::MissingPumpWavelength);
  ExperimentConfig flat = cfg;
  flat.d_a = 0.0;
  EXPECT_EQ(code_of([&] { estimate_sigma_theta(0.9, flat); }), ErrorCode::ZeroDistance);
}

TEST(SigmaFromHalfWidth, RecoversGeneratingSigma)
{
  const ExperimentConfig truth = partial_cfg(1.06e-3);
  const double r0 = visibility_hwhm(truth);
  EXPECT_NEAR(estimate_sigma_theta_from_hwhm(r0, partial_cfg(), 5e-4, 2.5e-3) / 1.06e-3, 1.0, 1e-8);
}

TEST(EquivalentWavelength, NoiselessFit)
{
  const ExperimentConfig cfg = reference_config();
  const auto obs = forward_rings(cfg, {5e-3, 10e-3, 15e-3, 20e-3});
  const WavelengthFit fit = estimate_equivalent_wavelength(obs, cfg);
  const double want = cfg.lambda_b * cfg.lambda_b / cfg.lambda_a;
  EXPECT_NEAR(fit.lambda_eq / want, 1.0, 1e-12);
  EXPECT_NEAR(fit.lambda_eq * 1e9, 423.3, 0.01);
  EXPECT_LT(fit.std_error, 1e-6 * want);
  EXPECT_EQ(fit.points, 4u);
}

TEST(EquivalentWavelength, NoisyRadiiStayWithinReportedSpread)
{
  const ExperimentConfig cfg = reference_config();
  const double want = cfg.lambda_b * cfg.lambda_b / cfg.lambda_a;
  std::mt19937_64 rng(2024);
  // equal-variance noise on rho^2, as the fit's error model assumes
  const double rho_sq_mid = std::pow(forward_rings(cfg, {10e-3})[0].ring_radii[0].second, 2);
  std::normal_distribution<double> noise(0.0, 0.02 * rho_sq_mid);
  double sum = 0;
  int covered = 0;
  constexpr int trials = 400;
  for (int t = 0; t < trials; ++t)
  {
    auto obs = forward_rings(cfg, {5e-3, 10e-3, 15e-3, 20e-3});
    for (auto& o : obs)
    {
      double& rho = o.ring_radii[0].second;
      rho = std::sqrt(rho * rho + noise(rng));
    }
    const WavelengthFit fit = estimate_equivalent_wavelength(obs, cfg);
    sum += fit.lambda_eq;
    // 95% t-interval with 3 degrees of freedom
    if (std::abs(fit.lambda_eq - want) <= 3.182 * fit.std_error)
      ++covered;
  }
  EXPECT_NEAR(sum / trials, want, 7e-9);
  EXPECT_GT(covered, 0.9 * trials);
  EXPECT_LE(covered, trials);
}

TEST(EquivalentWavelength, NeedsThreeDistinctDistances)
{
  const ExperimentConfig cfg = reference_config();
  auto obs = forward_rings(cfg, {5e-3, 10e-3});
  EXPECT_EQ(code_of([&] { estimate_equivalent_wavelength(obs, cfg); }), ErrorCode::InsufficientData);
  auto dup = forward_rings(cfg, {5e-3, 10e-3, 10e-3});
  EXPECT_EQ(code_of([&] { estimate_equivalent_wavelength(dup, cfg); }), ErrorCode::InsufficientData);
  auto no_first = forward_rings(cfg, {5e-3, 10e-3, 15e-3});
  no_first[0].ring_radii.erase(no_first[0].ring_radii.begin());
  EXPECT_EQ(code_of([&] { estimate_equivalent_wavelength(no_first, cfg); }), ErrorCode::InsufficientData);
}

TEST(EquivalentWavelength, InferUndetectedWavelength)
{
  EXPECT_NEAR(infer_lambda_a(423.3e-9, 810e-9) * 1e9, 1550.0, 0.1);
  EXPECT_DOUBLE_EQ(infer_lambda_a(810e-9, 810e-9), 810e-9);
  const double la = 1550e-9, lb = 810e-9;
  EXPECT_NEAR(infer_lambda_a(lb * lb / la, lb), la, 1e-24);
  EXPECT_EQ(code_of([] { infer_lambda_a(0.0, 810e-9); }), ErrorCode::NonPositiveParameter);
}

TEST(PumpWaist, InverseProportionality)
{
  EXPECT_NEAR(pump_waist_to_sigma(274.9e-6, 532e-9), 6.16e-4, 1e-7);
  EXPECT_NEAR(pump_waist_to_sigma(137.45e-6, 532e-9) / pump_waist_to_sigma(274.9e-6, 532e-9), 2.0, 1e-14);
  EXPECT_EQ(pump_waist_to_sigma(INFINITY, 532e-9), 0.0);
  EXPECT_THROW(pump_waist_to_sigma(-1.0, 532e-9), Error);
}

TEST(Reconstruction, RoundTripThroughVisibility)
{
  const ExperimentConfig truth = partial_cfg(1.06e-3);
  const std::vector<double> radii{0.0, 0.6e-3, 1.2e-3};
  const SuperposedState generated = build_oracle_state(truth, radii, 512);

  const double sigma = estimate_sigma_theta(central_visibility(truth), truth);
  const TwoPhotonState rebuilt = reconstruct_joint_probability(
      sigma, truth.sigma_b, generated.base.grid_a, generated.base.grid_b, truth);
  for (std::size_t kb = 0; kb < radii.size(); ++kb)
    for (std::size_t ka = 0; ka < rebuilt.grid_a.size(); ++ka)
      ASSERT_NEAR(conditional_probability(rebuilt, ka, kb),
                  conditional_probability(generated.base, ka, kb), 1e-6);
}

TEST(Reconstruction, ZeroSigmaGivesMaximalTable)
{
  const ExperimentConfig cfg = reference_config();
  const std::vector<double> radii{0.0, 1e-3};
  const ModeGrid b = camera_grid(radii, cfg);
  const ModeGrid a = image_grid(b, cfg);
  const TwoPhotonState rebuilt = reconstruct_joint_probability(0.0, cfg.sigma_b, a, b, cfg);
  const TwoPhotonState direct = build_amplitudes(CorrelationModel::Maximal, a, b, cfg);
  EXPECT_EQ(rebuilt.amplitudes, direct.amplitudes);
}

TEST(Reconstruction, InformationFallsAsSigmaGrows)
{
  const ExperimentConfig cfg = partial_cfg();
  const ModeGrid b = line_grid(0.01, 20, 2 * std::numbers::pi / cfg.lambda_b);
  const ModeGrid a = line_grid(0.075, 400, 2 * std::numbers::pi / cfg.lambda_a);
  double last = INFINITY;
  for (double v0 : {0.9999, 0.999, 0.99, 0.95, 0.8})
  {
    const double sigma = estimate_sigma_theta(v0, cfg);
    const double mi = mutual_information_bits(reconstruct_joint_probability(sigma, cfg.sigma_b, a, b, cfg));
    EXPECT_LT(mi, last) << v0;
    last = mi;
  }
}
