#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "twinfringe/biphoton_state.hpp"
#include "twinfringe/detection_oracle.hpp"
#include "twinfringe/quadrature.hpp"

using namespace twinfringe;

namespace
{

constexpr double kPi = std::numbers::pi;

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

} // namespace

TEST(Grid, UniformMidpoints)
{
  const ModeGrid g = uniform_grid(0.01, 4, {0.0, kPi}, 1.0);
  ASSERT_EQ(g.size(), 8u);
  EXPECT_DOUBLE_EQ(g.theta[0], 0.00125);
  EXPECT_DOUBLE_EQ(g.theta[3], 0.00875);
  EXPECT_EQ(g.theta_index(5), 1u);
  EXPECT_EQ(g.azimuth_index(5), 1u);
  EXPECT_DOUBLE_EQ(g.azimuth_of(5), kPi);
}

TEST(Grid, InvariantsEnforced)
{
  EXPECT_EQ(code_of([] { uniform_grid(0.2, 4, {0.0}, 1.0); }), ErrorCode::InvalidGrid);
  EXPECT_EQ(code_of([] { uniform_grid(0.01, 1, {0.0}, 1.0); }), ErrorCode::InvalidGrid);
  EXPECT_EQ(code_of([] { uniform_grid(0.01, 4, {1.0, 0.5}, 1.0); }), ErrorCode::InvalidGrid);
  EXPECT_EQ(code_of([] { uniform_grid(0.01, 4, {0.0, 2 * kPi}, 1.0); }), ErrorCode::InvalidGrid);
  EXPECT_EQ(code_of([] { uniform_grid(0.01, 4, {0.0}, 0.0); }), ErrorCode::InvalidGrid);
}

TEST(Grid, ImageOfCameraGrid)
{
  const ExperimentConfig cfg = reference_config();
  const std::vector<double> radii{0.0, 1e-3, 2e-3};
  const ModeGrid b = camera_grid(radii, cfg);
  const ModeGrid a = image_grid(b, cfg);
  EXPECT_DOUBLE_EQ(b.theta[1], 1e-3 / 0.15);
  EXPECT_NEAR(a.theta[2], 1550.0 / 810.0 * 2e-3 / 0.15, 1e-17);
  EXPECT_DOUBLE_EQ(a.azimuth[0], kPi);
  // k_a theta_a = k_b theta_b: transverse momenta are opposite.
  EXPECT_NEAR(a.k_magnitude * a.theta[2], b.k_magnitude * b.theta[2], 1e-9);
}

TEST(Grid, PhaseBalancedDiskCancelsPhase)
{
  const ExperimentConfig cfg = reference_config(CorrelationModel::Uncorrelated);
  const ModeGrid g = phase_balanced_disk(cfg, 512, 3);
  std::complex<double> sum = 0.0;
  for (double t : g.theta)
    sum += std::polar(1.0, excess_phase_a(t, cfg));
  EXPECT_LT(std::abs(sum) / 512.0, 1e-13);

  ExperimentConfig flat = cfg;
  flat.d_a = 0.0;
  EXPECT_EQ(code_of([&] { phase_balanced_disk(flat, 512, 3); }), ErrorCode::ZeroDistance);
  EXPECT_EQ(code_of([&] { phase_balanced_disk(cfg, 4, 8); }), ErrorCode::InvalidGrid);
}

TEST(State, MaximalPairsEachBModeWithItsImage)
{
  const ExperimentConfig cfg = reference_config();
  const std::vector<double> radii{0.0, 5e-4, 1e-3, 2e-3};
  const ModeGrid b = camera_grid(radii, cfg);
  const ModeGrid a = image_grid(b, cfg);
  const TwoPhotonState s = build_amplitudes(CorrelationModel::Maximal, a, b, cfg);

  EXPECT_NEAR(total_probability(s), 1.0, 1e-15);
  double z = 0.0;
  for (double r : radii)
    z += std::exp(-2.0 * std::pow(r / (0.15 * 2.36e-2), 2));
  for (std::size_t kb = 0; kb < b.size(); ++kb)
  {
    EXPECT_NEAR(marginal_b(s, kb), std::exp(-2.0 * std::pow(radii[kb] / (0.15 * 2.36e-2), 2)) / z,
                1e-15);
    EXPECT_NEAR(conditional_probability(s, kb, kb), 1.0, 1e-15);
    EXPECT_NEAR(shell_angle(s, kb, kb, cfg), 0.0, 1e-12);
  }
  // Perfect correlation: I(a;b) = H(b).
  double h = 0.0;
  for (std::size_t kb = 0; kb < b.size(); ++kb)
    h -= marginal_b(s, kb) * std::log2(marginal_b(s, kb));
  EXPECT_NEAR(mutual_information_bits(s), h, 1e-12);
}

TEST(State, MaximalNeedsImageModes)
{
  const ExperimentConfig cfg = reference_config();
  const std::vector<double> radii{1e-3, 2e-3};
  const ModeGrid b = camera_grid(radii, cfg);
  const ModeGrid a = uniform_grid(0.05, 7, {0.0}, 2 * kPi / cfg.lambda_a);
  EXPECT_EQ(code_of([&] { build_amplitudes(CorrelationModel::Maximal, a, b, cfg); }),
            ErrorCode::GridMismatch);
}

TEST(State, UncorrelatedIsAProduct)
{
  const ExperimentConfig cfg = reference_config(CorrelationModel::Uncorrelated);
  const std::vector<double> radii{0.0, 1e-3, 2e-3};
  const ModeGrid b = camera_grid(radii, cfg);
  const ModeGrid a = phase_balanced_disk(cfg, 64, 3);
  const TwoPhotonState s = build_amplitudes(CorrelationModel::Uncorrelated, a, b, cfg);
  EXPECT_NEAR(mutual_information_bits(s), 0.0, 1e-12);
  for (std::size_t kb = 0; kb < b.size(); ++kb)
    EXPECT_NEAR(conditional_probability(s, 5, kb), marginal_a(s, 5), 1e-15);
  EXPECT_NEAR(marginal_a(s, 0), 1.0 / 64.0, 1e-15);
}

TEST(State, PartialConditionalIsShellGaussianPerCell)
{
  const ExperimentConfig cfg = partial_cfg();
  const std::vector<double> radii{0.0, 7e-4, 1.3e-3};
  const SuperposedState ss = build_oracle_state(cfg, radii, 512);
  const TwoPhotonState& s = ss.base;
  const double k0 = 2 * kPi / *cfg.lambda_p;
  const double sigma = *cfg.sigma_theta;
  const double h = s.grid_a.theta[1] - s.grid_a.theta[0];

  for (std::size_t kb = 0; kb < radii.size(); ++kb)
  {
    // Independent weights: quadrature of |t| exp(-2 t^2/sigma^2) over each cell.
    std::vector<double> w(s.grid_a.size());
    double total = 0.0;
    for (std::size_t ka = 0; ka < s.grid_a.size(); ++ka)
    {
      const double side = s.grid_a.azimuth_of(ka) == 0.0 ? 1.0 : -1.0;
      const double centre = side * s.grid_a.theta_of(ka);
      auto shell = [&](double sa) {
        const double t = (s.grid_a.k_magnitude * sa + s.grid_b.k_magnitude * s.grid_b.theta[kb]) / k0;
        return std::abs(t) * std::exp(-2 * t * t / (sigma * sigma));
      };
      w[ka] = special::integrate_radial(shell, centre - h / 2, centre + h / 2, 1e-22).value;
      total += w[ka];
    }
    for (std::size_t ka = 0; ka < s.grid_a.size(); ++ka)
      ASSERT_NEAR(conditional_probability(s, ka, kb), w[ka] / total, 1e-9) << ka << " " << kb;
  }
}

TEST(State, PartialConditionalCentredOnImage)
{
  const ExperimentConfig cfg = partial_cfg(2e-3);
  const std::vector<double> radii{1e-3};
  const SuperposedState ss = build_oracle_state(cfg, radii, 1024);
  const TwoPhotonState& s = ss.base;
  double mean = 0.0;
  for (std::size_t ka = 0; ka < s.grid_a.size(); ++ka)
  {
    const double side = s.grid_a.azimuth_of(ka) == 0.0 ? 1.0 : -1.0;
    mean += conditional_probability(s, ka, 0) * side * s.grid_a.theta_of(ka);
  }
  // The shell weight |theta'| is symmetric about theta' = 0.
  EXPECT_NEAR(mean, -(cfg.lambda_a / cfg.lambda_b) * 1e-3 / cfg.f0, 1e-6);
}

TEST(State, PartialRejectsOffLineModes)
{
  const ExperimentConfig cfg = partial_cfg();
  const ModeGrid b = uniform_grid(0.005, 4, {0.0, kPi / 2}, 2 * kPi / cfg.lambda_b);
  const ModeGrid a = line_grid(0.02, 64, 2 * kPi / cfg.lambda_a);
  EXPECT_EQ(code_of([&] { build_amplitudes(CorrelationModel::GaussianPartial, a, b, cfg); }),
            ErrorCode::GridMismatch);
}

TEST(State, MutualInformationFallsWithSigma)
{
  const ExperimentConfig base = partial_cfg();
  const ModeGrid b = line_grid(0.01, 20, 2 * kPi / base.lambda_b);
  const ModeGrid a = line_grid(0.075, 400, 2 * kPi / base.lambda_a);
  double last = INFINITY;
  for (double sigma : {2e-4, 4e-4, 8e-4, 1.6e-3, 3e-3})
  {
    const double mi = mutual_information_bits(
        build_amplitudes(CorrelationModel::GaussianPartial, a, b, partial_cfg(sigma)));
    EXPECT_LT(mi, last) << sigma;
    last = mi;
  }
}

TEST(State, QueriesCheckIndices)
{
  const ExperimentConfig cfg = reference_config();
  const std::vector<double> radii{0.0, 1e-3};
  const ModeGrid b = camera_grid(radii, cfg);
  const TwoPhotonState s = build_amplitudes(CorrelationModel::Maximal, image_grid(b, cfg), b, cfg);
  EXPECT_EQ(code_of([&] { joint_probability(s, 2, 0); }), ErrorCode::IndexOutOfRange);
  EXPECT_EQ(code_of([&] { marginal_b(s, 9); }), ErrorCode::IndexOutOfRange);
}

TEST(State, ZeroMarginalConditional)
{
  const ExperimentConfig cfg = reference_config();
  const ModeGrid a = uniform_grid(0.01, 2, {0.0}, 1.0);
  const ModeGrid b = uniform_grid(0.01, 2, {0.0}, 1.0);
  const std::vector<double> wa{1.0, 1.0}, wb{1.0, 0.0};
  const TwoPhotonState s = product_state(a, wa, b, wb);
  EXPECT_EQ(code_of([&] { conditional_probability(s, 0, 1); }), ErrorCode::ZeroMarginal);
}

TEST(State, SuperpositionNeedsNormalizedBase)
{
  const ExperimentConfig cfg = reference_config();
  const std::vector<double> radii{0.0, 1e-3};
  const ModeGrid b = camera_grid(radii, cfg);
  TwoPhotonState s = build_amplitudes(CorrelationModel::Maximal, image_grid(b, cfg), b, cfg);
  s.amplitudes[0] *= 2.0;
  EXPECT_EQ(code_of([&] { superpose_sources(s, cfg); }), ErrorCode::ValidationError);
}

TEST(State, GaussianAMarginalLeavesResidualModulation)
{
  // A Gaussian P(k_a) only partly averages phi_a: the phi_0 modulation is
  // |int e^{-2t^2/s^2} e^{i kappa t^2} t dt| / int e^{-2t^2/s^2} t dt
  //   = 1 / sqrt(1 + (kappa s^2 / 2)^2).
  const ExperimentConfig cfg = reference_config(CorrelationModel::Uncorrelated);
  const double sigma_a = cfg.lambda_a / cfg.lambda_b * cfg.sigma_b;
  const double kappa = kPi * cfg.d_a / cfg.lambda_a;
  const ModeGrid a = phase_balanced_disk(cfg, 8192, 37);
  std::vector<double> wa(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    wa[i] = std::exp(-2 * std::pow(a.theta[i] / sigma_a, 2));
  const std::vector<double> radii{0.0};
  const ModeGrid b = camera_grid(radii, cfg);
  const std::vector<double> wb{1.0};
  const SuperposedState s = superpose_sources(product_state(a, wa, b, wb), cfg);

  const double want = 1.0 / std::sqrt(1.0 + std::pow(kappa * sigma_a * sigma_a / 2, 2));
  const double got = sweep_phase(s, 0).visibility;
  EXPECT_NEAR(got, want, 0.02 * want);
  EXPECT_GT(got, 0.03);
}
