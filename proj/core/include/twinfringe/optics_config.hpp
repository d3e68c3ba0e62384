#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twinfringe/errors.hpp"

namespace twinfringe
{

enum class CorrelationModel
{
  Maximal,
  Uncorrelated,
  GaussianPartial,
};

std::string_view to_string(CorrelationModel model) noexcept;
std::optional<CorrelationModel> parse_model(std::string_view name) noexcept;

/// Physical parameters of the two-source setup. Lengths in meters, angles in
/// radians.
struct ExperimentConfig
{
  double lambda_a = 0.0;               ///< mean wavelength of the undetected photon a
  double lambda_b = 0.0;               ///< mean wavelength of the detected photon b
  std::optional<double> lambda_p;      ///< pump wavelength; fixes k0' = 2 pi / lambda_p
  double d_a = 0.0;                    ///< effective a-path length between the sources
  double f0 = 0.0;                     ///< focal length of the camera lens
  double n_a = 1.0;                    ///< refractive index between the sources
  double sigma_b = 0.0;                ///< angular width of P(k_b) = exp(-2 theta_b^2 / sigma_b^2)
  std::optional<double> sigma_theta;   ///< width of the conditional shell Gaussian
  double alpha1_mag = 0.70710678118654752440;
  double alpha2_mag = 0.70710678118654752440;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double phi_b = 0.0;                  ///< b-path phase difference phi_b2 - phi_b1
  CorrelationModel model = CorrelationModel::Maximal;

  std::complex<double> alpha1() const { return std::polar(alpha1_mag, phi1); }
  std::complex<double> alpha2() const { return std::polar(alpha2_mag, phi2); }
};

struct ConfigViolation
{
  ErrorCode code;
  std::string field;
  std::string message;
};

struct ValidationReport
{
  std::vector<ConfigViolation> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

/// Checks every invariant and reports all violations, not only the first.
/// Paraxial concerns (sigma_b >= 0.1) are warnings.
ValidationReport validate_config(const ExperimentConfig& raw);

/// Returns `raw` unchanged when valid, otherwise throws ValidationError whose
/// message lists every violation.
const ExperimentConfig& require_valid(const ExperimentConfig& raw);

/// Quantities derived from a configuration.
///
/// `A` and `lambda_eq` are always defined. The shell constants (`B`,
/// `k0_prime`, `gamma`, `chi`, `g`) need the pump wavelength and are NaN when
/// it is absent; an absent sigma_theta is treated as zero.
struct FringeConstants
{
  double A = 0.0;          ///< pi n d_a lambda_a / (f0 lambda_b)^2      [1/m^2]
  double B = 0.0;          ///< f0 lambda_b / lambda_p                   [m]
  double gamma = 0.0;      ///< sqrt(4 + sigma^4 A^2 B^4)
  double chi = 0.0;        ///< gamma / (A B)                            [m]
  std::complex<double> g;  ///< i sqrt2 A B sigma / sqrt(2 - i sigma^2 A B^2)  [1/m]
  double lambda_eq = 0.0;  ///< lambda_b^2 / lambda_a                    [m]
  double k0_prime = 0.0;   ///< 2 pi / lambda_p                          [1/m]

  bool has_shell() const;
};

FringeConstants derive_constants(const ExperimentConfig& cfg);

/// Parameters used for the maximal-correlation figures: 1550/810/532 nm,
/// d_a = 11.7 mm, f0 = 150 mm, sigma_b = 2.36e-2.
ExperimentConfig reference_config(CorrelationModel model = CorrelationModel::Maximal);

} // namespace twinfringe
