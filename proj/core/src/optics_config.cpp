#include "twinfringe/optics_config.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace twinfringe
{

std::string_view to_string(ErrorCode code) noexcept
{
  switch (code)
  {
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::AmplitudeNotNormalized: return "AmplitudeNotNormalized";
    case ErrorCode::MissingSigmaTheta: return "MissingSigmaTheta";
    case ErrorCode::MissingPumpWavelength: return "MissingPumpWavelength";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::ToleranceNotReached: return "ToleranceNotReached";
    case ErrorCode::ToleranceExceeded: return "ToleranceExceeded";
    case ErrorCode::ZeroRate: return "ZeroRate";
    case ErrorCode::NoHalfPoint: return "NoHalfPoint";
    case ErrorCode::ZeroDistance: return "ZeroDistance";
    case ErrorCode::DegenerateVisibility: return "DegenerateVisibility";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NegativeSlope: return "NegativeSlope";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ZeroMarginal: return "ZeroMarginal";
    case ErrorCode::UnequalAmplitudes: return "UnequalAmplitudes";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

int exit_status(ErrorCode code) noexcept
{
  switch (code)
  {
    case ErrorCode::IoError:
      return 3;
    case ErrorCode::Overflow:
    case ErrorCode::ToleranceNotReached:
    case ErrorCode::ToleranceExceeded:
    case ErrorCode::ZeroRate:
    case ErrorCode::NoHalfPoint:
      return 2;
    default:
      return 1;
  }
}

std::string_view to_string(CorrelationModel model) noexcept
{
  switch (model)
  {
    case CorrelationModel::Maximal: return "maximal";
    case CorrelationModel::Uncorrelated: return "uncorrelated";
    case CorrelationModel::GaussianPartial: return "gaussian_partial";
  }
  return "unknown";
}

std::optional<CorrelationModel> parse_model(std::string_view name) noexcept
{
  if (name == "maximal")
    return CorrelationModel::Maximal;
  if (name == "uncorrelated")
    return CorrelationModel::Uncorrelated;
  if (name == "gaussian_partial")
    return CorrelationModel::GaussianPartial;
  return std::nullopt;
}

std::string ValidationReport::summary() const
{
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i)
  {
    if (i)
      out << "; ";
    out << to_string(violations[i].code) << " (" << violations[i].field << "): "
        << violations[i].message;
  }
  return out.str();
}

namespace
{

void require_positive(ValidationReport& report, std::string_view field, double value)
{
  if (!(value > 0.0) || !std::isfinite(value))
  {
    std::ostringstream msg;
    msg << "must be finite and > 0, got " << value;
    report.violations.push_back({ErrorCode::NonPositiveParameter, std::string(field), msg.str()});
  }
}

} // namespace

ValidationReport validate_config(const ExperimentConfig& raw)
{
  ValidationReport report;

  require_positive(report, "lambda_a", raw.lambda_a);
  require_positive(report, "lambda_b", raw.lambda_b);
  if (raw.lambda_p)
    require_positive(report, "lambda_p", *raw.lambda_p);
  require_positive(report, "f0", raw.f0);
  require_positive(report, "sigma_b", raw.sigma_b);

  // d_a = 0 is the balanced imaging case and is allowed.
  if (!(raw.d_a >= 0.0) || !std::isfinite(raw.d_a))
    report.violations.push_back({ErrorCode::NonPositiveParameter, "d_a",
                                 "must be finite and >= 0"});
  if (!(raw.n_a >= 1.0) || !std::isfinite(raw.n_a))
    report.violations.push_back({ErrorCode::NonPositiveParameter, "n_a",
                                 "refractive index must be >= 1"});

  if (!(raw.alpha1_mag >= 0.0) || !(raw.alpha2_mag >= 0.0))
    report.violations.push_back({ErrorCode::NonPositiveParameter, "alpha_mag",
                                 "source amplitudes must be >= 0"});
  const double norm = raw.alpha1_mag * raw.alpha1_mag + raw.alpha2_mag * raw.alpha2_mag;
  if (!(std::abs(norm - 1.0) <= 1e-12))
  {
    std::ostringstream msg;
    msg.precision(17);
    msg << "|alpha1|^2 + |alpha2|^2 = " << norm << ", expected 1";
    report.violations.push_back({ErrorCode::AmplitudeNotNormalized, "alpha1_mag/alpha2_mag",
                                 msg.str()});
  }

  for (auto [name, value] : {std::pair{"phi1", raw.phi1}, std::pair{"phi2", raw.phi2},
                             std::pair{"phi_b", raw.phi_b}})
  {
    if (!std::isfinite(value))
      report.violations.push_back({ErrorCode::NonPositiveParameter, name, "phase must be finite"});
  }

  if (raw.model == CorrelationModel::GaussianPartial)
  {
    if (!raw.sigma_theta)
      report.violations.push_back({ErrorCode::MissingSigmaTheta, "sigma_theta",
                                   "required by the gaussian_partial model"});
    else
      require_positive(report, "sigma_theta", *raw.sigma_theta);
    if (!raw.lambda_p)
      report.violations.push_back({ErrorCode::MissingPumpWavelength, "lambda_p",
                                   "k0' cannot be derived without the pump wavelength"});
  }
  else if (raw.sigma_theta && !(*raw.sigma_theta >= 0.0))
  {
    report.violations.push_back({ErrorCode::NonPositiveParameter, "sigma_theta",
                                 "must be >= 0"});
  }

  if (raw.sigma_b >= 0.1)
    report.warnings.push_back("sigma_b >= 0.1 rad: paraxial approximation is doubtful");

  return report;
}

const ExperimentConfig& require_valid(const ExperimentConfig& raw)
{
  const ValidationReport report = validate_config(raw);
  if (!report.ok())
    throw Error(ErrorCode::ValidationError, report.summary());
  return raw;
}

bool FringeConstants::has_shell() const
{
  return std::isfinite(B) && std::isfinite(gamma);
}

FringeConstants derive_constants(const ExperimentConfig& cfg)
{
  using std::numbers::pi;
  FringeConstants out;

  const double f0_lb = cfg.f0 * cfg.lambda_b;
  out.A = pi * cfg.n_a * cfg.d_a * cfg.lambda_a / (f0_lb * f0_lb);
  out.lambda_eq = cfg.lambda_b * cfg.lambda_b / cfg.lambda_a;

  if (!cfg.lambda_p)
  {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    out.B = out.gamma = out.chi = out.k0_prime = nan;
    out.g = {nan, nan};
    return out;
  }

  const double sigma = cfg.sigma_theta.value_or(0.0);
  out.k0_prime = 2.0 * pi / *cfg.lambda_p;
  out.B = f0_lb / *cfg.lambda_p;

  // s = sigma^2 A B^2 is the dimensionless spread parameter of the shell.
  const double s = sigma * sigma * out.A * out.B * out.B;
  out.gamma = std::sqrt(4.0 + s * s);
  out.chi = out.gamma / (out.A * out.B);
  const std::complex<double> i{0.0, 1.0};
  out.g = i * std::numbers::sqrt2 * out.A * out.B * sigma / std::sqrt(std::complex<double>{2.0, -s});
  return out;
}

ExperimentConfig reference_config(CorrelationModel model)
{
  ExperimentConfig cfg;
  cfg.lambda_a = 1550e-9;
  cfg.lambda_b = 810e-9;
  cfg.lambda_p = 532e-9;
  cfg.d_a = 11.7e-3;
  cfg.f0 = 0.15;
  cfg.n_a = 1.0;
  cfg.sigma_b = 2.36e-2;
  cfg.model = model;
  if (model == CorrelationModel::GaussianPartial)
    cfg.sigma_theta = 9.37e-4;
  return cfg;
}

} // namespace twinfringe
