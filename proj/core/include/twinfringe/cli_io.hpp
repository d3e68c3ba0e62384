#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twinfringe/fringe_analytics.hpp"
#include "twinfringe/inverse_estimation.hpp"
#include "twinfringe/optics_config.hpp"

namespace twinfringe::io
{

/// Flat `key = value` text, one pair per line; '#' starts a comment.
/// Wavelengths in nm, lengths in mm, angles in rad. Throws ParseError (with
/// line number), UnknownKey, or ValidationError.
ExperimentConfig parse_config_text(std::string_view text, std::string_view origin = "<text>");
ExperimentConfig parse_config(const std::filesystem::path& path);

/// Inverse of parse_config_text; values printed with 17 significant digits.
std::string format_config(const ExperimentConfig& cfg);

/// Binary P5, 16-bit big-endian, frame maximum -> 65535, scale in a comment.
void write_pgm(const FringeImage& image, const std::filesystem::path& path);

/// `rho_m,rate_norm,visibility` with rates divided by `normalization`.
void write_profile_csv(const RadialProfile& profile, double normalization,
                       const std::filesystem::path& path);

/// Rows of `d_a_mm,N,rho_mm` grouped into one observation per d_a.
std::vector<FringeObservation> read_ring_csv(const std::filesystem::path& path);

struct RunManifest
{
  std::string command;
  ExperimentConfig config;
  std::vector<std::filesystem::path> outputs;
  std::string version;
  double duration_s = 0.0;
  std::map<std::string, double> metrics;
};

std::string manifest_json(const RunManifest& manifest);
void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

std::string_view tool_version() noexcept;

struct SimulateOptions
{
  double screen_mm = 3.0;
  std::size_t resolution = 600;
  double phi_0 = 0.0;
};

RunManifest run_simulate(const ExperimentConfig& cfg, const SimulateOptions& options,
                         const std::filesystem::path& out_image,
                         const std::filesystem::path& out_profile);

/// Exactly one of the lists must be non-empty (UsageError otherwise, before
/// anything is written).
/// - sigmas: CSV `sigma_theta,v0,r0_m` for the gaussian_partial model; r0
///   is left empty where there is no half point.
/// - rhos (meters): CSV `rho_m,visibility` for cfg.model.
RunManifest run_visibility_scan(const ExperimentConfig& cfg, const std::vector<double>& sigmas,
                                const std::vector<double>& rhos,
                                const std::filesystem::path& out_csv);

/// Writes a text report to `report`: sigma_theta from v0, the implied
/// conditional width and pump waist, and lambda_eq / lambda_a when ring data
/// is given. v0 outside (0, 1] is a UsageError.
RunManifest run_invert(const ExperimentConfig& cfg, double v0,
                       const std::optional<std::filesystem::path>& rings_csv,
                       std::ostream& report);

/// Fits lambda_eq to ring data and writes
/// `lambda_eq_nm,std_error_nm,lambda_a_nm,points` to `out_csv` when given.
RunManifest run_eqwavelength(const ExperimentConfig& cfg, const std::filesystem::path& rings_csv,
                             const std::optional<std::filesystem::path>& out_csv,
                             std::ostream& report);

struct OracleTolerances
{
  double visibility = 0.0;
  double rate = 0.0;
  double flatness = 0.0;  ///< relative phi_0 modulation, uncorrelated model only
};

OracleTolerances oracle_tolerances(CorrelationModel model) noexcept;

/// Brute-force detection oracle against the closed forms at 20 radii in
/// [0, min(1.5 mm, f0 sigma_b)]. Writes a per-radius CSV, records the
/// worst discrepancies in the manifest metrics, and throws ToleranceExceeded
/// (after writing) when a tolerance is exceeded. grid_points >= 128.
RunManifest run_oracle_check(const ExperimentConfig& cfg, std::size_t grid_points,
                             const std::filesystem::path& out_csv);

} // namespace twinfringe::io
