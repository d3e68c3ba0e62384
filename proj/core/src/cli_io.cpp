#include "twinfringe/cli_io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "twinfringe/detection_oracle.hpp"

#ifndef TWINFRINGE_VERSION
#define TWINFRINGE_VERSION "unknown"
#endif

namespace twinfringe::io
{

namespace
{

using Clock = std::chrono::steady_clock;
namespace fs = std::filesystem;

std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_error(std::string_view origin, std::size_t line, const std::string& what)
{
  std::ostringstream msg;
  msg << origin << ":" << line << ": " << what;
  throw Error(ErrorCode::ParseError, msg.str());
}

double parse_number(std::string_view text, std::string_view origin, std::size_t line)
{
  double v = 0.0;
  // from_chars rejects a leading '+'
  if (!text.empty() && text.front() == '+')
    text.remove_prefix(1);
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(v))
    parse_error(origin, line, "not a finite number: '" + std::string(text) + "'");
  return v;
}

std::string fmt12(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt17(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_output(const fs::path& path, bool binary)
{
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out)
    throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  return out;
}

void finish_output(std::ofstream& out, const fs::path& path)
{
  out.flush();
  if (!out)
    throw Error(ErrorCode::IoError, "write to '" + path.string() + "' failed");
}

double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

std::string_view tool_version() noexcept
{
  return TWINFRINGE_VERSION;
}

ExperimentConfig parse_config_text(std::string_view text, std::string_view origin)
{
  ExperimentConfig cfg;
  std::unordered_map<std::string, std::size_t> seen;

  std::size_t line_no = 0;
  while (!text.empty())
  {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      parse_error(origin, line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      parse_error(origin, line_no, "expected 'key = value'");

    if (const auto it = seen.find(key); it != seen.end())
    {
      std::ostringstream msg;
      msg << "duplicate key '" << key << "' on lines " << it->second << " and " << line_no;
      parse_error(origin, line_no, msg.str());
    }
    seen.emplace(key, line_no);

    auto num = [&] { return parse_number(value, origin, line_no); };
    if (key == "lambda_a_nm")
      cfg.lambda_a = num() / 1e9;
    else if (key == "lambda_b_nm")
      cfg.lambda_b = num() / 1e9;
    else if (key == "lambda_p_nm")
      cfg.lambda_p = num() / 1e9;
    else if (key == "d_a_mm")
      cfg.d_a = num() / 1e3;
    else if (key == "f0_mm")
      cfg.f0 = num() / 1e3;
    else if (key == "n_a")
      cfg.n_a = num();
    else if (key == "sigma_b")
      cfg.sigma_b = num();
    else if (key == "sigma_theta")
      cfg.sigma_theta = num();
    else if (key == "alpha1_mag")
      cfg.alpha1_mag = num();
    else if (key == "alpha2_mag")
      cfg.alpha2_mag = num();
    else if (key == "phi1_rad")
      cfg.phi1 = num();
    else if (key == "phi2_rad")
      cfg.phi2 = num();
    else if (key == "phi_b_rad")
      cfg.phi_b = num();
    else if (key == "model")
    {
      const auto model = parse_model(value);
      if (!model)
        parse_error(origin, line_no,
                    "model must be maximal, uncorrelated or gaussian_partial, got '" +
                        std::string(value) + "'");
      cfg.model = *model;
    }
    else
    {
      std::ostringstream msg;
      msg << origin << ":" << line_no << ": unknown key '" << key << "'";
      throw Error(ErrorCode::UnknownKey, msg.str());
    }
  }
  require_valid(cfg);
  return cfg;
}

ExperimentConfig parse_config(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::IoError, "cannot read config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

std::string format_config(const ExperimentConfig& cfg)
{
  std::ostringstream out;
  out << "lambda_a_nm = " << fmt17(cfg.lambda_a * 1e9) << "\n";
  out << "lambda_b_nm = " << fmt17(cfg.lambda_b * 1e9) << "\n";
  if (cfg.lambda_p)
    out << "lambda_p_nm = " << fmt17(*cfg.lambda_p * 1e9) << "\n";
  out << "d_a_mm = " << fmt17(cfg.d_a * 1e3) << "\n";
  out << "f0_mm = " << fmt17(cfg.f0 * 1e3) << "\n";
  out << "n_a = " << fmt17(cfg.n_a) << "\n";
  out << "sigma_b = " << fmt17(cfg.sigma_b) << "\n";
  if (cfg.sigma_theta)
    out << "sigma_theta = " << fmt17(*cfg.sigma_theta) << "\n";
  out << "alpha1_mag = " << fmt17(cfg.alpha1_mag) << "\n";
  out << "alpha2_mag = " << fmt17(cfg.alpha2_mag) << "\n";
  out << "phi1_rad = " << fmt17(cfg.phi1) << "\n";
  out << "phi2_rad = " << fmt17(cfg.phi2) << "\n";
  out << "phi_b_rad = " << fmt17(cfg.phi_b) << "\n";
  out << "model = " << to_string(cfg.model) << "\n";
  return out.str();
}

void write_pgm(const FringeImage& image, const fs::path& path)
{
  if (image.values.size() != image.width * image.height)
    throw Error(ErrorCode::UsageError, "image buffer does not match its dimensions");
  std::ofstream out = open_output(path, true);
  out << "P5\n# scale " << fmt17(image.normalization) << " rate per 65535\n"
      << image.width << " " << image.height << "\n65535\n";
  std::vector<unsigned char> bytes(image.values.size() * 2);
  const double scale = image.normalization > 0.0 ? 65535.0 / image.normalization : 0.0;
  for (std::size_t i = 0; i < image.values.size(); ++i)
  {
    const double v = std::clamp(image.values[i] * scale, 0.0, 65535.0);
    const auto s = static_cast<unsigned>(std::lround(v));
    bytes[2 * i] = static_cast<unsigned char>(s >> 8);
    bytes[2 * i + 1] = static_cast<unsigned char>(s & 0xff);
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  finish_output(out, path);
}

void write_profile_csv(const RadialProfile& profile, double normalization, const fs::path& path)
{
  std::ofstream out = open_output(path, false);
  out << "rho_m,rate_norm,visibility\n";
  const double scale = normalization > 0.0 ? 1.0 / normalization : 0.0;
  for (const ProfileSample& s : profile.samples)
    out << fmt12(s.rho) << "," << fmt12(s.rate * scale) << "," << fmt12(s.visibility) << "\n";
  finish_output(out, path);
}

std::vector<FringeObservation> read_ring_csv(const fs::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::IoError, "cannot read ring data '" + path.string() + "'");
  const std::string origin = path.string();

  std::vector<FringeObservation> obs;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw))
  {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#')
      continue;
    if (line == "d_a_mm,N,rho_mm")
      continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;)
    {
      const auto comma = line.find(',', start);
      fields.push_back(trim(line.substr(start, comma - start)));
      if (comma == std::string_view::npos)
        break;
      start = comma + 1;
    }
    if (fields.size() != 3)
      parse_error(origin, line_no, "expected d_a_mm,N,rho_mm");
    const double d_a = parse_number(fields[0], origin, line_no) / 1e3;
    const double n = parse_number(fields[1], origin, line_no);
    const double rho = parse_number(fields[2], origin, line_no) / 1e3;
    if (n != std::floor(n) || n < 0.0)
      parse_error(origin, line_no, "ring order must be a non-negative integer");
    if (!(d_a > 0.0) || !(rho >= 0.0))
      parse_error(origin, line_no, "d_a must be > 0 and rho >= 0");

    auto it = std::find_if(obs.begin(), obs.end(), [d_a](const auto& o) { return o.d_a == d_a; });
    if (it == obs.end())
    {
      obs.push_back({d_a, {}, std::nullopt, std::nullopt});
      it = obs.end() - 1;
    }
    it->ring_radii.emplace_back(static_cast<int>(n), rho);
  }
  for (auto& o : obs)
    std::sort(o.ring_radii.begin(), o.ring_radii.end());
  return obs;
}

std::string manifest_json(const RunManifest& manifest)
{
  const ExperimentConfig& c = manifest.config;
  nlohmann::ordered_json cfg;
  cfg["lambda_a_nm"] = c.lambda_a * 1e9;
  cfg["lambda_b_nm"] = c.lambda_b * 1e9;
  cfg["lambda_p_nm"] = c.lambda_p ? nlohmann::ordered_json(*c.lambda_p * 1e9) : nullptr;
  cfg["d_a_mm"] = c.d_a * 1e3;
  cfg["f0_mm"] = c.f0 * 1e3;
  cfg["n_a"] = c.n_a;
  cfg["sigma_b"] = c.sigma_b;
  cfg["sigma_theta"] = c.sigma_theta ? nlohmann::ordered_json(*c.sigma_theta) : nullptr;
  cfg["alpha1_mag"] = c.alpha1_mag;
  cfg["alpha2_mag"] = c.alpha2_mag;
  cfg["phi1_rad"] = c.phi1;
  cfg["phi2_rad"] = c.phi2;
  cfg["phi_b_rad"] = c.phi_b;
  cfg["model"] = std::string(to_string(c.model));

  nlohmann::ordered_json j;
  j["command"] = manifest.command;
  j["version"] = manifest.version;
  j["config"] = cfg;
  j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& p : manifest.outputs)
    j["outputs"].push_back(p.string());
  j["duration_s"] = manifest.duration_s;
  j["metrics"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : manifest.metrics)
    j["metrics"][k] = v;
  return j.dump(2) + "\n";
}

void write_manifest(const RunManifest& manifest, const fs::path& path)
{
  std::ofstream out = open_output(path, false);
  out << manifest_json(manifest);
  finish_output(out, path);
}

RunManifest run_simulate(const ExperimentConfig& cfg, const SimulateOptions& options,
                         const fs::path& out_image, const fs::path& out_profile)
{
  const auto start = Clock::now();
  require_valid(cfg);
  RadialProfile profile;
  const FringeImage image =
      render_pattern(cfg, options.screen_mm * 1e-3, options.resolution, options.phi_0, &profile);
  write_pgm(image, out_image);
  write_profile_csv(profile, image.normalization, out_profile);

  RunManifest m{"simulate", cfg, {out_image, out_profile}, std::string(tool_version()), 0.0, {}};
  m.metrics["normalization"] = image.normalization;
  m.metrics["pixel_pitch_m"] = image.pixel_pitch;
  m.duration_s = seconds_since(start);
  return m;
}

RunManifest run_visibility_scan(const ExperimentConfig& cfg, const std::vector<double>& sigmas,
                                const std::vector<double>& rhos, const fs::path& out_csv)
{
  const auto start = Clock::now();
  if (sigmas.empty() == rhos.empty())
    throw Error(ErrorCode::UsageError, "give exactly one non-empty list: sigma_theta or rho");
  for (double s : sigmas)
    if (!(s > 0.0))
      throw Error(ErrorCode::UsageError, "sigma_theta values must be > 0");
  for (double r : rhos)
    if (!(r >= 0.0))
      throw Error(ErrorCode::UsageError, "rho values must be >= 0");

  std::ostringstream body;
  RunManifest m{"visibility", cfg, {out_csv}, std::string(tool_version()), 0.0, {}};
  if (!sigmas.empty())
  {
    ExperimentConfig probe = cfg;
    probe.model = CorrelationModel::GaussianPartial;
    probe.sigma_theta = sigmas.front();
    require_valid(probe);
    body << "sigma_theta,v0,r0_m\n";
    for (double s : sigmas)
    {
      probe.sigma_theta = s;
      body << fmt12(s) << "," << fmt12(central_visibility(probe)) << ",";
      try
      {
        body << fmt12(visibility_hwhm(probe));
      }
      catch (const Error& e)
      {
        if (e.code() != ErrorCode::NoHalfPoint)
          throw;
      }
      body << "\n";
    }
    m.config = probe;
    m.config.sigma_theta = cfg.sigma_theta;
  }
  else
  {
    require_valid(cfg);
    body << "rho_m,visibility\n";
    for (double r : rhos)
      body << fmt12(r) << "," << fmt12(model_visibility(r, cfg)) << "\n";
  }

  std::ofstream out = open_output(out_csv, false);
  out << body.str();
  finish_output(out, out_csv);
  m.metrics["rows"] = static_cast<double>(sigmas.empty() ? rhos.size() : sigmas.size());
  m.duration_s = seconds_since(start);
  return m;
}

namespace
{

void report_wavelength(const ExperimentConfig& cfg, const WavelengthFit& fit, std::ostream& report,
                       RunManifest& m)
{
  const double lambda_a = infer_lambda_a(fit.lambda_eq, cfg.lambda_b);
  report << "lambda_eq_nm = " << fmt12(fit.lambda_eq * 1e9) << " +- "
         << fmt12(fit.std_error * 1e9) << " (OLS standard error, " << fit.points << " points)\n";
  report << "lambda_a_nm = " << fmt12(lambda_a * 1e9) << " (inferred from lambda_b = "
         << fmt12(cfg.lambda_b * 1e9) << " nm)\n";
  m.metrics["lambda_eq_m"] = fit.lambda_eq;
  m.metrics["lambda_eq_std_error_m"] = fit.std_error;
  m.metrics["lambda_a_m"] = lambda_a;
}

} // namespace

RunManifest run_invert(const ExperimentConfig& cfg, double v0,
                       const std::optional<fs::path>& rings_csv, std::ostream& report)
{
  const auto start = Clock::now();
  if (!(v0 > 0.0 && v0 <= 1.0))
  {
    std::ostringstream msg;
    msg << "v0 must lie in (0, 1], got " << v0;
    throw Error(ErrorCode::UsageError, msg.str());
  }
  RunManifest m{"invert", cfg, {}, std::string(tool_version()), 0.0, {}};
  const double sigma = estimate_sigma_theta(v0, cfg);
  report << "v0 = " << fmt12(v0) << "\n";
  report << "sigma_theta_rad = " << fmt12(sigma) << "\n";
  if (sigma == 0.0)
  {
    report << "note: v0 = 1 means maximal momentum correlation "
              "(conditional P(k_a|k_b) is a delta function)\n";
  }
  else
  {
    const double k0 = 2.0 * std::numbers::pi / *cfg.lambda_p;
    report << "conditional: P(k_a|k_b) ~ exp(-2 theta'^2 / sigma_theta^2) on |k_a + k_b| = k0'\n";
    report << "conditional_width_transverse_k_per_m = " << fmt12(k0 * sigma) << "\n";
    report << "equivalent_pump_waist_m = " << fmt12(*cfg.lambda_p / (std::numbers::pi * sigma))
           << "\n";
  }
  m.metrics["v0"] = v0;
  m.metrics["sigma_theta"] = sigma;

  if (rings_csv)
  {
    const std::vector<FringeObservation> obs = read_ring_csv(*rings_csv);
    report_wavelength(cfg, estimate_equivalent_wavelength(obs, cfg), report, m);
  }
  m.duration_s = seconds_since(start);
  return m;
}

RunManifest run_eqwavelength(const ExperimentConfig& cfg, const fs::path& rings_csv,
                             const std::optional<fs::path>& out_csv, std::ostream& report)
{
  const auto start = Clock::now();
  RunManifest m{"eqwavelength", cfg, {}, std::string(tool_version()), 0.0, {}};
  const std::vector<FringeObservation> obs = read_ring_csv(rings_csv);
  const WavelengthFit fit = estimate_equivalent_wavelength(obs, cfg);
  report_wavelength(cfg, fit, report, m);
  if (out_csv)
  {
    std::ofstream out = open_output(*out_csv, false);
    out << "lambda_eq_nm,std_error_nm,lambda_a_nm,points\n"
        << fmt12(fit.lambda_eq * 1e9) << "," << fmt12(fit.std_error * 1e9) << ","
        << fmt12(infer_lambda_a(fit.lambda_eq, cfg.lambda_b) * 1e9) << "," << fit.points << "\n";
    finish_output(out, *out_csv);
    m.outputs.push_back(*out_csv);
  }
  m.duration_s = seconds_since(start);
  return m;
}

OracleTolerances oracle_tolerances(CorrelationModel model) noexcept
{
  switch (model)
  {
    case CorrelationModel::Maximal:
      return {1e-9, 1e-9, 0.0};
    case CorrelationModel::Uncorrelated:
      return {1e-9, 1e-9, 1e-10};
    case CorrelationModel::GaussianPartial:
      return {0.01, 0.01, 0.0};
  }
  return {};
}

RunManifest run_oracle_check(const ExperimentConfig& cfg, std::size_t grid_points,
                             const fs::path& out_csv)
{
  const auto start = Clock::now();
  if (grid_points < 128)
    throw Error(ErrorCode::UsageError, "oracle check needs grid_points >= 128");
  require_valid(cfg);

  constexpr std::size_t n_radii = 20;
  const double rho_max = std::min(1.5e-3, cfg.f0 * cfg.sigma_b);
  std::vector<double> radii(n_radii);
  for (std::size_t i = 0; i < n_radii; ++i)
    radii[i] = rho_max * static_cast<double>(i) / static_cast<double>(n_radii - 1);

  const SuperposedState state = build_oracle_state(cfg, radii, grid_points);
  // The normalized table carries P(k_b) / sum P per camera point.
  double scale = 0.0;
  for (double r : radii)
    scale += envelope(r, cfg);

  double max_vis = 0.0, max_rate = 0.0, max_flat = 0.0;
  std::ostringstream body;
  body << "rho_m,visibility_oracle,visibility_closed,rate_oracle,rate_closed\n";
  for (std::size_t kb = 0; kb < n_radii; ++kb)
  {
    const double rho = radii[kb];
    const PhaseSweep sweep = sweep_phase(state, kb);
    const double v_closed = model_visibility(rho, cfg);
    const double r_oracle = counting_rate_reduced(state, kb, 0.0) * scale;
    const double r_closed = model_rate(rho, 0.0, cfg);
    const double peak = 2.0 * envelope(rho, cfg);

    max_vis = std::max(max_vis, std::abs(sweep.visibility - v_closed));
    max_rate = std::max(max_rate, std::abs(r_oracle - r_closed) / peak);
    max_flat = std::max(max_flat, (sweep.rate_max - sweep.rate_min) / sweep.mean);
    body << fmt12(rho) << "," << fmt12(sweep.visibility) << "," << fmt12(v_closed) << ","
         << fmt12(r_oracle) << "," << fmt12(r_closed) << "\n";
  }

  std::ofstream out = open_output(out_csv, false);
  out << body.str();
  finish_output(out, out_csv);

  RunManifest m{"oracle", cfg, {out_csv}, std::string(tool_version()), 0.0, {}};
  m.metrics["grid_points"] = static_cast<double>(grid_points);
  m.metrics["max_visibility_diff"] = max_vis;
  m.metrics["max_rate_rel_diff"] = max_rate;
  if (cfg.model == CorrelationModel::Uncorrelated)
    m.metrics["max_phase_modulation"] = max_flat;
  m.duration_s = seconds_since(start);

  const OracleTolerances tol = oracle_tolerances(cfg.model);
  std::ostringstream fail;
  if (max_vis > tol.visibility)
    fail << " visibility " << max_vis << " > " << tol.visibility << ";";
  if (max_rate > tol.rate)
    fail << " rate " << max_rate << " > " << tol.rate << ";";
  if (cfg.model == CorrelationModel::Uncorrelated && max_flat > tol.flatness)
    fail << " phase modulation " << max_flat << " > " << tol.flatness << ";";
  if (!fail.str().empty())
    throw Error(ErrorCode::ToleranceExceeded, "oracle check failed:" + fail.str());
  return m;
}

} // namespace twinfringe::io
