// twinfringe: fringe simulator and inverse estimator for two biphoton sources.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "twinfringe/cli_io.hpp"

namespace fs = std::filesystem;
using namespace twinfringe;

namespace
{

fs::path manifest_path(const fs::path& out)
{
  return fs::path(out.string() + ".manifest.json");
}

fs::path sibling_csv(const fs::path& out)
{
  fs::path p = out;
  p.replace_extension(".csv");
  if (p == out)
    p = fs::path(out.string() + ".csv");
  return p;
}

void finish(const io::RunManifest& m, const std::optional<fs::path>& out)
{
  if (out)
    io::write_manifest(m, manifest_path(*out));
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Induced-coherence fringe simulator and correlation estimator"};
  app.set_version_flag("--version", std::string(io::tool_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  app.add_option("--config", config_path, "experiment config (key = value)")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "primary output path; manifest goes to <out>.manifest.json");

  // simulate
  io::SimulateOptions sim;
  std::string profile_path;
  auto* simulate = app.add_subcommand("simulate", "render the fringe pattern and radial profile");
  simulate->add_option("--screen-mm", sim.screen_mm, "screen side length")->capture_default_str();
  simulate->add_option("--resolution", sim.resolution, "pixels per side (>= 64)")->capture_default_str();
  simulate->add_option("--phi0", sim.phi_0, "reference phase phi_0 [rad]")->capture_default_str();
  simulate->add_option("--profile", profile_path, "profile CSV (default: <out> with .csv)");

  // visibility
  std::vector<double> sigmas, rhos_mm;
  auto* visibility = app.add_subcommand("visibility", "visibility vs sigma_theta or vs radius");
  visibility->add_option("--sigma", sigmas, "sigma_theta values [rad]")->delimiter(',');
  visibility->add_option("--rho-mm", rhos_mm, "radii [mm]")->delimiter(',');

  // invert
  double v0 = 0.0;
  std::string rings_path;
  auto* invert = app.add_subcommand("invert", "sigma_theta from central visibility");
  invert->add_option("--v0", v0, "measured central visibility in (0, 1]")->required();
  invert->add_option("--rings", rings_path, "ring CSV d_a_mm,N,rho_mm")->check(CLI::ExistingFile);

  // eqwavelength
  std::string eq_rings;
  auto* eqwl = app.add_subcommand("eqwavelength", "fit lambda_eq from first-ring radii");
  eqwl->add_option("--rings", eq_rings, "ring CSV d_a_mm,N,rho_mm")->required()->check(CLI::ExistingFile);

  // oracle
  std::size_t grid_points = 512;
  auto* oracle = app.add_subcommand("oracle", "brute-force oracle vs closed forms");
  oracle->add_option("--grid-points", grid_points, "a-modes (>= 128)")->capture_default_str();

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try
  {
    if (config_path.empty())
      throw Error(ErrorCode::UsageError, "--config is required");
    const ExperimentConfig cfg = io::parse_config(config_path);
    for (const std::string& w : validate_config(cfg).warnings)
      std::cerr << "warning: " << w << "\n";
    const std::optional<fs::path> out =
        out_path.empty() ? std::nullopt : std::optional<fs::path>(out_path);

    if (*simulate)
    {
      if (!out)
        throw Error(ErrorCode::UsageError, "simulate needs --out");
      const fs::path profile = profile_path.empty() ? sibling_csv(*out) : fs::path(profile_path);
      const io::RunManifest m = io::run_simulate(cfg, sim, *out, profile);
      finish(m, out);
      std::cout << "wrote " << out->string() << " and " << profile.string() << "\n";
    }
    else if (*visibility)
    {
      if (!out)
        throw Error(ErrorCode::UsageError, "visibility needs --out");
      std::vector<double> rhos;
      for (double r : rhos_mm)
        rhos.push_back(r * 1e-3);
      const io::RunManifest m = io::run_visibility_scan(cfg, sigmas, rhos, *out);
      finish(m, out);
      std::cout << "wrote " << out->string() << "\n";
    }
    else if (*invert)
    {
      const std::optional<fs::path> rings =
          rings_path.empty() ? std::nullopt : std::optional<fs::path>(rings_path);
      std::ostringstream report;
      io::RunManifest m = io::run_invert(cfg, v0, rings, report);
      std::cout << report.str();
      if (out)
      {
        std::ofstream file(*out);
        file << report.str();
        if (!file.flush())
          throw Error(ErrorCode::IoError, "write to '" + out->string() + "' failed");
        m.outputs.push_back(*out);
      }
      finish(m, out);
    }
    else if (*eqwl)
    {
      const io::RunManifest m = io::run_eqwavelength(cfg, eq_rings, out, std::cout);
      finish(m, out);
    }
    else if (*oracle)
    {
      if (!out)
        throw Error(ErrorCode::UsageError, "oracle needs --out");
      const io::RunManifest m = io::run_oracle_check(cfg, grid_points, *out);
      finish(m, out);
      for (const auto& [k, v] : m.metrics)
        std::cout << k << " = " << v << "\n";
      std::cout << "oracle check passed\n";
    }
  }
  catch (const Error& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_status(e.code());
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
