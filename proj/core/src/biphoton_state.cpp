#include "twinfringe/biphoton_state.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "twinfringe/detection_oracle.hpp"

namespace twinfringe
{

namespace
{

constexpr double kParaxialLimit = 0.1;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Transverse
{
  double x;
  double y;
};

Transverse transverse(const ModeGrid& grid, std::size_t mode)
{
  const double r = grid.k_magnitude * grid.theta_of(mode);
  const double psi = grid.azimuth_of(mode);
  return {r * std::cos(psi), r * std::sin(psi)};
}

void normalize(std::vector<std::complex<double>>& amplitudes)
{
  double total = 0.0;
  for (const auto& c : amplitudes)
    total += std::norm(c);
  if (!(total > 0.0))
    throw Error(ErrorCode::ZeroMarginal, "state has zero total probability");
  const double scale = 1.0 / std::sqrt(total);
  for (auto& c : amplitudes)
    c *= scale;
}

// Position of psi on the line through the axis at angle psi0: +1 or -1, or
// 0 when psi is off the line.
int line_side(double psi, double psi0)
{
  constexpr double tol = 1e-12;
  const double d = std::remainder(psi - psi0, kTwoPi);
  if (std::abs(d) <= tol)
    return 1;
  if (std::abs(std::abs(d) - std::numbers::pi) <= tol)
    return -1;
  return 0;
}

// Signed coordinates (angle units) of every mode along the line at psi0.
std::vector<double> signed_coordinates(const ModeGrid& grid, double psi0, const char* which)
{
  std::vector<double> s(grid.size());
  for (std::size_t m = 0; m < grid.size(); ++m)
  {
    const int side = line_side(grid.azimuth_of(m), psi0);
    if (side == 0)
    {
      std::ostringstream msg;
      msg << which << " azimuth " << grid.azimuth_of(m)
          << " is off the transverse line required by the gaussian_partial model";
      throw Error(ErrorCode::GridMismatch, msg.str());
    }
    s[m] = side * grid.theta_of(m);
  }
  return s;
}

// Integral of |t| exp(-2 t^2 / sigma^2) over [lo, hi].
double shell_cell_weight(double lo, double hi, double sigma)
{
  const double c = 2.0 / (sigma * sigma);
  // F(t) = (1 - exp(-c t^2)) / (2c) is the integral from 0 to |t|.
  auto F = [c](double t) { return -std::expm1(-c * t * t) / (2.0 * c); };
  if (lo >= 0.0)
    return F(hi) - F(lo);
  if (hi <= 0.0)
    return F(lo) - F(hi);
  return F(lo) + F(hi);
}

TwoPhotonState build_maximal(const ModeGrid& grid_a, const ModeGrid& grid_b,
                             const ExperimentConfig& cfg)
{
  const std::vector<double> pb = envelope_weights(grid_b, cfg);
  TwoPhotonState state{grid_a, grid_b, std::vector<std::complex<double>>(grid_a.size() * grid_b.size())};

  for (std::size_t kb = 0; kb < grid_b.size(); ++kb)
  {
    // k_a = k0 - k_b: transverse parts are opposite.
    const Transverse tb = transverse(grid_b, kb);
    const double target = std::hypot(tb.x, tb.y);
    const double tol = 1e-9 * target + 1e-12 * grid_a.k_magnitude;
    std::size_t match = grid_a.size();
    for (std::size_t ka = 0; ka < grid_a.size(); ++ka)
    {
      const Transverse ta = transverse(grid_a, ka);
      if (std::hypot(ta.x + tb.x, ta.y + tb.y) <= tol)
      {
        match = ka;
        break;
      }
    }
    if (match == grid_a.size())
    {
      std::ostringstream msg;
      msg << "no a-mode at the image of b-mode " << kb << " (theta_b = " << grid_b.theta_of(kb)
          << "); grid_a must contain image_grid(grid_b)";
      throw Error(ErrorCode::GridMismatch, msg.str());
    }
    state.amplitudes[state.index(match, kb)] = std::sqrt(pb[kb]);
  }
  normalize(state.amplitudes);
  return state;
}

TwoPhotonState build_partial(const ModeGrid& grid_a, const ModeGrid& grid_b,
                             const ExperimentConfig& cfg)
{
  const FringeConstants fc = derive_constants(cfg);
  if (!cfg.lambda_p)
    throw Error(ErrorCode::MissingPumpWavelength, "gaussian_partial model needs lambda_p");
  if (!cfg.sigma_theta || !(*cfg.sigma_theta > 0.0))
    throw Error(ErrorCode::MissingSigmaTheta, "gaussian_partial model needs sigma_theta > 0");
  const double sigma = *cfg.sigma_theta;

  const double psi0 = grid_a.azimuth.front();
  const std::vector<double> sa = signed_coordinates(grid_a, psi0, "grid_a");
  const std::vector<double> sb = signed_coordinates(grid_b, psi0, "grid_b");

  // Cells of the a-modes along the line: midpoints between sorted neighbours,
  // end cells mirrored.
  std::vector<std::size_t> order(sa.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&sa](std::size_t i, std::size_t j) { return sa[i] < sa[j]; });
  std::vector<double> lo(sa.size()), hi(sa.size());
  for (std::size_t r = 0; r < order.size(); ++r)
  {
    const double here = sa[order[r]];
    const double left = r > 0 ? 0.5 * (sa[order[r - 1]] + here) : std::numeric_limits<double>::quiet_NaN();
    const double right = r + 1 < order.size() ? 0.5 * (here + sa[order[r + 1]]) : std::numeric_limits<double>::quiet_NaN();
    lo[order[r]] = std::isnan(left) ? (std::isnan(right) ? here : 2.0 * here - right) : left;
    hi[order[r]] = std::isnan(right) ? (std::isnan(left) ? here : 2.0 * here - left) : right;
  }

  const std::vector<double> pb = envelope_weights(grid_b, cfg);
  TwoPhotonState state{grid_a, grid_b, std::vector<std::complex<double>>(grid_a.size() * grid_b.size())};
  const double ka_over_k0 = grid_a.k_magnitude / fc.k0_prime;
  const double kb_over_k0 = grid_b.k_magnitude / fc.k0_prime;

  std::vector<double> column(grid_a.size());
  for (std::size_t kb = 0; kb < grid_b.size(); ++kb)
  {
    const double offset = kb_over_k0 * sb[kb];
    double sum = 0.0;
    for (std::size_t ka = 0; ka < grid_a.size(); ++ka)
    {
      column[ka] = shell_cell_weight(ka_over_k0 * lo[ka] + offset, ka_over_k0 * hi[ka] + offset, sigma);
      sum += column[ka];
    }
    if (!(sum > 0.0))
    {
      std::ostringstream msg;
      msg << "grid_a does not cover the correlation shell of b-mode " << kb;
      throw Error(ErrorCode::GridMismatch, msg.str());
    }
    for (std::size_t ka = 0; ka < grid_a.size(); ++ka)
      state.amplitudes[state.index(ka, kb)] = std::sqrt(pb[kb] * column[ka] / sum);
  }
  normalize(state.amplitudes);
  return state;
}

} // namespace

void check_grid(const ModeGrid& grid)
{
  if (grid.theta.empty() || grid.azimuth.empty())
    throw Error(ErrorCode::InvalidGrid, "grid needs at least one theta and one azimuth sample");
  if (!(grid.k_magnitude > 0.0))
    throw Error(ErrorCode::InvalidGrid, "k_magnitude must be > 0");
  for (std::size_t i = 0; i < grid.theta.size(); ++i)
  {
    const double t = grid.theta[i];
    if (!(t >= 0.0 && t < kParaxialLimit))
    {
      std::ostringstream msg;
      msg << "theta sample " << t << " outside the paraxial range [0, " << kParaxialLimit << ")";
      throw Error(ErrorCode::InvalidGrid, msg.str());
    }
    if (i > 0 && !(t > grid.theta[i - 1]))
      throw Error(ErrorCode::InvalidGrid, "theta samples must be strictly increasing");
  }
  for (std::size_t i = 0; i < grid.azimuth.size(); ++i)
  {
    const double psi = grid.azimuth[i];
    if (!(psi >= 0.0 && psi < kTwoPi))
      throw Error(ErrorCode::InvalidGrid, "azimuth samples must lie in [0, 2 pi)");
    if (i > 0 && !(psi > grid.azimuth[i - 1]))
      throw Error(ErrorCode::InvalidGrid, "azimuth samples must be strictly increasing");
  }
}

ModeGrid uniform_grid(double theta_max, std::size_t n, std::vector<double> azimuths, double k)
{
  if (n < 2)
    throw Error(ErrorCode::InvalidGrid, "uniform grid needs at least 2 theta samples");
  ModeGrid grid;
  grid.theta.resize(n);
  const double h = theta_max / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j)
    grid.theta[j] = (static_cast<double>(j) + 0.5) * h;
  grid.azimuth = std::move(azimuths);
  grid.k_magnitude = k;
  check_grid(grid);
  return grid;
}

ModeGrid line_grid(double theta_max, std::size_t n, double k)
{
  return uniform_grid(theta_max, n, {0.0, std::numbers::pi}, k);
}

ModeGrid camera_grid(std::span<const double> radii, const ExperimentConfig& cfg)
{
  ModeGrid grid;
  grid.theta.reserve(radii.size());
  for (double rho : radii)
    grid.theta.push_back(rho / cfg.f0);
  grid.azimuth = {0.0};
  grid.k_magnitude = kTwoPi / cfg.lambda_b;
  check_grid(grid);
  return grid;
}

ModeGrid image_grid(const ModeGrid& grid_b, const ExperimentConfig& cfg)
{
  ModeGrid grid;
  const double ratio = cfg.lambda_a / cfg.lambda_b;
  grid.theta.reserve(grid_b.theta.size());
  for (double t : grid_b.theta)
    grid.theta.push_back(ratio * t);
  for (double psi : grid_b.azimuth)
    grid.azimuth.push_back(std::fmod(psi + std::numbers::pi, kTwoPi));
  std::sort(grid.azimuth.begin(), grid.azimuth.end());
  grid.k_magnitude = kTwoPi / cfg.lambda_a;
  check_grid(grid);
  return grid;
}

ModeGrid phase_balanced_disk(const ExperimentConfig& cfg, std::size_t n, std::size_t cycles)
{
  if (!(cfg.d_a > 0.0))
    throw Error(ErrorCode::ZeroDistance, "phase-balanced disk needs d_a > 0");
  if (cycles == 0 || cycles % n == 0)
    throw Error(ErrorCode::InvalidGrid, "cycles must be positive and not a multiple of n");
  const double kappa = std::numbers::pi * cfg.n_a * cfg.d_a / cfg.lambda_a;
  const double u_max = kTwoPi * static_cast<double>(cycles) / kappa;
  ModeGrid grid;
  grid.theta.resize(n);
  for (std::size_t j = 0; j < n; ++j)
    grid.theta[j] = std::sqrt((static_cast<double>(j) + 0.5) * u_max / static_cast<double>(n));
  grid.azimuth = {0.0};
  grid.k_magnitude = kTwoPi / cfg.lambda_a;
  check_grid(grid);
  return grid;
}

std::vector<double> envelope_weights(const ModeGrid& grid_b, const ExperimentConfig& cfg)
{
  std::vector<double> w(grid_b.size());
  for (std::size_t m = 0; m < grid_b.size(); ++m)
  {
    const double t = grid_b.theta_of(m) / cfg.sigma_b;
    w[m] = std::exp(-2.0 * t * t);
  }
  return w;
}

TwoPhotonState product_state(const ModeGrid& grid_a, std::span<const double> weights_a,
                             const ModeGrid& grid_b, std::span<const double> weights_b)
{
  check_grid(grid_a);
  check_grid(grid_b);
  if (weights_a.size() != grid_a.size() || weights_b.size() != grid_b.size())
    throw Error(ErrorCode::GridMismatch, "marginal weights do not match grid sizes");
  TwoPhotonState state{grid_a, grid_b, std::vector<std::complex<double>>(grid_a.size() * grid_b.size())};
  for (std::size_t ka = 0; ka < grid_a.size(); ++ka)
    for (std::size_t kb = 0; kb < grid_b.size(); ++kb)
      state.amplitudes[state.index(ka, kb)] = std::sqrt(weights_a[ka] * weights_b[kb]);
  normalize(state.amplitudes);
  return state;
}

TwoPhotonState build_amplitudes(CorrelationModel model, const ModeGrid& grid_a,
                                const ModeGrid& grid_b, const ExperimentConfig& cfg)
{
  require_valid(cfg);
  check_grid(grid_a);
  check_grid(grid_b);
  switch (model)
  {
    case CorrelationModel::Maximal:
      return build_maximal(grid_a, grid_b, cfg);
    case CorrelationModel::Uncorrelated:
    {
      const std::vector<double> pa(grid_a.size(), 1.0);
      return product_state(grid_a, pa, grid_b, envelope_weights(grid_b, cfg));
    }
    case CorrelationModel::GaussianPartial:
      return build_partial(grid_a, grid_b, cfg);
  }
  throw Error(ErrorCode::UsageError, "unknown correlation model");
}

namespace
{

void check_indices(const TwoPhotonState& state, std::size_t ka, std::size_t kb)
{
  if (ka >= state.grid_a.size() || kb >= state.grid_b.size())
  {
    std::ostringstream msg;
    msg << "mode pair (" << ka << ", " << kb << ") outside grids of size ("
        << state.grid_a.size() << ", " << state.grid_b.size() << ")";
    throw Error(ErrorCode::IndexOutOfRange, msg.str());
  }
}

} // namespace

double joint_probability(const TwoPhotonState& state, std::size_t ka, std::size_t kb)
{
  check_indices(state, ka, kb);
  return std::norm(state.amplitude(ka, kb));
}

double marginal_a(const TwoPhotonState& state, std::size_t ka)
{
  check_indices(state, ka, 0);
  double sum = 0.0;
  for (std::size_t kb = 0; kb < state.grid_b.size(); ++kb)
    sum += std::norm(state.amplitude(ka, kb));
  return sum;
}

double marginal_b(const TwoPhotonState& state, std::size_t kb)
{
  check_indices(state, 0, kb);
  double sum = 0.0;
  for (std::size_t ka = 0; ka < state.grid_a.size(); ++ka)
    sum += std::norm(state.amplitude(ka, kb));
  return sum;
}

double conditional_probability(const TwoPhotonState& state, std::size_t ka, std::size_t given_kb)
{
  check_indices(state, ka, given_kb);
  const double pb = marginal_b(state, given_kb);
  if (!(pb > 0.0))
  {
    std::ostringstream msg;
    msg << "P(k_b) = 0 at b-mode " << given_kb;
    throw Error(ErrorCode::ZeroMarginal, msg.str());
  }
  return std::norm(state.amplitude(ka, given_kb)) / pb;
}

double total_probability(const TwoPhotonState& state)
{
  double sum = 0.0;
  for (const auto& c : state.amplitudes)
    sum += std::norm(c);
  return sum;
}

double mutual_information_bits(const TwoPhotonState& state)
{
  const std::size_t na = state.grid_a.size();
  const std::size_t nb = state.grid_b.size();
  std::vector<double> pa(na, 0.0), pb(nb, 0.0);
  for (std::size_t ka = 0; ka < na; ++ka)
    for (std::size_t kb = 0; kb < nb; ++kb)
    {
      const double p = std::norm(state.amplitude(ka, kb));
      pa[ka] += p;
      pb[kb] += p;
    }
  double info = 0.0;
  for (std::size_t ka = 0; ka < na; ++ka)
    for (std::size_t kb = 0; kb < nb; ++kb)
    {
      const double p = std::norm(state.amplitude(ka, kb));
      if (p > 0.0)
        info += p * std::log2(p / (pa[ka] * pb[kb]));
    }
  return std::max(info, 0.0);
}

double shell_angle(const TwoPhotonState& state, std::size_t ka, std::size_t kb,
                   const ExperimentConfig& cfg)
{
  check_indices(state, ka, kb);
  if (!cfg.lambda_p)
    throw Error(ErrorCode::MissingPumpWavelength, "shell angle needs lambda_p");
  const Transverse ta = transverse(state.grid_a, ka);
  const Transverse tb = transverse(state.grid_b, kb);
  return std::hypot(ta.x + tb.x, ta.y + tb.y) * *cfg.lambda_p / kTwoPi;
}

SuperposedState superpose_sources(const TwoPhotonState& state, const ExperimentConfig& cfg)
{
  require_valid(cfg);
  const double total = total_probability(state);
  if (std::abs(total - 1.0) > 1e-10)
    throw Error(ErrorCode::ValidationError, "base state is not normalized");

  SuperposedState out;
  out.base = state;
  out.alpha1 = cfg.alpha1();
  out.alpha2 = cfg.alpha2();
  out.phi_b = cfg.phi_b;
  out.phase_a.resize(state.grid_a.size());
  out.excess_a.resize(state.grid_a.size());
  for (std::size_t ka = 0; ka < state.grid_a.size(); ++ka)
  {
    const double theta = state.grid_a.theta_of(ka);
    out.phase_a[ka] = phase_a(theta, cfg);
    out.excess_a[ka] = excess_phase_a(theta, cfg);
  }
  return out;
}

} // namespace twinfringe
