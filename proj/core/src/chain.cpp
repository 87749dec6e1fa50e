#include "specthresh/chain.hpp"

#include <cmath>
#include <random>
#include <string>

#include "specthresh/error.hpp"

namespace specthresh {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

void OuParams::validate() const {
  require(std::isfinite(theta) && theta > 0.0, "theta must be positive and finite");
  require(std::isfinite(sigma) && sigma >= 0.0, "sigma must be non-negative and finite");
  require(std::isfinite(period) && period > 0.0, "period must be positive and finite");
}

double OuParams::decay() const { return std::exp(-theta); }

double OuParams::step_variance() const {
  return sigma * sigma * (-std::expm1(-2.0 * theta)) / (2.0 * theta);
}

double OuParams::stationary_variance() const { return sigma * sigma / (2.0 * theta); }

Trajectory::Trajectory(std::size_t dim, std::vector<double> coords, double period,
                       std::uint64_t seed, std::optional<OuParams> params)
    : dim_(dim), coords_(std::move(coords)), period_(period), seed_(seed),
      params_(params) {
  if (dim_ == 0) throw InputError("trajectory dimension must be positive");
  if (!(std::isfinite(period_) && period_ > 0.0))
    throw InputError("trajectory period must be positive");
  if (coords_.size() % dim_ != 0)
    throw InputError("trajectory coordinate count is not a multiple of its dimension");
  if (coords_.size() / dim_ < 2)
    throw InputError("trajectory needs at least two observations, got " +
                     std::to_string(coords_.size() / dim_));
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    const double c = coords_[i];
    if (!(std::isfinite(c) && c >= 0.0 && c < period_))
      throw InputError("trajectory coordinate " + std::to_string(i) + " = " +
                       std::to_string(c) + " is outside [0, period)");
  }
}

double wrap(double x, double period) {
  double r = x - period * std::floor(x / period);
  // floor can leave r == period (tiny negative x) or a hair below zero.
  if (r >= period || r < 0.0) r = 0.0;
  return r;
}

std::vector<double> wrap(std::span<const double> x, double period) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = wrap(x[i], period);
  return out;
}

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

std::vector<double> simulate_ou_unwrapped(const OuParams& params, std::size_t n,
                                          const InitMode& init, std::uint64_t seed) {
  params.validate();
  require(n >= 1, "number of transitions must be at least 1");
  if (const auto* fixed = std::get_if<FixedStart>(&init))
    require(std::isfinite(fixed->x0), "initial state must be finite");

  std::mt19937_64 engine(splitmix64(seed));
  std::normal_distribution<double> normal(0.0, 1.0);

  const double a = params.decay();
  const double step_sd = std::sqrt(params.step_variance());

  std::vector<double> path(n + 1);
  if (const auto* fixed = std::get_if<FixedStart>(&init)) {
    path[0] = fixed->x0;
  } else {
    path[0] = std::sqrt(params.stationary_variance()) * normal(engine);
  }
  for (std::size_t i = 0; i < n; ++i) path[i + 1] = path[i] * a + step_sd * normal(engine);
  return path;
}

Trajectory simulate_ou(const OuParams& params, std::size_t n, const InitMode& init,
                       std::uint64_t seed) {
  auto path = simulate_ou_unwrapped(params, n, init, seed);
  for (double& y : path) y = wrap(y, params.period);
  return Trajectory(1, std::move(path), params.period, seed, params);
}

}  // namespace specthresh
