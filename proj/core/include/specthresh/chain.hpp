#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "specthresh/basis.hpp"

namespace specthresh {

/// Ornstein-Uhlenbeck parameters for dY = -theta Y dt + sigma dW, observed at unit
/// time steps and wrapped onto [0, period).
struct OuParams {
  double theta = 2.0;
  double sigma = 2.0;
  double period = kTwoPi;

  void validate() const;

  /// e^{-theta}, the one-step autoregression coefficient.
  double decay() const;
  /// sigma^2 (1 - e^{-2 theta}) / (2 theta), the one-step innovation variance.
  double step_variance() const;
  /// sigma^2 / (2 theta), the stationary variance of the unwrapped process.
  double stationary_variance() const;

  friend bool operator==(const OuParams&, const OuParams&) = default;
};

struct StationaryStart {
  friend bool operator==(const StationaryStart&, const StationaryStart&) = default;
};
struct FixedStart {
  double x0 = 0.5;
  friend bool operator==(const FixedStart&, const FixedStart&) = default;
};
using InitMode = std::variant<StationaryStart, FixedStart>;

/// Observations X_0..X_n of a chain on [0, period)^dim, stored row-major.
class Trajectory {
 public:
  Trajectory(std::size_t dim, std::vector<double> coords, double period = kTwoPi,
             std::uint64_t seed = 0, std::optional<OuParams> params = std::nullopt);

  std::size_t dim() const { return dim_; }
  std::size_t length() const { return coords_.size() / dim_; }
  /// Number of observed transitions n (length - 1).
  std::size_t transitions() const { return length() - 1; }
  double period() const { return period_; }
  std::uint64_t seed() const { return seed_; }
  /// Generating parameters, or nullopt for externally supplied chains.
  const std::optional<OuParams>& params() const { return params_; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  std::span<const double> coords() const { return coords_; }

 private:
  std::size_t dim_;
  std::vector<double> coords_;
  double period_;
  std::uint64_t seed_;
  std::optional<OuParams> params_;
};

/// x mod period, in [0, period).
double wrap(double x, double period);
std::vector<double> wrap(std::span<const double> x, double period);

/// Unwrapped exact OU path Y_0..Y_n: Y_{i+1} = Y_i e^{-theta} + xi_i with
/// xi_i ~ N(0, step_variance). Y_0 ~ N(0, stationary_variance) or the fixed value.
std::vector<double> simulate_ou_unwrapped(const OuParams& params, std::size_t n,
                                          const InitMode& init, std::uint64_t seed);

/// simulate_ou_unwrapped followed by wrap onto [0, period).
Trajectory simulate_ou(const OuParams& params, std::size_t n, const InitMode& init,
                       std::uint64_t seed);

/// Seed of substream `stream` under `master`. Stable across platforms; used to give
/// every replication its own generator independently of scheduling.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace specthresh
