#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "specthresh/chain.hpp"
#include "specthresh/harness.hpp"

namespace specthresh::cli {

enum class Format { Csv, Json };

Format parse_format(const std::string& text);

struct SimulateOptions {
  OuParams params{2.0, 2.0};
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  InitMode init = StationaryStart{};
  std::filesystem::path out = "trajectory.csv";
};

struct EstimateOptions {
  std::filesystem::path input;
  std::size_t m = 4;
  double alpha = 0.0;
  unsigned tau = 1;
  double gram_rcond = 1e-10;
  std::filesystem::path out = ".";
  Format format = Format::Csv;
};

struct ExperimentOptions {
  ExperimentConfig config;
  std::filesystem::path out = ".";
};

struct FigureOptions {
  FigureConfig config;
  std::filesystem::path out = ".";
};

struct SpectrumOptions {
  std::optional<std::filesystem::path> input;
  bool oracle = false;
  bool uniform = false;
  OuParams params{2.0, 2.0};
  std::size_t m = 16;
  std::size_t fit = 4;
  QuadratureGrid quadrature{};
  int lattice_halfwidth = 10;
  std::optional<std::filesystem::path> out;
  Format format = Format::Csv;
};

void run_simulate(const SimulateOptions& opts, std::ostream& log);
void run_estimate(const EstimateOptions& opts, std::ostream& log);
void run_experiment(const ExperimentOptions& opts, std::ostream& log);
void run_figure(const FigureOptions& opts, std::ostream& log);
void run_spectrum(const SpectrumOptions& opts, std::ostream& log);

}  // namespace specthresh::cli
