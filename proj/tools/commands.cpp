#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

#include "specthresh/basis.hpp"
#include "specthresh/error.hpp"
#include "specthresh/estimator.hpp"
#include "specthresh/io.hpp"
#include "specthresh/oracle.hpp"

namespace specthresh::cli {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw InputError("cannot create directory " + path.parent_path().string());
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot write " + path.string());
  return os;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto os = open_output(path);
  os << text;
  if (!os) throw InputError("write failed for " + path.string());
}

Trajectory load_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read trajectory " + path.string());
  return io::read_trajectory_csv(in);
}

std::string list_json(const std::vector<double>& values) {
  std::string s = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ", ";
    s += io::format_number(values[i]);
  }
  return s + "]";
}

std::string slope_text(double slope) {
  return std::isnan(slope) ? std::string("NaN") : io::format_number(slope);
}

}  // namespace

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw InvalidArgument("--format must be csv or json, got '" + text + "'");
}

void run_simulate(const SimulateOptions& opts, std::ostream& log) {
  opts.params.validate();
  require(opts.n >= 1, "--n must be at least 1");
  const Trajectory traj = simulate_ou(opts.params, opts.n, opts.init, opts.seed);
  {
    auto os = open_output(opts.out);
    io::write_trajectory_csv(os, traj);
  }
  const auto coords = traj.coords();
  const auto [lo, hi] = std::minmax_element(coords.begin(), coords.end());
  log << fmt::format("n={} points={} min={} max={} seed={} out={}\n", opts.n, traj.length(),
                     io::format_number(*lo), io::format_number(*hi), opts.seed,
                     opts.out.string());
}

void run_estimate(const EstimateOptions& opts, std::ostream& log) {
  const Trajectory traj = load_trajectory(opts.input);
  EstimatorConfig cfg;
  cfg.basis = BasisSpec{traj.dim(), opts.m, traj.period()};
  cfg.alpha = opts.alpha;
  cfg.gram_rcond = opts.gram_rcond;
  cfg.tau = opts.tau;
  cfg.validate();
  const Estimate est = estimate(traj, cfg);

  std::vector<std::filesystem::path> written;
  const auto emit_matrix = [&](const CoeffMatrix& m, const std::string& stem) {
    if (opts.format == Format::Json) {
      const auto path = opts.out / (stem + ".json");
      write_text(path, io::matrix_json(m) + "\n");
      written.push_back(path);
    } else {
      const auto path = opts.out / (stem + ".csv");
      auto os = open_output(path);
      io::write_matrix_csv(os, m);
      written.push_back(path);
    }
  };
  emit_matrix(est.p_tilde, "p_tilde");
  if (opts.tau > 1) emit_matrix(power_estimator(est.p_tilde, opts.tau), fmt::format("p_tilde_tau{}", opts.tau));
  const auto report_path = opts.out / "report.json";
  write_text(report_path, io::report_json(est.report, &est.gram) + "\n");
  written.push_back(report_path);

  log << fmt::format("n={} m={} alpha={} rank={} gram_ill_conditioned={}\n", traj.transitions(),
                     opts.m, io::format_number(opts.alpha), est.report.rank(),
                     est.gram.ill_conditioned ? "true" : "false");
  for (const auto& p : written) log << "wrote " << p.string() << "\n";
}

void run_experiment(const ExperimentOptions& opts, std::ostream& log) {
  opts.config.validate();
  const LossTable table = run_table(opts.config);
  const auto csv_path = opts.out / "loss_table.csv";
  {
    auto os = open_output(csv_path);
    io::write_loss_table_csv(os, table);
  }
  const auto json_path = opts.out / "loss_table.json";
  write_text(json_path, io::loss_table_json(table) + "\n");
  log << fmt::format("cells={} replications={} seed={}\n", table.cells.size(),
                     opts.config.replications, opts.config.master_seed);
  log << "wrote " << csv_path.string() << "\nwrote " << json_path.string() << "\n";
}

void run_figure(const FigureOptions& opts, std::ostream& log) {
  const FigurePanels panels = figure_panels(opts.config);
  const std::pair<const char*, const DensityGrid*> files[] = {
      {"grid_true.csv", &panels.truth},
      {"grid_projected.csv", &panels.projected},
      {"grid_nonthresholded.csv", &panels.plain},
      {"grid_thresholded.csv", &panels.thresholded},
  };
  for (const auto& [name, grid] : files) {
    const auto path = opts.out / name;
    auto os = open_output(path);
    io::write_grid_csv(os, *grid);
    log << "wrote " << path.string() << "\n";
  }
  log << fmt::format("distance_nonthresholded={} distance_thresholded={}\n",
                     io::format_number(grid_distance(panels.plain, panels.truth)),
                     io::format_number(grid_distance(panels.thresholded, panels.truth)));
}

void run_spectrum(const SpectrumOptions& opts, std::ostream& log) {
  const int sources = int(opts.input.has_value()) + int(opts.oracle) + int(opts.uniform);
  require(sources == 1, "spectrum needs exactly one of --input, --oracle, --uniform");
  require(opts.fit >= 2, "--fit must be at least 2");

  std::string source;
  std::vector<double> values;
  if (opts.input) {
    const Trajectory traj = load_trajectory(*opts.input);
    const BasisSpec spec{traj.dim(), opts.m, traj.period()};
    spec.validate();
    values = singular_values(accumulate_R(traj, spec).entries);
    source = "empirical_R";
  } else if (opts.oracle) {
    const auto g = ou_oracle(opts.params, BasisSpec{1, opts.m}, opts.quadrature,
                             OuKernel::WrappedTransition, opts.lattice_halfwidth);
    values = singular_values(g.P.entries);
    source = "oracle_P";
  } else {
    const BasisSpec spec{1, opts.m};
    spec.validate();
    const TrigonometricBasis basis(spec);
    const double c = 1.0 / kTwoPi;
    const auto g = oracle_galerkin([c](auto, auto) { return c; }, [c](auto) { return c; },
                                   basis, opts.quadrature);
    values = singular_values(g.P.entries);
    source = "uniform_P";
  }
  const std::size_t k = std::min(opts.fit, values.size());
  // Values at round-off level relative to the leading one are zeros, not decay.
  std::vector<double> fitted(values.begin(), values.begin() + static_cast<long>(k));
  const double floor = values.empty() ? 0.0 : 1e-12 * values.front();
  for (double& v : fitted)
    if (v <= floor) v = 0.0;
  const double slope = log_decay_slope(fitted);

  std::ostringstream text;
  if (opts.format == Format::Json) {
    text << "{\"source\": \"" << source << "\", \"m\": " << opts.m
         << ", \"singular_values\": " << list_json(values) << ", \"fit_count\": " << k
         << ", \"slope\": " << (std::isnan(slope) ? std::string("null") : io::format_number(slope))
         << "}\n";
  } else {
    text << "# source=" << source << " m=" << opts.m << " fit_count=" << k
         << " slope=" << slope_text(slope) << "\n";
    text << "k,singular_value\n";
    for (std::size_t i = 0; i < values.size(); ++i)
      text << (i + 1) << "," << io::format_number(values[i]) << "\n";
  }
  if (opts.out) {
    write_text(*opts.out, text.str());
    log << fmt::format("slope={} fit_count={}\nwrote {}\n", slope_text(slope), k,
                       opts.out->string());
  } else {
    log << text.str();
  }
}

}  // namespace specthresh::cli
