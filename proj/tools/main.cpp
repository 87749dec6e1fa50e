#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "commands.hpp"
#include "config_file.hpp"
#include "specthresh/error.hpp"

namespace {

using namespace specthresh;
using namespace specthresh::cli;

std::string one_line(std::string msg) {
  for (char& c : msg)
    if (c == '\n' || c == '\r') c = ' ';
  return msg;
}

int fail(const char* category, const std::string& msg, int code) {
  std::cerr << "error: " << category << ": " << one_line(msg) << "\n";
  return code;
}

ParameterRow parse_panel(const std::string& text, const char* flag) {
  const auto rows = parse_rows(text);
  if (rows.size() != 1) throw InvalidArgument(std::string(flag) + " takes a single m:alpha pair");
  return rows.front();
}

struct Raw {
  std::string init;
  std::string format = "csv";
  std::string rows;
  std::string plain;
  std::string thresholded;
  std::string config;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral hard-thresholded Galerkin estimation of Markov transition operators"};
  app.require_subcommand(1);

  Raw raw;

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a periodized Ornstein-Uhlenbeck chain");
  simulate->add_option("--theta", sim.params.theta, "Mean reversion rate")->capture_default_str();
  simulate->add_option("--sigma", sim.params.sigma, "Diffusion coefficient")->capture_default_str();
  simulate->add_option("--n", sim.n, "Number of transitions")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Generator seed")->capture_default_str();
  simulate->add_option("--init", raw.init, "stationary or fixed:<x0>")->default_str("stationary");
  simulate->add_option("--out", sim.out, "Trajectory CSV path")->capture_default_str();

  EstimateOptions est;
  auto* estimate_cmd = app.add_subcommand("estimate", "Estimate the transition density from a trajectory");
  estimate_cmd->add_option("--input,input", est.input, "Trajectory CSV")->required();
  estimate_cmd->add_option("--m", est.m, "Basis functions per axis")->capture_default_str();
  estimate_cmd->add_option("--alpha", est.alpha, "Singular value threshold")->capture_default_str();
  estimate_cmd->add_option("--tau", est.tau, "Power of the estimated operator")->capture_default_str();
  estimate_cmd->add_option("--gram-rcond", est.gram_rcond, "Relative eigenvalue cutoff of the Gram inverse")
      ->capture_default_str();
  estimate_cmd->add_option("--out", est.out, "Output directory")->capture_default_str();
  estimate_cmd->add_option("--format", raw.format, "csv or json")->capture_default_str();

  ExperimentOptions exp;
  exp.config = table1_config();
  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo loss table");
  experiment->add_option("--config", raw.config, "key = value manifest; flags override it");
  double e_theta_v = 0.0, e_sigma_v = 0.0;
  auto* e_theta = experiment->add_option("--theta", e_theta_v, "Mean reversion rate");
  auto* e_sigma = experiment->add_option("--sigma", e_sigma_v, "Diffusion coefficient");
  std::vector<std::size_t> e_n, e_m;
  std::vector<double> e_alpha;
  auto* e_n_opt = experiment->add_option("--n", e_n, "Sample sizes, comma separated")->delimiter(',');
  auto* e_m_opt = experiment->add_option("--m", e_m, "Basis sizes, comma separated")->delimiter(',');
  auto* e_alpha_opt = experiment->add_option("--alpha", e_alpha, "Thresholds, comma separated")->delimiter(',');
  auto* e_rows = experiment->add_option("--rows", raw.rows, "Explicit m:alpha rows, comma separated");
  std::size_t e_reps = 0, e_truth = 0, e_nodes = 0;
  std::uint64_t e_seed = 0;
  unsigned e_threads = 0;
  auto* e_reps_opt = experiment->add_option("--reps", e_reps, "Replications per cell");
  auto* e_seed_opt = experiment->add_option("--seed", e_seed, "Master seed");
  auto* e_init = experiment->add_option("--init", raw.init, "stationary or fixed:<x0>");
  auto* e_truth_opt = experiment->add_option("--truth-block", e_truth, "Truth coefficients per axis");
  auto* e_nodes_opt = experiment->add_option("--quad-nodes", e_nodes, "Quadrature nodes per axis");
  auto* e_threads_opt = experiment->add_option("--threads", e_threads, "Worker threads, 0 for all cores")
                            ->envname("SPECTHRESH_THREADS");
  experiment->add_option("--out", exp.out, "Output directory")->capture_default_str();

  FigureOptions fig;
  auto* figure = app.add_subcommand("figure-data", "Emit the four density panels as grid CSVs");
  figure->add_option("--theta", fig.config.params.theta, "Mean reversion rate")->capture_default_str();
  figure->add_option("--sigma", fig.config.params.sigma, "Diffusion coefficient")->capture_default_str();
  figure->add_option("--n", fig.config.n, "Number of transitions")->capture_default_str();
  figure->add_option("--seed", fig.config.seed, "Generator seed")->capture_default_str();
  figure->add_option("--init", raw.init, "stationary or fixed:<x0>")->default_str("fixed:0.5");
  figure->add_option("--resolution", fig.config.resolution, "Grid points per axis")->capture_default_str();
  figure->add_option("--projected-m", fig.config.projected_m, "Basis size of the projected panel")
      ->capture_default_str();
  figure->add_option("--plain", raw.plain, "m:alpha of the non-thresholded panel")->default_str("3:0");
  figure->add_option("--thresholded", raw.thresholded, "m:alpha of the thresholded panel")
      ->default_str("4:0.2");
  figure->add_option("--quad-nodes", fig.config.quadrature.nodes_per_axis, "Quadrature nodes per axis")
      ->capture_default_str();
  figure->add_option("--out", fig.out, "Output directory")->capture_default_str();

  SpectrumOptions spec;
  auto* spectrum = app.add_subcommand("spectrum", "Singular values of an empirical or oracle matrix");
  spectrum->add_option("--input", spec.input, "Trajectory CSV; reports singular values of R");
  spectrum->add_flag("--oracle", spec.oracle, "Use the quadrature oracle P of the OU kernel");
  spectrum->add_flag("--uniform", spec.uniform, "Use the oracle P of the uniform kernel");
  spectrum->add_option("--theta", spec.params.theta, "Mean reversion rate")->capture_default_str();
  spectrum->add_option("--sigma", spec.params.sigma, "Diffusion coefficient")->capture_default_str();
  spectrum->add_option("--m", spec.m, "Basis functions per axis")->capture_default_str();
  spectrum->add_option("--fit", spec.fit, "Leading singular values used in the slope fit")
      ->capture_default_str();
  spectrum->add_option("--quad-nodes", spec.quadrature.nodes_per_axis, "Quadrature nodes per axis")
      ->capture_default_str();
  spectrum->add_option("--out", spec.out, "Write the report here instead of stdout");
  spectrum->add_option("--format", raw.format, "csv or json")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  try {
    if (*simulate) {
      if (!raw.init.empty()) sim.init = parse_init(raw.init);
      run_simulate(sim, std::cout);
    } else if (*estimate_cmd) {
      est.format = parse_format(raw.format);
      run_estimate(est, std::cout);
    } else if (*experiment) {
      ExperimentConfig& cfg = exp.config;
      if (!raw.config.empty()) apply(KeyValueFile::load(raw.config), cfg);
      if (e_theta->count()) cfg.params.theta = e_theta_v;
      if (e_sigma->count()) cfg.params.sigma = e_sigma_v;
      if (e_n_opt->count()) cfg.n_values = e_n;
      if (e_m_opt->count()) cfg.m_values = e_m;
      if (e_alpha_opt->count()) cfg.alpha_values = e_alpha;
      if ((e_m_opt->count() || e_alpha_opt->count()) && !e_rows->count()) cfg.rows.clear();
      if (e_rows->count()) cfg.rows = parse_rows(raw.rows);
      if (e_reps_opt->count()) cfg.replications = e_reps;
      if (e_seed_opt->count()) cfg.master_seed = e_seed;
      if (e_init->count()) cfg.init = parse_init(raw.init);
      if (e_truth_opt->count()) cfg.truth_block = e_truth;
      if (e_nodes_opt->count()) cfg.quadrature.nodes_per_axis = e_nodes;
      if (e_threads_opt->count()) cfg.threads = e_threads;
      run_experiment(exp, std::cout);
    } else if (*figure) {
      if (!raw.init.empty()) fig.config.init = parse_init(raw.init);
      if (!raw.plain.empty()) fig.config.plain = parse_panel(raw.plain, "--plain");
      if (!raw.thresholded.empty()) fig.config.thresholded = parse_panel(raw.thresholded, "--thresholded");
      run_figure(fig, std::cout);
    } else if (*spectrum) {
      spec.format = parse_format(raw.format);
      run_spectrum(spec, std::cout);
    }
  } catch (const InvalidArgument& e) {
    return fail("usage", e.what(), 2);
  } catch (const InputError& e) {
    return fail("input", e.what(), 3);
  } catch (const NumericalError& e) {
    return fail("numerical", e.what(), 4);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
  return 0;
}
