#include "specthresh/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fmt/format.h>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include "specthresh/error.hpp"
#include "specthresh/estimator.hpp"
#include "specthresh/oracle.hpp"

namespace specthresh {

namespace {

// Runs body(i) for i in [0, count) on up to `threads` workers. The first exception
// thrown by any job is rethrown after all workers have stopped.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        while (!failed.load()) {
          const std::size_t i = next.fetch_add(1);
          if (i >= count) return;
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed.store(true);
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

std::string describe(const CellSpec& c) {
  return fmt::format("cell (n={}, m={}, alpha={})", c.n, c.m, c.alpha);
}

struct ReplicationResult {
  double loss = 0.0;
  std::size_t rank = 0;
};

// Simulates one chain and evaluates every parameter row on it.
std::vector<ReplicationResult> run_replication(const ExperimentConfig& cfg,
                                               const CoeffMatrix& truth,
                                               const std::vector<ParameterRow>& rows,
                                               std::size_t n, std::size_t rep) {
  const auto rethrow = [&](const Error& e, const std::string& where) -> void {
    if (dynamic_cast<const NumericalError*>(&e) != nullptr) throw NumericalError(where);
    if (dynamic_cast<const InputError*>(&e) != nullptr) throw InputError(where);
    throw InvalidArgument(where);
  };
  std::optional<Trajectory> sim;
  try {
    sim.emplace(simulate_ou(cfg.params, n, cfg.init, replication_seed(cfg.master_seed, n, rep)));
  } catch (const Error& e) {
    rethrow(e, fmt::format("chain (n={}), replication {}: {}", n, rep, e.what()));
  }
  const Trajectory& traj = *sim;
  std::map<std::size_t, EmpiricalGalerkin> by_m;
  std::vector<ReplicationResult> out;
  out.reserve(rows.size());
  for (const ParameterRow& row : rows) {
    try {
      auto it = by_m.find(row.m);
      if (it == by_m.end()) {
        const TrigonometricBasis basis(BasisSpec{1, row.m, cfg.params.period});
        it = by_m.emplace(row.m, accumulate(traj, basis)).first;
      }
      const Estimate est = estimate(it->second, row.alpha, cfg.gram_rcond);
      out.push_back({euclidean_loss(est.p_tilde, truth), est.report.rank()});
    } catch (const Error& e) {
      rethrow(e, describe({n, row.m, row.alpha}) + fmt::format(", replication {}: ", rep) + e.what());
    }
  }
  return out;
}

CellStats summarize(const CellSpec& cell, std::vector<double> losses,
                    std::vector<std::size_t> ranks) {
  CellStats s;
  s.cell = cell;
  s.replications = losses.size();
  const double count = static_cast<double>(losses.size());
  double sum = 0.0;
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    sum += losses[i];
    rank_sum += static_cast<double>(ranks[i]);
  }
  s.mean_loss = sum / count;
  s.mean_rank = rank_sum / count;
  double ss = 0.0;
  for (double l : losses) ss += (l - s.mean_loss) * (l - s.mean_loss);
  s.sd_loss = losses.size() > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
  s.losses = std::move(losses);
  s.ranks = std::move(ranks);
  return s;
}

LossTable run_rows(const ExperimentConfig& cfg, const CoeffMatrix& truth,
                   const std::vector<std::size_t>& n_values,
                   const std::vector<ParameterRow>& rows) {
  cfg.validate();
  const std::size_t reps = cfg.replications;
  const std::size_t jobs = n_values.size() * reps;
  // results[job][row], job = n_index * reps + rep.
  std::vector<std::vector<ReplicationResult>> results(jobs);
  parallel_for(jobs, cfg.threads, [&](std::size_t job) {
    const std::size_t n = n_values[job / reps];
    results[job] = run_replication(cfg, truth, rows, n, job % reps);
  });

  LossTable table;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
      std::vector<double> losses(reps);
      std::vector<std::size_t> ranks(reps);
      for (std::size_t rep = 0; rep < reps; ++rep) {
        losses[rep] = results[ni * reps + rep][r].loss;
        ranks[rep] = results[ni * reps + rep][r].rank;
      }
      table.cells.push_back(summarize({n_values[ni], rows[r].m, rows[r].alpha},
                                      std::move(losses), std::move(ranks)));
    }
  }
  return table;
}

}  // namespace

void ExperimentConfig::validate() const {
  params.validate();
  require(!n_values.empty(), "experiment needs at least one n value");
  for (std::size_t n : n_values) require(n >= 1, "every n must be at least 1");
  require(replications >= 1, "replications must be at least 1");
  require(truth_block >= 1, "truth block must be positive");
  const auto all_rows = parameter_rows();
  require(!all_rows.empty(), "experiment needs at least one (m, alpha) row");
  for (const ParameterRow& row : all_rows) {
    require(row.m >= 1, "every m must be at least 1");
    require(row.m <= truth_block, fmt::format("m = {} exceeds truth block {}", row.m, truth_block));
    require(std::isfinite(row.alpha) && row.alpha >= 0.0, "every alpha must be non-negative");
  }
  require(gram_rcond > 0.0 && gram_rcond < 1.0, "gram_rcond must lie in (0, 1)");
  require(lattice_halfwidth >= 1, "lattice halfwidth must be at least 1");
  if (const auto* fixed = std::get_if<FixedStart>(&init))
    require(std::isfinite(fixed->x0), "initial state must be finite");
}

std::vector<ParameterRow> ExperimentConfig::parameter_rows() const {
  if (!rows.empty()) return rows;
  std::vector<ParameterRow> out;
  for (std::size_t m : m_values)
    for (double alpha : alpha_values) out.push_back({m, alpha});
  return out;
}

std::vector<CellSpec> ExperimentConfig::cells() const {
  std::vector<CellSpec> out;
  for (const ParameterRow& row : parameter_rows())
    for (std::size_t n : n_values) out.push_back({n, row.m, row.alpha});
  return out;
}

const CellStats* LossTable::find(std::size_t n, std::size_t m, double alpha) const {
  for (const CellStats& c : cells)
    if (c.cell.n == n && c.cell.m == m && c.cell.alpha == alpha) return &c;
  return nullptr;
}

std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t n, std::size_t rep) {
  return substream_seed(substream_seed(master_seed, n), rep);
}

CoeffMatrix truth_coefficients(const ExperimentConfig& cfg) {
  const BasisSpec spec{1, cfg.truth_block, cfg.params.period};
  QuadratureGrid grid = cfg.quadrature;
  grid.period = cfg.params.period;
  return ou_oracle(cfg.params, spec, grid, OuKernel::WrappedTransition, cfg.lattice_halfwidth).P;
}

double euclidean_loss(const CoeffMatrix& estimate, const CoeffMatrix& truth) {
  const BasisSpec& es = estimate.basis;
  const BasisSpec& ts = truth.basis;
  require(es.dim == ts.dim, "estimate and truth live on tori of different dimension");
  if (es.size_per_axis > ts.size_per_axis)
    throw InvalidArgument(fmt::format("estimate uses {} functions per axis but truth block has only {}",
                                      es.size_per_axis, ts.size_per_axis));
  const IndexMap from(es);
  const IndexMap to(ts);
  std::vector<Eigen::Index> embed(from.size());
  for (std::size_t i = 0; i < from.size(); ++i)
    embed[i] = static_cast<Eigen::Index>(to.to_flat(from.from_flat(i).per_axis));

  Eigen::MatrixXd diff = truth.entries;
  for (std::size_t i = 0; i < from.size(); ++i)
    for (std::size_t j = 0; j < from.size(); ++j)
      diff(embed[i], embed[j]) -= estimate.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return diff.norm();
}

CellStats run_cell(const ExperimentConfig& cfg, const CoeffMatrix& truth, std::size_t n,
                   std::size_t m, double alpha) {
  LossTable t = run_rows(cfg, truth, {n}, {{m, alpha}});
  return std::move(t.cells.front());
}

CellStats run_cell(const ExperimentConfig& cfg, std::size_t n, std::size_t m, double alpha) {
  return run_cell(cfg, truth_coefficients(cfg), n, m, alpha);
}

LossTable run_table(const ExperimentConfig& cfg, const CoeffMatrix& truth) {
  return run_rows(cfg, truth, cfg.n_values, cfg.parameter_rows());
}

LossTable run_table(const ExperimentConfig& cfg) {
  cfg.validate();
  return run_table(cfg, truth_coefficients(cfg));
}

std::map<std::size_t, std::size_t> rank_diagnostic(const ExperimentConfig& cfg, std::size_t n,
                                                   std::size_t m, double alpha) {
  ExperimentConfig local = cfg;
  local.truth_block = std::max(cfg.truth_block, m);
  // Ranks do not depend on the truth block; a zero truth keeps this quadrature-free.
  const CoeffMatrix truth = CoeffMatrix::zero(BasisSpec{1, local.truth_block, cfg.params.period});
  const CellStats s = run_cell(local, truth, n, m, alpha);
  std::map<std::size_t, std::size_t> hist;
  for (std::size_t r : s.ranks) ++hist[r];
  return hist;
}

DensityGrid density_grid(const std::function<double(double, double)>& p,
                         std::size_t resolution, double period) {
  require(resolution >= 2, "grid resolution must be at least 2");
  DensityGrid g;
  const auto res = static_cast<Eigen::Index>(resolution);
  g.x.resize(resolution);
  for (std::size_t i = 0; i < resolution; ++i)
    g.x[i] = period * static_cast<double>(i) / static_cast<double>(resolution);
  g.y = g.x;
  g.values.resize(res, res);
  for (Eigen::Index j = 0; j < res; ++j)
    for (Eigen::Index i = 0; i < res; ++i)
      g.values(j, i) = p(g.x[static_cast<std::size_t>(i)], g.y[static_cast<std::size_t>(j)]);
  return g;
}

DensityGrid density_grid(const CoeffMatrix& coeffs, std::size_t resolution) {
  require(coeffs.basis.dim == 1, "density grids are two-dimensional (d = 1 chains)");
  require(resolution >= 2, "grid resolution must be at least 2");
  const TrigonometricBasis basis(coeffs.basis);
  const double period = coeffs.basis.period;
  // Basis values at every grid coordinate; values = Phi^T P Phi with Phi(:, i) = Psi(x_i).
  const auto res = static_cast<Eigen::Index>(resolution);
  Eigen::MatrixXd phi(coeffs.side(), res);
  DensityGrid g;
  g.x.resize(resolution);
  for (Eigen::Index i = 0; i < res; ++i) {
    const double x = period * static_cast<double>(i) / static_cast<double>(resolution);
    g.x[static_cast<std::size_t>(i)] = x;
    const std::vector<double> v = basis.eval_all(std::span<const double>(&x, 1));
    phi.col(i) = Eigen::Map<const Eigen::VectorXd>(v.data(), coeffs.side());
  }
  g.y = g.x;
  g.values = (phi.transpose() * coeffs.entries * phi).transpose();
  return g;
}

double grid_distance(const DensityGrid& a, const DensityGrid& b) {
  require(a.values.rows() == b.values.rows() && a.values.cols() == b.values.cols(),
          "density grids have different shapes");
  return (a.values - b.values).norm();
}

FigurePanels figure_panels(const FigureConfig& cfg) {
  cfg.params.validate();
  const WrappedDensity dens{cfg.params, cfg.lattice_halfwidth};
  dens.validate();
  FigurePanels panels;
  panels.truth = density_grid(
      [&](double x, double y) { return ou_transition_density(dens, x, y); }, cfg.resolution,
      cfg.params.period);

  QuadratureGrid grid = cfg.quadrature;
  grid.period = cfg.params.period;
  const CoeffMatrix projected =
      ou_oracle(cfg.params, BasisSpec{1, cfg.projected_m, cfg.params.period}, grid,
                OuKernel::WrappedTransition, cfg.lattice_halfwidth)
          .P;
  panels.projected = density_grid(projected, cfg.resolution);

  const Trajectory traj = simulate_ou(cfg.params, cfg.n, cfg.init, cfg.seed);
  auto panel = [&](const ParameterRow& row) {
    EstimatorConfig ec;
    ec.basis = BasisSpec{1, row.m, cfg.params.period};
    ec.alpha = row.alpha;
    ec.gram_rcond = cfg.gram_rcond;
    return density_grid(estimate(traj, ec).p_tilde, cfg.resolution);
  };
  panels.plain = panel(cfg.plain);
  panels.thresholded = panel(cfg.thresholded);
  return panels;
}

ExperimentConfig table1_config() {
  ExperimentConfig cfg;
  cfg.params = OuParams{2.0, 2.0, kTwoPi};
  cfg.n_values = {1000, 3000, 6000};
  cfg.rows = {
      {3, 0.0},  {3, 0.2},  {3, 0.1},                                         //
      {4, 0.0},  {4, 0.2},  {4, 0.1},                                         //
      {5, 0.0},  {5, 0.02}, {5, 0.03}, {5, 0.05}, {5, 0.1}, {5, 0.2},         //
      {6, 0.0},  {6, 0.05}, {6, 0.1},  {6, 0.2},
  };
  cfg.replications = 100;
  cfg.truth_block = 30;
  cfg.init = StationaryStart{};
  return cfg;
}

}  // namespace specthresh
