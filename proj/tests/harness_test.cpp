#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "specthresh/error.hpp"
#include "specthresh/estimator.hpp"
#include "specthresh/harness.hpp"
#include "specthresh/oracle.hpp"

using namespace specthresh;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.params = OuParams{2.0, 2.0};
  cfg.n_values = {1000};
  cfg.rows = {{3, 0.0}, {5, 0.2}};
  cfg.replications = 20;
  cfg.master_seed = 99;
  cfg.truth_block = 30;
  return cfg;
}

const CoeffMatrix& truth30() {
  static const CoeffMatrix truth = truth_coefficients(small_config());
  return truth;
}

}  // namespace

TEST(EuclideanLoss, Examples) {
  const CoeffMatrix& truth = truth30();
  EXPECT_EQ(euclidean_loss(truth, truth), 0.0);
  EXPECT_NEAR(euclidean_loss(CoeffMatrix::zero(BasisSpec{1, 4}), truth), truth.entries.norm(), 1e-14);

  CoeffMatrix block(truth.entries.topLeftCorner(4, 4), BasisSpec{1, 4});
  const double tail = std::sqrt(truth.entries.squaredNorm() - block.entries.squaredNorm());
  EXPECT_NEAR(euclidean_loss(block, truth), tail, 1e-12);

  EXPECT_THROW(euclidean_loss(CoeffMatrix::zero(BasisSpec{1, 31}), truth), InvalidArgument);
}

TEST(EuclideanLoss, EmbedsByPerAxisIndex) {
  // On the 2-torus, flat index 3 of a 2x2 basis is (1,1), which is flat 4 of a 3x3 basis.
  CoeffMatrix small = CoeffMatrix::zero(BasisSpec{2, 2});
  small.entries(3, 3) = 1.0;
  CoeffMatrix big = CoeffMatrix::zero(BasisSpec{2, 3});
  big.entries(4, 4) = 1.0;
  EXPECT_EQ(euclidean_loss(small, big), 0.0);
}

TEST(Truth, BlockIsNestedAcrossSizes) {
  ExperimentConfig cfg = small_config();
  cfg.truth_block = 6;
  const CoeffMatrix t6 = truth_coefficients(cfg);
  EXPECT_LT((t6.entries - truth30().entries.topLeftCorner(6, 6)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RunCell, DeterministicChainHasZeroSpread) {
  ExperimentConfig cfg = small_config();
  cfg.params.sigma = 0.0;
  cfg.init = FixedStart{0.5};
  cfg.replications = 1;
  const CellStats s = run_cell(cfg, truth30(), 50, 3, 0.0);
  EXPECT_EQ(s.sd_loss, 0.0);
  EXPECT_EQ(s.replications, 1U);
}

TEST(RunCell, ReferenceCellFirstRow) {
  ExperimentConfig cfg = small_config();
  cfg.replications = 100;
  const CellStats s = run_cell(cfg, truth30(), 1000, 3, 0.0);
  EXPECT_NEAR(s.mean_loss, 0.5118, 0.06);
  EXPECT_EQ(s.losses.size(), 100U);
}

TEST(RunCell, LossBoundedBelowByProjectionBias) {
  ExperimentConfig cfg = small_config();
  cfg.replications = 50;
  for (std::size_t m : {3U, 5U}) {
    const CellStats s = run_cell(cfg, truth30(), 1000, m, 0.0);
    const CoeffMatrix block(truth30().entries.topLeftCorner(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)),
                            BasisSpec{1, m});
    const double bias = euclidean_loss(block, truth30());
    EXPECT_GE(s.mean_loss, bias - 2.0 * s.sd_loss) << "m=" << m;
  }
}

TEST(RunTable, SingleCellReducesToRunCell) {
  ExperimentConfig cfg = small_config();
  cfg.rows = {{4, 0.1}};
  const LossTable t = run_table(cfg, truth30());
  ASSERT_EQ(t.cells.size(), 1U);
  const CellStats s = run_cell(cfg, truth30(), 1000, 4, 0.1);
  EXPECT_EQ(t.cells[0].mean_loss, s.mean_loss);
  EXPECT_EQ(t.cells[0].sd_loss, s.sd_loss);
  EXPECT_EQ(t.cells[0].mean_rank, s.mean_rank);
}

TEST(RunTable, IndependentOfThreadCount) {
  ExperimentConfig cfg = small_config();
  cfg.n_values = {300, 700};
  cfg.rows = {{3, 0.0}, {4, 0.1}, {5, 0.05}};
  cfg.threads = 1;
  const LossTable a = run_table(cfg, truth30());
  cfg.threads = 4;
  const LossTable b = run_table(cfg, truth30());
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].cell, b.cells[i].cell);
    EXPECT_EQ(a.cells[i].losses, b.cells[i].losses);
    EXPECT_EQ(a.cells[i].ranks, b.cells[i].ranks);
    EXPECT_EQ(a.cells[i].mean_loss, b.cells[i].mean_loss);
  }
}

TEST(RunTable, CartesianGridWhenNoRows) {
  ExperimentConfig cfg = small_config();
  cfg.rows.clear();
  cfg.m_values = {3, 4};
  cfg.alpha_values = {0.0, 0.1, 0.2};
  cfg.n_values = {200, 400};
  cfg.replications = 2;
  const auto cells = cfg.cells();
  EXPECT_EQ(cells.size(), 12U);
  const LossTable t = run_table(cfg, truth30());
  EXPECT_EQ(t.cells.size(), 12U);
  for (const auto& c : cells) EXPECT_NE(t.find(c.n, c.m, c.alpha), nullptr);
}

TEST(RunTable, ErrorsNameTheCell) {
  ExperimentConfig cfg = small_config();
  cfg.rows = {{3, 0.0}};
  cfg.truth_block = 30;
  // Truth block smaller than the estimate triggers an error inside a replication.
  const CoeffMatrix tiny = CoeffMatrix::zero(BasisSpec{1, 2});
  try {
    run_table(cfg, tiny);
    FAIL() << "expected an error";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("n=1000, m=3"), std::string::npos) << e.what();
  }
}

TEST(ExperimentConfig, Validation) {
  ExperimentConfig cfg = small_config();
  cfg.rows = {{31, 0.0}};
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = small_config();
  cfg.replications = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = small_config();
  cfg.rows = {{3, -0.1}};
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = small_config();
  cfg.n_values.clear();
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(LossTableConfig, Shape) {
  const ExperimentConfig cfg = table1_config();
  EXPECT_EQ(cfg.parameter_rows().size(), 16U);
  EXPECT_EQ(cfg.n_values, (std::vector<std::size_t>{1000, 3000, 6000}));
  EXPECT_EQ(cfg.cells().size(), 48U);
  EXPECT_EQ(cfg.replications, 100U);
  EXPECT_EQ(cfg.truth_block, 30U);
}

TEST(RankDiagnostic, HugeThresholdGivesRankZero) {
  const auto hist = rank_diagnostic(small_config(), 1000, 5, 1e3);
  ASSERT_EQ(hist.size(), 1U);
  EXPECT_EQ(hist.begin()->first, 0U);
  EXPECT_EQ(hist.begin()->second, 20U);
}

TEST(RankDiagnostic, OperatingPointModeIsSmall) {
  ExperimentConfig cfg = small_config();
  cfg.replications = 100;
  const auto hist = rank_diagnostic(cfg, 1000, 5, 0.2);
  const auto mode = std::max_element(hist.begin(), hist.end(),
                                     [](auto a, auto b) { return a.second < b.second; });
  EXPECT_TRUE(mode->first == 1U || mode->first == 2U) << "mode rank " << mode->first;
}

TEST(RankDiagnostic, SupportShrinksWithAlpha) {
  std::size_t previous_max = 100;
  for (double alpha : {0.0, 0.01, 0.05, 0.1, 0.2, 0.5}) {
    const auto hist = rank_diagnostic(small_config(), 1000, 5, alpha);
    const std::size_t max_rank = hist.rbegin()->first;
    EXPECT_LE(max_rank, previous_max) << "alpha=" << alpha;
    previous_max = max_rank;
  }
}

TEST(DensityGrid, ConstantCoefficients) {
  CoeffMatrix e00 = CoeffMatrix::zero(BasisSpec{1, 3});
  e00.entries(0, 0) = 1.0;
  const DensityGrid g = density_grid(e00, 16);
  EXPECT_EQ(g.x.size(), 16U);
  EXPECT_LT((g.values.array() - 1.0 / kTwoPi).abs().maxCoeff(), 1e-15);
  EXPECT_THROW(density_grid(e00, 1), InvalidArgument);
}

TEST(DensityGrid, MatchesPointwiseEvaluation) {
  const CoeffMatrix& truth = truth30();
  const CoeffMatrix block(truth.entries.topLeftCorner(5, 5), BasisSpec{1, 5});
  const DensityGrid g = density_grid(block, 8);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j)
      EXPECT_NEAR(g.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)),
                  density_from_coeffs(block, std::vector<double>{g.x[i]}, std::vector<double>{g.y[j]}),
                  1e-13);
}

TEST(DensityGrid, OracleRowsIntegrateToOne) {
  const WrappedDensity dens{OuParams{2.0, 2.0}, 10};
  const std::size_t res = 256;
  const DensityGrid g =
      density_grid([&](double x, double y) { return ou_transition_density(dens, x, y); }, res);
  for (Eigen::Index i = 0; i < g.values.cols(); ++i)
    EXPECT_NEAR(g.values.col(i).sum() * kTwoPi / static_cast<double>(res), 1.0, 5e-3);
}

TEST(FigurePanels, ThresholdingReducesNoiseForMostSeeds) {
  FigureConfig cfg;
  cfg.resolution = 64;
  int thresholded_wins = 0;
  const int seeds = 15;
  for (int seed = 1; seed <= seeds; ++seed) {
    cfg.seed = static_cast<std::uint64_t>(seed);
    const FigurePanels p = figure_panels(cfg);
    ASSERT_EQ(p.truth.values.rows(), 64);
    ASSERT_EQ(p.plain.values.cols(), 64);
    if (grid_distance(p.thresholded, p.truth) < grid_distance(p.plain, p.truth)) ++thresholded_wins;
  }
  EXPECT_GT(thresholded_wins, seeds / 2);
}
