#include "belllab/montecarlo.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "builders.hpp"

namespace belllab {
namespace {

SuperdetModel readout_constrained(std::uint32_t n) {
  return make_constrained(n,
                          {LatticeDistribution({4, 0, 0, 0}, 4), LatticeDistribution({1, 1, 1, 1}, 4),
                           LatticeDistribution({2, 0, 1, 1}, 4), LatticeDistribution({0, 0, 0, 4}, 4)},
                          OutcomeKernel::readout());
}

TEST(Simulate, SameSeedSameRuns) {
  const AnyModel model = readout_constrained(2);
  const auto prior = ChoicePrior::uniform(2);
  const auto a = simulate(model, 500, 11, prior, 1);
  const auto b = simulate(model, 500, 11, prior, 1);
  const auto c = simulate(model, 500, 12, prior, 1);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  ASSERT_EQ(a.size(), 500u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].run, i);
}

TEST(Simulate, IndependentOfThreadCount) {
  const AnyModel model = readout_constrained(3);
  const auto prior = ChoicePrior::uniform(3);
  const auto one = simulate(model, 2000, 5, prior, 1);
  EXPECT_EQ(one, simulate(model, 2000, 5, prior, 3));
  EXPECT_EQ(one, simulate(model, 2000, 5, prior, 8));
}

TEST(Simulate, ReadoutKernelReportsLambdaExactly) {
  const AnyModel model = readout_constrained(2);
  for (const auto& r : simulate(model, 2000, 1, ChoicePrior::uniform(2), 1)) {
    EXPECT_EQ(r.outcome, Outcome::from_index(r.lambda));
    const auto sector = induced_settings(r.context).sector();
    if (sector == 0) EXPECT_EQ(r.lambda, 0u);
    if (sector == 3) EXPECT_EQ(r.lambda, 3u);
    if (sector == 2) EXPECT_NE(r.lambda, 1u);
  }
}

TEST(Simulate, SuperdetRunsCarrySubEnsembles) {
  const AnyModel constrained = readout_constrained(2);
  for (const auto& r : simulate(constrained, 200, 2, ChoicePrior::uniform(2), 1)) {
    ASSERT_TRUE(r.e.has_value());
    EXPECT_EQ(r.e->i, r.context.gamma_a());
    EXPECT_EQ(r.e->j, r.context.gamma_b());
  }
  std::mt19937_64 rng(1);
  const AnyModel retro = testing::random_retrocausal(rng, 3);
  for (const auto& r : simulate(retro, 50, 2, ChoicePrior::uniform(2), 1)) EXPECT_FALSE(r.e.has_value());
}

TEST(Simulate, RejectsPriorOfWrongSize) {
  const AnyModel model = readout_constrained(2);
  EXPECT_THROW(simulate(model, 10, 1, ChoicePrior::uniform(3), 1), std::invalid_argument);
}

TEST(Simulate, ChoicePriorIsHonored) {
  const AnyModel model = readout_constrained(2);
  ChoicePrior prior = ChoicePrior::uniform(2);
  prior.a.p_mz = {Rational(1), Rational(1)};
  prior.b.p_mz = {Rational(0), Rational(0)};
  for (const auto& r : simulate(model, 300, 9, prior, 1)) {
    EXPECT_EQ(r.context.alpha_string(), "zz");
    EXPECT_EQ(r.context.beta_string(), "xx");
    EXPECT_EQ(induced_settings(r.context).sector(), 2u);
    EXPECT_NE(r.lambda, 1u);
  }
}

TEST(SectorConvergence, FrequenciesApproachAnalytic) {
  std::mt19937_64 rng(8);
  const auto prior = ChoicePrior::uniform(2);
  const std::vector<AnyModel> models = {readout_constrained(2), testing::random_retrocausal(rng, 3),
                                        testing::random_nonlocal(rng, 2)};
  for (const auto& model : models) {
    const auto runs = simulate(model, 40000, 21, prior, 0);
    const auto cells = sector_convergence(model, prior, runs);
    ASSERT_EQ(cells.size(), kSectorCount * kOutcomeCount);
    std::uint64_t visits = 0;
    for (const auto& cell : cells) {
      EXPECT_LT(std::abs(cell.z), 5.0) << model_class_name(model) << " sector " << cell.sector
                                       << " outcome " << cell.outcome;
      if (cell.outcome == 0) visits += cell.visits;
    }
    EXPECT_EQ(visits, 40000u);
  }
}

TEST(EmpiricalTable, CountsEveryRunOnce) {
  const AnyModel model = readout_constrained(2);
  const auto runs = simulate(model, 1000, 4, ChoicePrior::uniform(2), 1);
  const auto table = EmpiricalTable::from_runs(runs);
  EXPECT_EQ(table.total, 1000u);
  std::uint64_t by_context = 0, by_sector = 0;
  for (const auto& [idx, counts] : table.by_context)
    for (auto c : counts) by_context += c;
  for (const auto& counts : table.by_sector)
    for (auto c : counts) by_sector += c;
  EXPECT_EQ(by_context, 1000u);
  EXPECT_EQ(by_sector, 1000u);
}

TEST(SimulateAt, HoldsContextFixed) {
  const AnyModel model = testing::violating_model();
  const Context c = context_at(2, 16);
  const auto runs = simulate_at(model, c, 100, 3);
  for (const auto& r : runs) {
    EXPECT_EQ(r.context, c);
    EXPECT_EQ(r.lambda, 1u);
  }
  EXPECT_EQ(simulate_at(model, c, 10, 3, 50).front().run, 50u);
}

TEST(DependenceDemo, DetectsViolatingModel) {
  const AnyModel model = testing::violating_model();
  const auto report = mechanism_dependence_demo(model, 2, 100, 1);
  EXPECT_EQ(induced_settings(report.first).sector(), induced_settings(report.second).sector());
  EXPECT_NE(report.analytic_first, report.analytic_second);
  EXPECT_TRUE(report.detected);
  EXPECT_GT(std::abs(report.z), report.z_threshold);
  EXPECT_EQ(report.runs_per_context, 100u);
  EXPECT_NEAR(report.frequency_first - report.frequency_second,
              Rational(report.analytic_first - report.analytic_second).get_d(), 0.3);
}

TEST(DependenceDemo, MaximalGapPair) {
  // Contexts 0 and 16 share sector xx with tables (2,0) and (0,2), a gap of
  // one in the first outcome.
  const auto m = testing::violating_model();
  const Rational gap = statistics(m, context_at(2, 0))[0] - statistics(m, context_at(2, 16))[0];
  EXPECT_EQ(gap, 1);
}

TEST(DependenceDemo, RefusesModelsWithoutDependence) {
  std::mt19937_64 rng(2);
  EXPECT_THROW(mechanism_dependence_demo(readout_constrained(2), 2, 100, 1), NoDependence);
  EXPECT_THROW(mechanism_dependence_demo(testing::random_retrocausal(rng, 3), 2, 100, 1), NoDependence);
  EXPECT_THROW(mechanism_dependence_demo(testing::random_nonlocal(rng, 3), 2, 100, 1), NoDependence);
}

TEST(VerifyCoincidence, SimulatedRunsAgree) {
  const auto model = readout_constrained(3);
  const auto runs = simulate(AnyModel(model), 1000, 6, ChoicePrior::uniform(3), 1);
  const auto report = verify_coincidence(model, runs);
  EXPECT_TRUE(report.consistent);
  EXPECT_TRUE(report.violations.empty());
}

TEST(RunsCsv, HeaderAndRows) {
  const AnyModel model = testing::violating_model();
  const Context c = context_at(2, 16);
  std::ostringstream out;
  write_runs_csv(out, simulate_at(model, c, 2, 3));
  const std::string expected_row = "," + c.alpha_string() + "," + c.beta_string() + ",1,2,x,x,1,1,-1\n";
  EXPECT_EQ(out.str(), "run,alpha,beta,gA,gB,MA,MB,lambda,OA,OB\n0" + expected_row + "1" + expected_row);
}

}  // namespace
}  // namespace belllab
