#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lpalab/suites.hpp"
#include "lpalab/theory.hpp"
#include "oracle_constants.hpp"

using namespace lpalab;

TEST_CASE("suite vocabulary") {
  const auto& names = suite_names();
  REQUIRE(names.size() == 8);
  for (const char* name : {"bis", "diff", "slud", "chernoff", "max", "gap", "monotone",
                           "argmax"}) {
    CHECK(is_suite_name(name));
  }
  CHECK(!is_suite_name("gnp"));
  CHECK_THROWS_AS(run_suite("nope"), std::invalid_argument);
}

TEST_CASE("tie-ratio suite on a reduced grid") {
  BisGrid grid;
  grid.n_hi = 8;
  const auto result = suite_bis(grid);
  CHECK(result.suite == "bis");
  REQUIRE(result.reports.size() == 2);
  CHECK(result.all_pass());
  CHECK(result.reports[0].checks > 1000);
  CHECK(result.reports[1].checks > 100);
  CHECK(result.reports[1].worst_margin > -1e-12);
}

TEST_CASE("difference-tail suite covers its twelve points") {
  const auto result = suite_diff({});
  CHECK(result.all_pass());
  REQUIRE(result.reports.size() == 1);
  CHECK(result.reports[0].checks == 12);
  // Worst margin matches the frozen tails: min over points of tail - 0.7.
  double worst = 1.0;
  for (const double tail : kDiffTails) worst = std::min(worst, tail - 0.7);
  CHECK(result.reports[0].worst_margin == doctest::Approx(worst).epsilon(1e-9));
}

TEST_CASE("tail sandwich suites on a reduced grid") {
  TailSandwichGrid grid;
  grid.n = {100, 500};
  grid.p = {0.05, 0.25};
  grid.t_points = 8;
  const auto lower = suite_slud(grid);
  CHECK(lower.all_pass());
  CHECK(lower.reports[0].checks == 4 * 8);
  const auto upper = suite_chernoff(grid);
  CHECK(upper.all_pass());
  CHECK(upper.reports[0].checks == 4 * 8);
}

TEST_CASE("drifting family construction") {
  DriftingFamilyGrid grid;  // nominal n = 1e8, p = 1e-4
  const auto family = drifting_family(grid);
  REQUIRE(family.size() == 2000);
  CHECK(family[0] == 100000000);
  for (std::size_t i = 0; i + 1 < family.size(); ++i) CHECK(family[i] > family[i + 1]);

  // The same closed form drives the per-graph parameters.
  const auto params = derive_params(100000000, 1e-4);
  REQUIRE(params.z.size() >= family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    CHECK(family[i] == static_cast<std::int64_t>(std::llround(params.z[i])));
  }

  DriftingFamilyGrid bad;
  bad.n = 100;
  bad.p = 1e-6;  // np < 1
  CHECK_THROWS_AS(drifting_family(bad), std::invalid_argument);
}

TEST_CASE("family-maximum suite against the frozen medians") {
  const auto result = suite_max({});
  CHECK(result.suite == "max");
  REQUIRE(result.reports.size() == 2);

  const double norm_full = (kFamilyMedianFull - 10000.0) / kFamilyNormScale;
  const double norm_restricted = (kFamilyMedianRestricted - 10000.0) / kFamilyNormScale;

  // The normalized median undershoots the [0.7, 1.3] window at this family
  // size; the margin states by how much.
  CHECK(!result.reports[0].pass);
  CHECK(result.reports[0].worst_margin == doctest::Approx(norm_full - 0.7).epsilon(1e-9));

  // The restricted family median sits strictly below the full one.
  CHECK(result.reports[1].pass);
  CHECK(result.reports[1].worst_margin ==
        doctest::Approx(norm_full - norm_restricted).epsilon(1e-9));
  CHECK(!result.all_pass());
}

TEST_CASE("top-two-gap suite against the frozen probability") {
  GapGrid grid;
  grid.mc_samples = 50000;
  const auto result = suite_gap(grid);
  REQUIRE(result.reports.size() == 2);

  // Exact probability 0.788 misses the 0.8 floor by ~0.012.
  CHECK(!result.reports[0].pass);
  CHECK(result.reports[0].worst_margin ==
        doctest::Approx(kFamilyGapProb - 0.8).epsilon(1e-7));

  // Monte Carlo agrees with the exact sum within its error budget.
  CHECK(result.reports[1].pass);
  CHECK(!result.all_pass());
}

TEST_CASE("gap suite on a small family passes mechanically") {
  GapGrid grid;
  grid.family.n = 1000000;
  grid.family.p = 1e-3;
  grid.family.count = 40;
  grid.prob_floor = 0.0;
  grid.mc_samples = 50000;
  const auto result = suite_gap(grid);
  CHECK(result.all_pass());
}

TEST_CASE("max suite on a small family with wide bounds") {
  MaxGrid grid;
  grid.family.n = 1000000;
  grid.family.p = 1e-3;
  grid.family.count = 40;
  grid.median_lo = 0.0;
  grid.median_hi = 5.0;
  const auto result = suite_max(grid);
  CHECK(result.all_pass());
}

TEST_CASE("monotonicity suite") {
  const auto result = suite_monotone({});
  CHECK(result.all_pass());
  // Conditional-gap monotonicity folded over t, plus the log-concavity grid.
  REQUIRE(result.reports.size() == 2);
  CHECK(result.reports[0].checks >= 3);
  CHECK(result.reports[1].checks >= 5);
}

TEST_CASE("argmax suite with a reduced sample count") {
  ArgmaxGrid grid;
  grid.samples = 300000;
  const auto result = suite_argmax(grid);
  CHECK(result.all_pass());
  for (const auto& rep : result.reports) {
    INFO(rep.name, " margin ", rep.worst_margin);
    CHECK(rep.pass);
  }
}
