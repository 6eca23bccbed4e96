// Copyright 2026 The lprlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "lprlab/error.hpp"
#include "lprlab/experiments.hpp"

using namespace lprlab;

namespace {

SweepConfig small_grid() {
  SweepConfig cfg;
  cfg.name = "unit";
  cfg.n_values = {12, 16};
  cfg.sigma_values = {0.0, 1.0};
  cfg.query_counts = {30, 60};
  cfg.trials = 3;
  cfg.root_seed = 99;
  return cfg;
}

std::string csv(const ResultTable& t) {
  std::ostringstream out;
  write_results(t, out);
  return out.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(Sweep, RowCountsAndGridOrder) {
  const ResultTable t = run_sweep(small_grid());
  ASSERT_EQ(t.rows.size(), 2U * 2U * 2U * 3U);
  ASSERT_EQ(t.aggregates.size(), 8U);
  EXPECT_EQ(t.rows[0].n, 12U);
  EXPECT_EQ(t.rows[0].sigma, 0.0);
  EXPECT_EQ(t.rows[0].num_queries, 30U);
  EXPECT_EQ(t.rows[1].trial, 1U);
  EXPECT_EQ(t.rows[3].num_queries, 60U);
  EXPECT_EQ(t.rows.back().n, 16U);
  for (const TrialRow& r : t.rows) {
    EXPECT_EQ(r.label, "unit");
    if (r.sigma == 0.0) {
      ASSERT_TRUE(r.score.has_value());
      EXPECT_NEAR(r.objective, 0.0, 1e-7);
    }
  }
}

TEST(Sweep, AggregatesRecomputeFromTrials) {
  const ResultTable t = run_sweep(small_grid());
  for (std::size_t p = 0; p < t.aggregates.size(); ++p) {
    const AggregateRow& a = t.aggregates[p];
    double acc = 0, obj = 0;
    for (std::size_t k = 0; k < 3; ++k) {
      const TrialRow& r = t.rows[p * 3 + k];
      ASSERT_EQ(r.n, a.n);
      acc += r.score->accuracy;
      obj += r.objective;
    }
    EXPECT_NEAR(*a.mean_accuracy, acc / 3.0, 1e-12);
    EXPECT_NEAR(a.mean_objective, obj / 3.0, 1e-9);
    EXPECT_EQ(a.feasible_fraction, 1.0);
    EXPECT_EQ(*a.mean_accuracy_all, *a.mean_accuracy);
  }
  ASSERT_NE(t.find("unit", 16, 1.0, 60, 0.0), nullptr);
  EXPECT_EQ(t.find("unit", 16, 2.0, 60, 0.0), nullptr);
}

TEST(Sweep, ByteIdenticalAcrossRunsAndThreadCounts) {
  SweepConfig a = small_grid(), b = small_grid();
  a.jobs = 1;
  b.jobs = 4;
  const std::string first = csv(run_sweep(a));
  EXPECT_EQ(first, csv(run_sweep(b)));
  EXPECT_EQ(first, csv(run_sweep(a)));
  a.root_seed = 100;
  EXPECT_NE(first, csv(run_sweep(a)));
}

TEST(Sweep, SeedsAreDistinctAndFamiliesNest) {
  SweepConfig cfg = small_grid();
  cfg.sigma_values = {2.0};
  const ResultTable t = run_sweep(cfg);
  std::set<std::uint64_t> seeds;
  for (const TrialRow& r : t.rows) seeds.insert(r.seed);
  EXPECT_EQ(seeds.size(), t.rows.size());
}

TEST(Sweep, CsvSchema) {
  SweepConfig cfg = small_grid();
  cfg.n_values = {12};
  cfg.query_counts = {30};
  cfg.sigma_values = {1.0};
  const auto ls = lines(csv(run_sweep(cfg)));
  ASSERT_EQ(ls.size(), 1U + 3U + 1U);
  EXPECT_EQ(ls[0],
            "record,label,trial,method,n,sigma,num_queries,B_or_cap,seed,feasible,objective,"
            "accuracy,false_pos,false_neg,queries_used,solve_ms,accuracy_all");
  EXPECT_EQ(ls[1].rfind("trial,unit,0,dmt,12,1,30,0,", 0), 0U) << ls[1];
  EXPECT_EQ(ls[4].rfind("aggregate,unit,3,dmt,12,1,30,0,99,1,", 0), 0U) << ls[4];
  for (const auto& l : ls) {
    EXPECT_EQ(std::count(l.begin(), l.end(), ','), 16) << l;
  }
  EXPECT_NE(ls[1].find(",NA,"), std::string::npos);  // solve_ms off by default
}

TEST(Sweep, EmptyTableWritesHeaderOnly) {
  EXPECT_EQ(lines(csv(ResultTable{})).size(), 1U);
  EXPECT_TRUE(aggregate({}).empty());
}

TEST(Sweep, DiniParametersAndInfeasibleRows) {
  SweepConfig cfg = small_grid();
  cfg.method.kind = MethodKind::DiNi;
  cfg.param_values = {0.05, 4.0};
  cfg.n_values = {12};
  cfg.sigma_values = {2.0};
  cfg.query_counts = {40};
  const ResultTable t = run_sweep(cfg);
  ASSERT_EQ(t.aggregates.size(), 2U);
  EXPECT_EQ(t.aggregates[0].param, 0.05);
  EXPECT_LT(t.aggregates[0].feasible_fraction, 1.0);
  EXPECT_EQ(t.aggregates[1].feasible_fraction, 1.0);
  for (const TrialRow& r : t.rows) {
    if (!r.feasible) {
      EXPECT_FALSE(r.score.has_value());
      EXPECT_TRUE(r.excess_accuracy.has_value());
    }
  }
}

TEST(Sweep, SignedAndDigitKinds) {
  SweepConfig cfg = small_grid();
  cfg.n_values = {12};
  cfg.query_counts = {40};
  cfg.sigma_values = {0.0};
  cfg.query_kind = QueryKind::Signed;
  for (const TrialRow& r : run_sweep(cfg).rows) EXPECT_DOUBLE_EQ(r.score->accuracy, 1.0);
  cfg.query_kind = QueryKind::Digit;
  cfg.query_counts = {300};
  for (const TrialRow& r : run_sweep(cfg).rows) EXPECT_DOUBLE_EQ(r.score->accuracy, 1.0);
  EXPECT_EQ(parse_query_kind("signed"), QueryKind::Signed);
  EXPECT_THROW(parse_query_kind("bogus"), InvalidArgument);
}

TEST(Sweep, ValidationAndAxisHelpers) {
  SweepConfig cfg = small_grid();
  cfg.trials = 0;
  EXPECT_THROW(run_sweep(cfg), InvalidArgument);
  cfg = small_grid();
  cfg.sigma_values.clear();
  EXPECT_THROW(run_sweep(cfg), InvalidArgument);
  cfg = small_grid();
  EXPECT_THROW(sweep_sigma(cfg), InvalidArgument);
  EXPECT_THROW(sweep_queries(cfg), InvalidArgument);
  cfg.query_kind = QueryKind::Digit;
  cfg.query_counts = {1000000};
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(FirstCrossing, ScansInOrder) {
  ResultTable t;
  for (double s : {1.0, 2.0, 3.0}) {
    AggregateRow a;
    a.label = "x";
    a.n = 10;
    a.sigma = s;
    a.num_queries = static_cast<std::size_t>(s * 100);
    a.mean_accuracy = 1.0 - 0.02 * s;
    t.aggregates.push_back(a);
  }
  EXPECT_EQ(first_crossing(t, "x", 10, 0.0, CrossingAxis::Sigma, 0.97), 2.0);
  EXPECT_EQ(first_crossing(t, "x", 10, 0.0, CrossingAxis::Sigma, 0.5), std::nullopt);
  EXPECT_EQ(first_crossing(t, "x", 10, 0.0, CrossingAxis::Queries, 0.97), 100.0);
  EXPECT_EQ(first_crossing(t, "y", 10, 0.0, CrossingAxis::Queries, 0.0), std::nullopt);
}

TEST(Config, ParsesKeysListsAndRanges) {
  std::istringstream in(
      "# comment\n"
      "preset = fig3b\n"
      "name = mine   # trailing\n"
      "n_values = 20, 40\n"
      "sigma_values = 1:2:0.5\n"
      "query_counts = 50:250:100\n"
      "B_values = 2.5\n"
      "trials = 4\n"
      "suppression = yes\n");
  const SweepConfig cfg = parse_sweep_config(in);
  EXPECT_EQ(cfg.name, "mine");
  EXPECT_EQ(cfg.method.kind, MethodKind::DiNi);
  EXPECT_EQ(cfg.n_values, (std::vector<std::size_t>{20, 40}));
  EXPECT_EQ(cfg.sigma_values, (std::vector<double>{1.0, 1.5, 2.0}));
  EXPECT_EQ(cfg.query_counts, (std::vector<std::size_t>{50, 150, 250}));
  EXPECT_EQ(cfg.param_values, std::vector<double>{2.5});
  EXPECT_EQ(cfg.trials, 4U);
  EXPECT_TRUE(cfg.suppression);
}

TEST(Config, ErrorsNameTheLine) {
  const auto message = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_sweep_config(in);
    } catch (const InvalidArgument& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("trials = 3\nbogus = 1\n").find("config line 2"), std::string::npos);
  EXPECT_NE(message("\n\nsigma_values = 1,x\n").find("config line 3"), std::string::npos);
  EXPECT_NE(message("trials = 2\npreset = fig1a\n").find("first key"), std::string::npos);
  EXPECT_NE(message("trials\n").find("key = value"), std::string::npos);
  EXPECT_NE(message("trials = 0\n"), "no error");
}

TEST(Presets, GridsAndDispatch) {
  for (const std::string& name : preset_names()) {
    if (name == "table1" || name == "presence") {
      EXPECT_THROW(sweep_preset(name), InvalidArgument);
      continue;
    }
    const SweepConfig cfg = sweep_preset(name);
    EXPECT_NO_THROW(cfg.validate()) << name;
    EXPECT_EQ(cfg.trials, 10U);
  }
  const SweepConfig a = sweep_preset("fig1a");
  EXPECT_EQ(a.sigma_values.size(), 20U);
  EXPECT_EQ(a.query_counts, std::vector<std::size_t>{2550});
  const SweepConfig b = sweep_preset("fig2b");
  EXPECT_EQ(b.query_kind, QueryKind::Signed);
  EXPECT_EQ(b.query_counts.front(), 50U);
  EXPECT_EQ(b.query_counts.back(), 2950U);
  EXPECT_EQ(sweep_preset("fig3a").method.kind, MethodKind::DiNi);
  EXPECT_THROW(sweep_preset("fig9"), InvalidArgument);
}

TEST(Presence, NoiselessWindowIsExact) {
  std::vector<Entry> entries;
  for (Identifier id = 1; id <= 100; ++id) entries.push_back({id, 0});
  const Dataset all("all", entries);
  PresenceConfig cfg;
  cfg.lo = 1;
  cfg.width = 100;
  cfg.num_queries = 400;
  cfg.sigma = 0.0;
  cfg.trials = 2;
  const ResultTable t = infer_presence(all, cfg);
  ASSERT_EQ(t.rows.size(), 2U);
  for (const TrialRow& r : t.rows) {
    EXPECT_EQ(r.score->false_positives + r.score->false_negatives, 0U);
  }
  EXPECT_EQ(t.rows[0].label, "presence:1-101");

  // Nobody in the window: every count is zero and suppressed.
  cfg.lo = 1000;
  EXPECT_THROW(infer_presence(all, cfg), NoUsableQueries);
}

TEST(Table1, ScenarioList) {
  const auto s = table1_scenarios();
  ASSERT_EQ(s.size(), 6U);
  EXPECT_EQ(s[0].lo, 2000U);
  EXPECT_EQ(s[0].target_value, "C");
  EXPECT_EQ(s[3].target_value, "A");
  EXPECT_TRUE(s[4].max_exponent.has_value());
  EXPECT_EQ(*s[4].query_limit, 2000U);
}

TEST(Table1, SmallRunOnLoans) {
  Table1Config cfg;
  cfg.loans_csv = LPRLAB_TEST_LOANS;
  cfg.scenarios = {table1_scenarios()[0]};
  cfg.trials = 2;
  const ResultTable t = table1_analog(cfg);
  ASSERT_EQ(t.rows.size(), 2U);
  EXPECT_EQ(t.rows[0].n, 73U);
  EXPECT_EQ(t.rows[0].method, MethodKind::BoundedDMT);
  std::ostringstream manifest;
  write_manifest(t, manifest);
  EXPECT_NE(manifest.str().find("root_seed = 1"), std::string::npos);
  EXPECT_NE(manifest.str().find("trial_rows = 2"), std::string::npos);
}
