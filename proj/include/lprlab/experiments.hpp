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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lprlab/dataset.hpp"
#include "lprlab/oracle.hpp"
#include "lprlab/querygen.hpp"
#include "lprlab/reconstruct.hpp"

namespace lprlab {

enum class QueryKind { Subset, Signed, Digit };

const char* to_string(QueryKind k);
QueryKind parse_query_kind(std::string_view text);

/// A Monte-Carlo grid. Points run in n, parameter, sigma, query-count order
/// with trials innermost.
struct SweepConfig {
  std::string name = "sweep";
  Method method;
  QueryKind query_kind = QueryKind::Subset;
  std::vector<std::size_t> n_values{100};
  std::vector<double> sigma_values{4.0};
  std::vector<std::size_t> query_counts{2550};
  // Swept B (DiNi) or cap multiplier (BoundedDMT). Empty uses the method's
  // own parameter; ignored for DMT.
  std::vector<double> param_values;
  std::size_t trials = 10;
  std::uint64_t root_seed = 1;
  double rho = 0.5;
  bool suppression = false;
  std::int64_t suppression_threshold = 4;
  // 0 uses every available OpenMP thread.
  std::size_t jobs = 0;
  bool record_timing = false;

  void validate() const;
};

struct TrialRow {
  std::string label;
  std::size_t trial = 0;
  MethodKind method = MethodKind::DMT;
  std::size_t n = 0;
  double sigma = 0.0;
  std::size_t num_queries = 0;
  double param = 0.0;
  std::uint64_t seed = 0;
  bool feasible = false;
  double objective = 0.0;
  std::optional<Score> score;           // absent when infeasible
  std::optional<double> excess_accuracy;  // DiNi least-excess point when infeasible
  std::size_t queries_used = 0;
  double solve_ms = 0.0;
};

/// Per grid point summary of its trials.
struct AggregateRow {
  std::string label;
  MethodKind method = MethodKind::DMT;
  std::size_t n = 0;
  double sigma = 0.0;
  std::size_t num_queries = 0;
  double param = 0.0;
  std::size_t trials = 0;
  double feasible_fraction = 0.0;
  double mean_objective = 0.0;              // over feasible trials
  std::optional<double> mean_accuracy;      // over feasible trials
  double mean_false_pos = 0.0;              // over feasible trials
  double mean_false_neg = 0.0;
  // Over all trials, scoring the least-excess point of infeasible DiNi
  // trials. Absent when some trial has no point at all.
  std::optional<double> mean_accuracy_all;
  double mean_queries_used = 0.0;
  double mean_solve_ms = 0.0;
};

struct ResultTable {
  std::vector<TrialRow> rows;
  std::vector<AggregateRow> aggregates;
  std::uint64_t root_seed = 0;
  bool record_timing = false;
  // Ordered key/value pairs describing the run, for the manifest.
  std::vector<std::pair<std::string, std::string>> manifest;

  /// The aggregate for one grid point, if present.
  const AggregateRow* find(std::string_view label, std::size_t n, double sigma,
                           std::size_t num_queries, double param) const;
};

/// Groups consecutive rows sharing a grid point and summarizes them.
std::vector<AggregateRow> aggregate(const std::vector<TrialRow>& rows);

ResultTable run_sweep(const SweepConfig& cfg);

/// run_sweep with exactly one query count.
ResultTable sweep_sigma(const SweepConfig& cfg);
/// run_sweep with exactly one sigma.
ResultTable sweep_queries(const SweepConfig& cfg);

struct PresenceConfig {
  Identifier lo = 2500;
  std::size_t width = 100;
  std::size_t num_queries = 3500;
  double sigma = 4.0;
  bool suppression = true;
  std::int64_t suppression_threshold = 4;
  std::size_t trials = 10;
  std::uint64_t root_seed = 1;
  std::size_t jobs = 0;
  bool record_timing = false;
};

/// DMT over the candidate window [lo, lo + width) with attribute-free digit
/// queries; the secret bit is membership. Only the noise varies per trial.
ResultTable infer_presence(const Dataset& population, const PresenceConfig& cfg);

struct Table1Scenario {
  std::string label;
  Identifier lo = 0;
  Identifier hi = 0;
  std::string target_value;
  std::optional<Exponent> max_exponent;     // exponent filter
  std::optional<std::size_t> query_limit;   // truncation after filtering
};

/// The four id ranges followed by the two exponent-filtered reruns.
std::vector<Table1Scenario> table1_scenarios();

struct Table1Config {
  std::filesystem::path loans_csv;
  std::vector<Table1Scenario> scenarios = table1_scenarios();
  double sigma = 4.0;
  double cap_multiplier = 5.0;
  std::size_t trials = 10;
  std::uint64_t root_seed = 1;
  std::size_t jobs = 0;
  bool record_timing = false;
};

/// BoundedDMT over each loans range with the standard digit family.
ResultTable table1_analog(const Table1Config& cfg);

/// Trial rows in grid order, then aggregate rows. Reals use the shortest
/// round-trip form; solve_ms is NA unless timing was recorded.
void write_results(const ResultTable& t, std::ostream& out);
void write_results(const ResultTable& t, const std::filesystem::path& path);

void write_manifest(const ResultTable& t, std::ostream& out);
void write_manifest(const ResultTable& t, const std::filesystem::path& path);

enum class CrossingAxis { Sigma, Queries };

/// First aggregate, scanning the selected points along the axis in sweep
/// order, whose mean accuracy is below the threshold (Sigma axis) or at least
/// the threshold (Queries axis). Returns that axis value.
std::optional<double> first_crossing(const ResultTable& t, std::string_view label, std::size_t n,
                                     double param, CrossingAxis axis, double threshold);

/// Flat "key = value" text; '#' starts a comment. A "preset" key, if given,
/// must come first and seeds the remaining defaults. Lists are comma
/// separated and accept start:stop:step ranges.
SweepConfig parse_sweep_config(std::istream& in);
SweepConfig load_sweep_config(const std::filesystem::path& path);

/// Names accepted by sweep_preset.
std::vector<std::string> preset_names();
/// fig1a, fig1b, fig2a, fig2b, fig3a, fig3b. table1 and presence have their
/// own configs and are dispatched by the command line.
SweepConfig sweep_preset(std::string_view name);

}  // namespace lprlab
