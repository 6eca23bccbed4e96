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

#include <omp.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lprlab/dataset.hpp"
#include "lprlab/error.hpp"
#include "lprlab/experiments.hpp"
#include "lprlab/lp/problem.hpp"
#include "lprlab/oracle.hpp"
#include "lprlab/querygen.hpp"
#include "lprlab/reconstruct.hpp"
#include "lprlab/rng.hpp"

namespace fs = std::filesystem;
using namespace lprlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitInfeasible = 3;

constexpr std::uint64_t kCliFamilyKey = 0x46414D49;

// Relative defaults land in $LPRLAB_OUTPUT_DIR when it is set.
fs::path output_path(const std::string& flag, const std::string& fallback) {
  if (!flag.empty()) return flag;
  const char* dir = std::getenv("LPRLAB_OUTPUT_DIR");
  return (dir != nullptr && *dir != '\0') ? fs::path(dir) / fallback : fs::path(fallback);
}

std::pair<Identifier, Identifier> parse_range(const std::string& text, const std::string& flag) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument("no colon");
    std::size_t used = 0;
    const Identifier lo = std::stoull(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("junk");
    const std::string rest = text.substr(colon + 1);
    const Identifier hi = std::stoull(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("junk");
    if (lo > hi) throw std::invalid_argument("order");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw InvalidArgument(flag + " expects lo:hi with lo <= hi, got '" + text + "'");
  }
}

struct SourceFlags {
  std::string csv;
  std::string profile = "loans";
  std::string id_column;
  std::string attr_column;
  std::string target;
  std::string range;
  std::size_t synth_n = 0;
  double rho = 0.5;
  std::uint64_t data_seed = 1;
};

void add_source_flags(CLI::App* app, SourceFlags& f, bool with_synth) {
  auto* csv = app->add_option("--csv", f.csv, "Input CSV file");
  app->add_option("--profile", f.profile, "Column profile for --csv")
      ->check(CLI::IsMember({"loans", "custom"}));
  app->add_option("--id-column", f.id_column, "Identifier column (overrides the profile)");
  app->add_option("--attr-column", f.attr_column, "Attribute column (overrides the profile)");
  app->add_option("--target", f.target, "Attribute value mapped to bit 1");
  app->add_option("--range", f.range, "Keep identifiers in lo:hi (inclusive)");
  if (with_synth) {
    auto* synth_opt = app->add_option("--synth", f.synth_n, "Synthetic dataset of this size");
    app->add_option("--rho", f.rho, "Probability of a 1 bit for --synth")->check(CLI::Range(0.0, 1.0));
    app->add_option("--data-seed", f.data_seed, "Seed of the synthetic dataset");
    csv->excludes(synth_opt);
  }
}

Dataset load_source(const SourceFlags& f, bool require_target) {
  if (f.csv.empty() && f.synth_n == 0) throw InvalidArgument("give exactly one of --csv or --synth");
  if (f.csv.empty()) {
    Dataset d = synth(f.synth_n, f.rho, f.data_seed);
    if (!f.range.empty()) {
      const auto [lo, hi] = parse_range(f.range, "--range");
      d = restrict(d, lo, hi);
    }
    return d;
  }
  std::string id_col = f.id_column, attr_col = f.attr_column;
  if (f.profile == "loans") {
    if (id_col.empty()) id_col = std::string(LoansProfile::kIdColumn);
    if (attr_col.empty()) attr_col = std::string(LoansProfile::kAttrColumn);
  }
  if (id_col.empty() || attr_col.empty()) {
    throw InvalidArgument("--profile custom needs --id-column and --attr-column");
  }
  if (require_target && f.target.empty()) throw InvalidArgument("--csv needs --target");
  Dataset d = load_csv(f.csv, id_col, attr_col, f.target);
  if (!f.range.empty()) {
    const auto [lo, hi] = parse_range(f.range, "--range");
    d = restrict(d, lo, hi);
  }
  return d;
}

std::string default_loans() {
#ifdef LPRLAB_DEFAULT_LOANS
  return LPRLAB_DEFAULT_LOANS;
#else
  return "data/loans.csv";
#endif
}

void set_jobs(std::size_t jobs) {
  if (jobs > 0) omp_set_num_threads(static_cast<int>(jobs));
}

// ---------------------------------------------------------------- attack

struct AttackFlags {
  SourceFlags source;
  std::string family = "subset";
  std::size_t queries = 0;
  std::string max_exponent;
  std::string method = "dmt";
  double B = 3.0;
  double cap = 5.0;
  double sigma = 4.0;
  std::int64_t suppress = -1;
  std::uint64_t seed = 1;
  std::string out;
  std::string answers;
  bool expose_truth = false;
  std::string dump_lp;
  std::string route = "dual";
  bool timing = false;
};

int run_attack(const AttackFlags& f) {
  const Dataset d = load_source(f.source, true);
  const Target target = Target::of(d);
  const QueryKind kind = parse_query_kind(f.family);

  QueryFamily family;
  if (kind == QueryKind::Digit) {
    family = standard_family();
    if (!f.max_exponent.empty()) family = filter_by_exponent(family, Exponent::parse(f.max_exponent));
    if (f.queries > 0) family = truncate(family, f.queries);
  } else {
    const std::size_t m = f.queries > 0 ? f.queries : 2550;
    family = random_subset_family(d.size(), m, derive_seed(f.seed, {kCliFamilyKey}));
    if (kind == QueryKind::Signed) family = signed_variant(family);
  }
  if (family.size() == 0) throw InvalidArgument("the query family is empty");

  Method method;
  method.kind = parse_method(f.method);
  method.error_bound_multiplier = f.B;
  method.cap_multiplier = f.cap;
  method.validate();

  NoiseModel nm;
  nm.sigma = f.sigma;
  nm.suppression_enabled = f.suppress >= 0;
  if (f.suppress >= 0) nm.suppression_threshold = f.suppress;
  nm.validate();

  const QueryMatrix matrix = materialize_all(family, target.ids);
  const AnswerSet answers = answer_matrix(matrix, target.truth, nm, f.seed);
  if (!f.answers.empty()) {
    std::ofstream out(f.answers, std::ios::binary);
    if (!out) throw Error("cannot open " + f.answers + " for writing");
    write_answers_csv(answers, out, f.expose_truth);
  }
  if (!f.dump_lp.empty()) {
    std::ofstream out(f.dump_lp, std::ios::binary);
    if (!out) throw Error("cannot open " + f.dump_lp + " for writing");
    lp::write_mps(build_primal(matrix, answers, method, nm.sigma), out);
  }

  AttackOptions options;
  options.route = f.route == "primal" ? SolveRoute::Primal : SolveRoute::CompactDual;
  const ReconstructionResult r = attack(matrix, answers, method, nm.sigma, options);

  TrialRow row;
  row.label = "attack";
  row.method = method.kind;
  row.n = d.size();
  row.sigma = nm.sigma;
  row.num_queries = matrix.rows;
  row.param = method.parameter();
  row.seed = f.seed;
  row.feasible = r.feasible;
  row.objective = r.objective_value;
  row.queries_used = r.queries_used;
  row.solve_ms = r.solve_ms;
  if (r.feasible) row.score = score(r.bits, target.truth);
  if (!r.excess_point.empty()) row.excess_accuracy = score(round_bits(r.excess_point), target.truth).accuracy;

  ResultTable table;
  table.root_seed = f.seed;
  table.record_timing = f.timing;
  table.rows.push_back(row);
  table.aggregates = aggregate(table.rows);
  const fs::path out = output_path(f.out, "attack.csv");
  write_results(table, out);

  std::cout << "dataset=" << d.name() << " n=" << d.size() << " method=" << to_string(method.kind)
            << " family=" << to_string(kind) << " queries=" << matrix.rows
            << " used=" << r.queries_used << " sigma=" << nm.sigma << '\n';
  if (!r.feasible) {
    std::cout << "feasible=0 (no point satisfies the residual bounds)\n";
    return kExitInfeasible;
  }
  std::cout << "feasible=1 objective=" << r.objective_value << " accuracy=" << row.score->accuracy
            << " false_pos=" << row.score->false_positives
            << " false_neg=" << row.score->false_negatives << '\n'
            << "wrote " << out.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepFlags {
  std::string preset;
  std::string config;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::vector<std::size_t> n_values;
  std::vector<double> sigma_values;
  std::vector<std::size_t> query_counts;
  std::vector<double> param_values;
  std::string csv;
  std::size_t jobs = 0;
  bool timing = false;
  std::string out;
};

void report(const ResultTable& t, const fs::path& csv) {
  fs::path manifest = csv;
  manifest.replace_extension(".manifest.txt");
  write_results(t, csv);
  write_manifest(t, manifest);
  std::cout << "wrote " << csv.string() << " (" << t.rows.size() << " trial rows, "
            << t.aggregates.size() << " aggregates) and " << manifest.string() << '\n';
}

int run_sweep_cmd(const SweepFlags& f) {
  if (f.preset.empty() == f.config.empty()) throw InvalidArgument("give exactly one of --preset or --config");
  set_jobs(f.jobs);
  const std::string name = f.preset.empty() ? fs::path(f.config).stem().string() : f.preset;

  if (f.preset == "table1") {
    Table1Config cfg;
    cfg.loans_csv = f.csv.empty() ? default_loans() : f.csv;
    if (f.trials) cfg.trials = *f.trials;
    if (f.seed) cfg.root_seed = *f.seed;
    if (!f.sigma_values.empty()) cfg.sigma = f.sigma_values.front();
    if (!f.param_values.empty()) cfg.cap_multiplier = f.param_values.front();
    cfg.jobs = f.jobs;
    cfg.record_timing = f.timing;
    report(table1_analog(cfg), output_path(f.out, name + ".csv"));
    return kExitOk;
  }
  if (f.preset == "presence") {
    PresenceConfig cfg;
    if (f.trials) cfg.trials = *f.trials;
    if (f.seed) cfg.root_seed = *f.seed;
    if (!f.sigma_values.empty()) cfg.sigma = f.sigma_values.front();
    if (!f.query_counts.empty()) cfg.num_queries = f.query_counts.front();
    cfg.jobs = f.jobs;
    cfg.record_timing = f.timing;
    const Dataset loans = load_csv(f.csv.empty() ? default_loans() : f.csv, LoansProfile::kIdColumn,
                                   LoansProfile::kAttrColumn, "C");
    report(infer_presence(loans, cfg), output_path(f.out, name + ".csv"));
    return kExitOk;
  }

  SweepConfig cfg = f.preset.empty() ? load_sweep_config(f.config) : sweep_preset(f.preset);
  if (f.trials) cfg.trials = *f.trials;
  if (f.seed) cfg.root_seed = *f.seed;
  if (!f.n_values.empty()) cfg.n_values = f.n_values;
  if (!f.sigma_values.empty()) cfg.sigma_values = f.sigma_values;
  if (!f.query_counts.empty()) cfg.query_counts = f.query_counts;
  if (!f.param_values.empty()) cfg.param_values = f.param_values;
  if (f.jobs > 0) cfg.jobs = f.jobs;
  if (f.timing) cfg.record_timing = true;
  report(run_sweep(cfg), output_path(f.out, cfg.name + ".csv"));
  return kExitOk;
}

// ---------------------------------------------------------------- infer-ids

struct PresenceFlags {
  std::string csv;
  std::string range = "2500:2600";
  bool inclusive = false;
  double sigma = 4.0;
  std::int64_t threshold = 4;
  bool no_suppression = false;
  std::size_t queries = 3500;
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  std::size_t jobs = 0;
  std::string out;
};

int run_presence(const PresenceFlags& f) {
  set_jobs(f.jobs);
  const auto [lo, hi] = parse_range(f.range, "--range");
  PresenceConfig cfg;
  cfg.lo = lo;
  cfg.width = static_cast<std::size_t>(hi - lo) + (f.inclusive ? 1 : 0);
  cfg.sigma = f.sigma;
  cfg.suppression = !f.no_suppression;
  cfg.suppression_threshold = f.threshold;
  cfg.num_queries = f.queries;
  cfg.trials = f.trials;
  cfg.root_seed = f.seed;
  cfg.jobs = f.jobs;
  const Dataset population = load_csv(f.csv.empty() ? default_loans() : f.csv,
                                      LoansProfile::kIdColumn, LoansProfile::kAttrColumn, "C");
  const ResultTable t = infer_presence(population, cfg);
  for (const TrialRow& r : t.rows) {
    std::cout << "trial " << r.trial << ": used " << r.queries_used << " of " << r.num_queries
              << " queries, false_pos=" << r.score->false_positives
              << " false_neg=" << r.score->false_negatives << '\n';
  }
  const AggregateRow& a = t.aggregates.front();
  std::cout << "mean accuracy " << *a.mean_accuracy << ", mean false_pos " << a.mean_false_pos
            << ", mean false_neg " << a.mean_false_neg << '\n';
  report(t, output_path(f.out, "presence.csv"));
  return kExitOk;
}

// ---------------------------------------------------------------- emit-sql

struct SqlFlags {
  std::uint64_t p = 2;
  int j = 2;
  std::string e = "0.7";
  int mu = 5;
  std::string table = "loans";
  std::string id_column = "clientId";
  std::string range;
  std::string attr;
  std::size_t family_limit = 0;
};

int run_emit_sql(const SqlFlags& f) {
  const auto [lo, hi] = parse_range(f.range, "--range");
  const std::optional<std::string> attr =
      f.attr.empty() ? std::nullopt : std::optional<std::string>(f.attr);
  if (f.family_limit > 0) {
    const QueryFamily family = truncate(standard_family(), f.family_limit);
    for (const QuerySpec& q : family.queries) {
      std::cout << emit_sql(q, f.table, f.id_column, lo, hi, attr) << '\n';
    }
    return kExitOk;
  }
  QuerySpec q;
  q.definition = DigitPredicate{f.p, f.j, Exponent::parse(f.e), f.mu};
  validate(std::get<DigitPredicate>(q.definition));
  std::cout << emit_sql(q, f.table, f.id_column, lo, hi, attr) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- synth / family

int run_synth(std::size_t n, double rho, std::uint64_t seed, const std::string& out_flag) {
  const Dataset d = synth(n, rho, seed);
  const fs::path out = output_path(out_flag, "synth.csv");
  std::ofstream os(out, std::ios::binary);
  if (!os) throw Error("cannot open " + out.string() + " for writing");
  write_csv(d, os);
  std::cout << "wrote " << out.string() << " (" << n << " entries)\n";
  return kExitOk;
}

int run_family(const std::string& max_exponent, std::size_t limit, const std::string& out_flag) {
  QueryFamily f = standard_family();
  if (!max_exponent.empty()) f = filter_by_exponent(f, Exponent::parse(max_exponent));
  if (limit > 0) f = truncate(f, limit);
  const fs::path out = output_path(out_flag, "family.csv");
  std::ofstream os(out, std::ios::binary);
  if (!os) throw Error("cannot open " + out.string() + " for writing");
  write_family_csv(f, os);
  std::cout << "wrote " << out.string() << " (" << f.size() << " queries)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lprlab: linear-program reconstruction attacks on a simulated noisy counting oracle"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(LPRLAB_VERSION_STRING));

  AttackFlags af;
  auto* attack_cmd = app.add_subcommand("attack", "Run one reconstruction and score it");
  add_source_flags(attack_cmd, af.source, true);
  attack_cmd->add_option("--family", af.family, "Query family")
      ->check(CLI::IsMember({"subset", "signed", "digit"}));
  attack_cmd->add_option("--queries", af.queries,
                         "Number of queries (default 2550 random, all 3500 digit)");
  attack_cmd->add_option("--max-exponent", af.max_exponent, "Digit family: keep e <= this value");
  attack_cmd->add_option("--method", af.method, "LP formulation")
      ->check(CLI::IsMember({"dmt", "dini", "bounded-dmt"}));
  attack_cmd->add_option("--B", af.B, "DiNi error bound multiplier");
  attack_cmd->add_option("--cap", af.cap, "BoundedDMT cap multiplier");
  attack_cmd->add_option("--sigma", af.sigma, "Noise standard deviation");
  attack_cmd->add_option("--suppress", af.suppress, "Suppress true counts below this threshold");
  attack_cmd->add_option("--seed", af.seed, "Seed for the family and the noise");
  attack_cmd->add_option("--out", af.out, "Result CSV (default attack.csv)");
  attack_cmd->add_option("--answers", af.answers, "Also write the answer set CSV here");
  attack_cmd->add_flag("--expose-truth", af.expose_truth, "Include true counts in --answers");
  attack_cmd->add_option("--dump-lp", af.dump_lp, "Write the primal LP in MPS format");
  attack_cmd->add_option("--route", af.route, "Solve the compact dual or the primal LP")
      ->check(CLI::IsMember({"dual", "primal"}));
  attack_cmd->add_flag("--timing", af.timing, "Record solve time in the CSV");

  SweepFlags sf;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a Monte-Carlo grid from a preset or config file");
  auto* preset_opt = sweep_cmd->add_option("--preset", sf.preset, "Named grid")
                         ->check(CLI::IsMember(preset_names()));
  auto* config_opt = sweep_cmd->add_option("--config", sf.config, "key = value config file");
  preset_opt->excludes(config_opt);
  sweep_cmd->add_option("--trials", sf.trials, "Trials per grid point");
  sweep_cmd->add_option("--seed", sf.seed, "Root seed");
  sweep_cmd->add_option("--n", sf.n_values, "Dataset sizes")->delimiter(',');
  sweep_cmd->add_option("--sigma", sf.sigma_values, "Noise levels")->delimiter(',');
  sweep_cmd->add_option("--queries", sf.query_counts, "Query counts")->delimiter(',');
  sweep_cmd->add_option("--B", sf.param_values, "DiNi multipliers or BoundedDMT caps")->delimiter(',');
  sweep_cmd->add_option("--csv", sf.csv, "Loans CSV for the table1 and presence presets");
  sweep_cmd->add_option("--jobs", sf.jobs, "Worker threads (default: all cores)");
  sweep_cmd->add_flag("--timing", sf.timing, "Record solve times (output is then not reproducible)");
  sweep_cmd->add_option("--out", sf.out, "Results CSV (default <name>.csv)");

  PresenceFlags pf;
  auto* presence_cmd = app.add_subcommand("infer-ids", "Infer which identifiers in a window exist");
  presence_cmd->add_option("--csv", pf.csv, "Loans CSV (default: bundled surrogate)");
  presence_cmd->add_option("--range", pf.range, "Window lo:hi, half-open unless --inclusive");
  presence_cmd->add_flag("--inclusive", pf.inclusive, "Treat --range as [lo, hi]");
  presence_cmd->add_option("--sigma", pf.sigma, "Noise standard deviation");
  presence_cmd->add_option("--threshold", pf.threshold, "Suppression threshold");
  presence_cmd->add_flag("--no-suppression", pf.no_suppression, "Answer every query");
  presence_cmd->add_option("--queries", pf.queries, "Digit queries to issue");
  presence_cmd->add_option("--trials", pf.trials, "Noise resamplings");
  presence_cmd->add_option("--seed", pf.seed, "Root seed");
  presence_cmd->add_option("--jobs", pf.jobs, "Worker threads (default: all cores)");
  presence_cmd->add_option("--out", pf.out, "Results CSV (default presence.csv)");

  SqlFlags qf;
  auto* sql_cmd = app.add_subcommand("emit-sql", "Print the SQL text of digit-predicate queries");
  sql_cmd->add_option("--p", qf.p, "Prime");
  sql_cmd->add_option("--j", qf.j, "Fractional digit index");
  sql_cmd->add_option("--e", qf.e, "Exponent, e.g. 0.7");
  sql_cmd->add_option("--mu", qf.mu, "Modulus");
  sql_cmd->add_option("--table", qf.table, "Table name");
  sql_cmd->add_option("--id-column", qf.id_column, "Identifier column");
  sql_cmd->add_option("--range", qf.range, "Identifier range lo:hi")->required();
  sql_cmd->add_option("--attr", qf.attr, "Extra condition appended with AND");
  sql_cmd->add_option("--family-limit", qf.family_limit,
                      "Print the first K queries of the standard family instead");

  std::size_t synth_n = 100;
  double synth_rho = 0.5;
  std::uint64_t synth_seed = 1;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic dataset CSV (columns id,bit)");
  synth_cmd->add_option("--n", synth_n, "Number of entries");
  synth_cmd->add_option("--rho", synth_rho, "Probability of a 1 bit")->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--seed", synth_seed, "Seed");
  synth_cmd->add_option("--out", synth_out, "Output CSV (default synth.csv)");

  std::string fam_max_e, fam_out;
  std::size_t fam_limit = 0;
  auto* family_cmd = app.add_subcommand("family", "Export the standard digit family as CSV");
  family_cmd->add_option("--max-exponent", fam_max_e, "Keep e <= this value");
  family_cmd->add_option("--limit", fam_limit, "Keep the first K queries");
  family_cmd->add_option("--out", fam_out, "Output CSV (default family.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (attack_cmd->parsed()) return run_attack(af);
    if (sweep_cmd->parsed()) return run_sweep_cmd(sf);
    if (presence_cmd->parsed()) return run_presence(pf);
    if (sql_cmd->parsed()) return run_emit_sql(qf);
    if (synth_cmd->parsed()) return run_synth(synth_n, synth_rho, synth_seed, synth_out);
    if (family_cmd->parsed()) return run_family(fam_max_e, fam_limit, fam_out);
  } catch (const InvalidArgument& e) {
    std::cerr << "lprlab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "lprlab: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
