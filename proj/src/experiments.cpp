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

#include "lprlab/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>

#include "lprlab/error.hpp"
#include "lprlab/rng.hpp"

namespace lprlab {
namespace {

constexpr std::uint64_t kDataKey = 0x44415441;    // "DATA"
constexpr std::uint64_t kFamilyKey = 0x46414D49;  // "FAMI"
constexpr std::uint64_t kNoiseKey = 0x4E4F4953;   // "NOIS"

// One reconstruction to run. Pointers refer into storage owned by the
// caller for the lifetime of run_jobs.
struct Job {
  const std::string* label = nullptr;
  Method method;
  NoiseModel noise;
  const QueryMatrix* matrix = nullptr;
  std::size_t num_queries = 0;
  const std::vector<std::uint8_t>* truth = nullptr;
  double param = 0.0;
  std::uint64_t seed = 0;
  std::size_t trial = 0;
};

int thread_count(std::size_t jobs) {
  return jobs == 0 ? omp_get_max_threads() : static_cast<int>(jobs);
}

TrialRow run_job(const Job& job) {
  const QueryMatrix m = job.num_queries == job.matrix->rows ? *job.matrix
                                                            : job.matrix->prefix(job.num_queries);
  const AnswerSet answers = answer_matrix(m, *job.truth, job.noise, job.seed);
  AttackOptions options;
  options.solver.kernel = KernelMode::Serial;
  const ReconstructionResult r = attack(m, answers, job.method, job.noise.sigma, options);

  TrialRow row;
  row.label = *job.label;
  row.trial = job.trial;
  row.method = job.method.kind;
  row.n = m.cols;
  row.sigma = job.noise.sigma;
  row.num_queries = m.rows;
  row.param = job.param;
  row.seed = job.seed;
  row.feasible = r.feasible;
  row.objective = r.objective_value;
  row.queries_used = r.queries_used;
  row.solve_ms = r.solve_ms;
  if (r.feasible) row.score = score(r.bits, *job.truth);
  if (!r.excess_point.empty()) {
    row.excess_accuracy = score(round_bits(r.excess_point), *job.truth).accuracy;
  }

  // Checks the harness owes every simulated run: the true database bounds
  // the DMT optimum, and DiNi must accept whenever the truth satisfies it.
  if (job.method.kind == MethodKind::DMT) {
    const double bound = truth_objective(m, answers, *job.truth);
    if (r.objective_value > bound + 1e-6 * std::max(1.0, bound)) {
      throw Error("DMT optimum " + std::to_string(r.objective_value) +
                  " exceeds the objective of the true database " + std::to_string(bound));
    }
  }
  if (job.method.kind == MethodKind::DiNi && !r.feasible) {
    bool truth_fits = true;
    for (const Answer& a : answers.answers) {
      if (!a.suppressed() &&
          std::abs(a.value - static_cast<double>(a.true_count)) >
              job.method.error_bound_multiplier * job.noise.sigma) {
        truth_fits = false;
        break;
      }
    }
    if (truth_fits) throw Error("DiNi reported infeasible although the true database fits");
  }
  return row;
}

std::vector<TrialRow> run_jobs(const std::vector<Job>& jobs, std::size_t threads) {
  std::vector<TrialRow> rows(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  const auto count = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count(threads))
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    try {
      rows[static_cast<std::size_t>(k)] = run_job(jobs[static_cast<std::size_t>(k)]);
    } catch (...) {
      errors[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += format_real(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

bool same_point(const TrialRow& a, const TrialRow& b) {
  return a.label == b.label && a.method == b.method && a.n == b.n && a.sigma == b.sigma &&
         a.num_queries == b.num_queries && a.param == b.param;
}

std::vector<double> sweep_params(const SweepConfig& cfg) {
  if (cfg.method.kind == MethodKind::DMT) return {0.0};
  if (!cfg.param_values.empty()) return cfg.param_values;
  return {cfg.method.parameter()};
}

Method with_param(Method m, double param) {
  if (m.kind == MethodKind::DiNi) m.error_bound_multiplier = param;
  if (m.kind == MethodKind::BoundedDMT) m.cap_multiplier = param;
  return m;
}

void open_for_write(std::ofstream& out, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out.open(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
}

}  // namespace

const char* to_string(QueryKind k) {
  switch (k) {
    case QueryKind::Subset: return "subset";
    case QueryKind::Signed: return "signed";
    case QueryKind::Digit: return "digit";
  }
  return "?";
}

QueryKind parse_query_kind(std::string_view text) {
  if (text == "subset") return QueryKind::Subset;
  if (text == "signed") return QueryKind::Signed;
  if (text == "digit") return QueryKind::Digit;
  throw InvalidArgument("unknown query family '" + std::string(text) + "'");
}

void SweepConfig::validate() const {
  method.validate();
  if (n_values.empty() || sigma_values.empty() || query_counts.empty()) {
    throw InvalidArgument("sweep: n, sigma and query-count lists must be non-empty");
  }
  if (trials < 1) throw InvalidArgument("sweep: trials must be >= 1");
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("sweep: rho must lie in [0,1]");
  for (std::size_t n : n_values) {
    if (n < 1) throw InvalidArgument("sweep: n values must be >= 1");
  }
  for (double s : sigma_values) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidArgument("sweep: sigma values must be >= 0");
  }
  for (std::size_t m : query_counts) {
    if (m < 1) throw InvalidArgument("sweep: query counts must be >= 1");
  }
  for (double p : param_values) {
    if (!(p > 0.0)) throw InvalidArgument("sweep: B / cap values must be > 0");
  }
  if (query_kind == QueryKind::Digit &&
      *std::max_element(query_counts.begin(), query_counts.end()) > standard_family().size()) {
    throw InvalidArgument("sweep: digit family has only " +
                          std::to_string(standard_family().size()) + " queries");
  }
  if (suppression_threshold < 0) throw InvalidArgument("sweep: suppression threshold must be >= 0");
}

const AggregateRow* ResultTable::find(std::string_view label, std::size_t n, double sigma,
                                      std::size_t num_queries, double param) const {
  for (const AggregateRow& a : aggregates) {
    if (a.label == label && a.n == n && a.sigma == sigma && a.num_queries == num_queries &&
        a.param == param) {
      return &a;
    }
  }
  return nullptr;
}

std::vector<AggregateRow> aggregate(const std::vector<TrialRow>& rows) {
  std::vector<AggregateRow> out;
  std::size_t begin = 0;
  while (begin < rows.size()) {
    std::size_t end = begin + 1;
    while (end < rows.size() && same_point(rows[begin], rows[end])) ++end;

    const TrialRow& first = rows[begin];
    AggregateRow a;
    a.label = first.label;
    a.method = first.method;
    a.n = first.n;
    a.sigma = first.sigma;
    a.num_queries = first.num_queries;
    a.param = first.param;
    a.trials = end - begin;

    std::size_t feasible = 0, scored_all = 0;
    double objective = 0.0, accuracy = 0.0, fp = 0.0, fn = 0.0, all = 0.0, used = 0.0, ms = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      const TrialRow& r = rows[k];
      used += static_cast<double>(r.queries_used);
      ms += r.solve_ms;
      if (r.score) {
        ++feasible;
        objective += r.objective;
        accuracy += r.score->accuracy;
        fp += static_cast<double>(r.score->false_positives);
        fn += static_cast<double>(r.score->false_negatives);
        all += r.score->accuracy;
        ++scored_all;
      } else if (r.excess_accuracy) {
        all += *r.excess_accuracy;
        ++scored_all;
      }
    }
    const auto t = static_cast<double>(a.trials);
    a.feasible_fraction = static_cast<double>(feasible) / t;
    if (feasible > 0) {
      const auto f = static_cast<double>(feasible);
      a.mean_objective = objective / f;
      a.mean_accuracy = accuracy / f;
      a.mean_false_pos = fp / f;
      a.mean_false_neg = fn / f;
    }
    if (scored_all == a.trials) a.mean_accuracy_all = all / t;
    a.mean_queries_used = used / t;
    a.mean_solve_ms = ms / t;
    out.push_back(std::move(a));
    begin = end;
  }
  return out;
}

ResultTable run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const std::vector<double> params = sweep_params(cfg);
  const std::size_t max_queries = *std::max_element(cfg.query_counts.begin(), cfg.query_counts.end());

  // The dataset is fixed per n. Random families are drawn per (n, trial) at
  // the largest count and shared, by prefix, across the other axes; the
  // digit family is deterministic and shared by all trials.
  const std::size_t nn = cfg.n_values.size();
  std::vector<Dataset> datasets;
  std::vector<QueryMatrix> matrices;
  const std::size_t per_n = cfg.query_kind == QueryKind::Digit ? 1 : cfg.trials;
  for (std::size_t ni = 0; ni < nn; ++ni) {
    const std::size_t n = cfg.n_values[ni];
    datasets.push_back(synth(n, cfg.rho, derive_seed(cfg.root_seed, {kDataKey, n})));
    for (std::size_t t = 0; t < per_n; ++t) {
      QueryFamily f;
      if (cfg.query_kind == QueryKind::Digit) {
        f = truncate(standard_family(), max_queries);
      } else {
        f = random_subset_family(n, max_queries, derive_seed(cfg.root_seed, {kFamilyKey, n, t}));
        if (cfg.query_kind == QueryKind::Signed) f = signed_variant(f);
      }
      matrices.push_back(materialize_all(f, datasets.back().ids()));
    }
  }

  std::vector<Job> jobs;
  for (std::size_t ni = 0; ni < nn; ++ni) {
    const std::size_t n = cfg.n_values[ni];
    for (double param : params) {
      for (double sigma : cfg.sigma_values) {
        for (std::size_t m : cfg.query_counts) {
          for (std::size_t t = 0; t < cfg.trials; ++t) {
            Job j;
            j.label = &cfg.name;
            j.method = with_param(cfg.method, param);
            j.noise.sigma = sigma;
            j.noise.suppression_enabled = cfg.suppression;
            j.noise.suppression_threshold = cfg.suppression_threshold;
            j.matrix = &matrices[ni * per_n + (per_n == 1 ? 0 : t)];
            j.num_queries = m;
            j.truth = &datasets[ni].bits();
            j.param = param;
            j.seed = derive_seed(cfg.root_seed,
                                 {kNoiseKey, n, key_of(sigma), m, key_of(param), t});
            j.trial = t;
            jobs.push_back(j);
          }
        }
      }
    }
  }

  ResultTable table;
  table.root_seed = cfg.root_seed;
  table.record_timing = cfg.record_timing;
  table.rows = run_jobs(jobs, cfg.jobs);
  table.aggregates = aggregate(table.rows);
  table.manifest = {
      {"experiment", cfg.name},
      {"method", to_string(cfg.method.kind)},
      {"query_kind", to_string(cfg.query_kind)},
      {"n_values", join(cfg.n_values)},
      {"sigma_values", join(cfg.sigma_values)},
      {"query_counts", join(cfg.query_counts)},
      {"param_values", join(params)},
      {"trials", std::to_string(cfg.trials)},
      {"rho", format_real(cfg.rho)},
      {"suppression", cfg.suppression ? "true" : "false"},
      {"suppression_threshold", std::to_string(cfg.suppression_threshold)},
      {"dataset_seed_rule", "derive_seed(root, DATA, n)"},
      {"family_seed_rule", cfg.query_kind == QueryKind::Digit
                               ? "standard digit family, first num_queries"
                               : "derive_seed(root, FAMI, n, trial), first num_queries"},
      {"noise_seed_rule", "derive_seed(root, NOIS, n, sigma bits, num_queries, param bits, trial)"},
  };
  return table;
}

ResultTable sweep_sigma(const SweepConfig& cfg) {
  if (cfg.query_counts.size() != 1) throw InvalidArgument("sweep_sigma needs exactly one query count");
  return run_sweep(cfg);
}

ResultTable sweep_queries(const SweepConfig& cfg) {
  if (cfg.sigma_values.size() != 1) throw InvalidArgument("sweep_queries needs exactly one sigma");
  return run_sweep(cfg);
}

ResultTable infer_presence(const Dataset& population, const PresenceConfig& cfg) {
  if (cfg.trials < 1) throw InvalidArgument("presence: trials must be >= 1");
  if (cfg.width < 1) throw InvalidArgument("presence: width must be >= 1");
  const PresenceInstance inst = presence_window(population, cfg.lo, cfg.width);
  const std::string label =
      "presence:" + std::to_string(cfg.lo) + "-" + std::to_string(cfg.lo + cfg.width);
  const QueryFamily family = truncate(standard_family(), cfg.num_queries);
  const QueryMatrix matrix = materialize_all(family, inst.candidate_ids);

  std::vector<Job> jobs;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    Job j;
    j.label = &label;
    j.noise.sigma = cfg.sigma;
    j.noise.suppression_enabled = cfg.suppression;
    j.noise.suppression_threshold = cfg.suppression_threshold;
    j.matrix = &matrix;
    j.num_queries = matrix.rows;
    j.truth = &inst.present;
    j.seed = derive_seed(cfg.root_seed, {kNoiseKey, cfg.lo, cfg.width, t});
    j.trial = t;
    jobs.push_back(j);
  }
  ResultTable table;
  table.root_seed = cfg.root_seed;
  table.record_timing = cfg.record_timing;
  table.rows = run_jobs(jobs, cfg.jobs);
  table.aggregates = aggregate(table.rows);
  std::size_t present = 0;
  for (auto p : inst.present) present += p;
  table.manifest = {
      {"experiment", "presence"},
      {"population", population.name()},
      {"window", "[" + std::to_string(cfg.lo) + "," + std::to_string(cfg.lo + cfg.width) + ")"},
      {"present", std::to_string(present)},
      {"num_queries", std::to_string(matrix.rows)},
      {"sigma", format_real(cfg.sigma)},
      {"suppression", cfg.suppression ? "true" : "false"},
      {"suppression_threshold", std::to_string(cfg.suppression_threshold)},
      {"trials", std::to_string(cfg.trials)},
      {"noise_seed_rule", "derive_seed(root, NOIS, lo, width, trial)"},
  };
  return table;
}

std::vector<Table1Scenario> table1_scenarios() {
  return {
      {"2000-3000:C", 2000, 3000, "C", std::nullopt, std::nullopt},
      {"3000-5000:C", 3000, 5000, "C", std::nullopt, std::nullopt},
      {"5000-7000:C", 5000, 7000, "C", std::nullopt, std::nullopt},
      {"10000-12000:A", 10000, 12000, "A", std::nullopt, std::nullopt},
      {"10000-12000:A:e<=1.4", 10000, 12000, "A", Exponent(7, 5), std::size_t{2000}},
      {"10000-12000:A:e<=0.8", 10000, 12000, "A", Exponent(4, 5), std::nullopt},
  };
}

ResultTable table1_analog(const Table1Config& cfg) {
  if (cfg.trials < 1) throw InvalidArgument("table1: trials must be >= 1");
  const std::size_t count = cfg.scenarios.size();
  std::vector<Dataset> targets;
  std::vector<QueryMatrix> matrices;
  const QueryFamily full = standard_family();
  for (const Table1Scenario& s : cfg.scenarios) {
    const Dataset loans =
        load_csv(cfg.loans_csv, LoansProfile::kIdColumn, LoansProfile::kAttrColumn, s.target_value);
    targets.push_back(restrict(loans, s.lo, s.hi));
    QueryFamily f = s.max_exponent ? filter_by_exponent(full, *s.max_exponent) : full;
    if (s.query_limit) f = truncate(f, *s.query_limit);
    matrices.push_back(materialize_all(f, targets.back().ids()));
  }

  Method method;
  method.kind = MethodKind::BoundedDMT;
  method.cap_multiplier = cfg.cap_multiplier;
  std::vector<Job> jobs;
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      Job j;
      j.label = &cfg.scenarios[k].label;
      j.method = method;
      j.noise.sigma = cfg.sigma;
      j.matrix = &matrices[k];
      j.num_queries = matrices[k].rows;
      j.truth = &targets[k].bits();
      j.param = cfg.cap_multiplier;
      j.seed = derive_seed(cfg.root_seed, {kNoiseKey, cfg.scenarios[k].lo, cfg.scenarios[k].hi,
                                           matrices[k].rows, t});
      j.trial = t;
      jobs.push_back(j);
    }
  }
  ResultTable table;
  table.root_seed = cfg.root_seed;
  table.record_timing = cfg.record_timing;
  table.rows = run_jobs(jobs, cfg.jobs);
  table.aggregates = aggregate(table.rows);
  table.manifest = {
      {"experiment", "table1"},
      {"loans_csv", cfg.loans_csv.filename().string()},
      {"method", "bounded-dmt"},
      {"cap_multiplier", format_real(cfg.cap_multiplier)},
      {"sigma", format_real(cfg.sigma)},
      {"trials", std::to_string(cfg.trials)},
      {"noise_seed_rule", "derive_seed(root, NOIS, lo, hi, num_queries, trial)"},
  };
  for (std::size_t k = 0; k < count; ++k) {
    const Table1Scenario& s = cfg.scenarios[k];
    std::ostringstream desc;
    desc << "[" << s.lo << "," << s.hi << "] status=" << s.target_value
         << " n=" << targets[k].size() << " queries=" << matrices[k].rows;
    if (s.max_exponent) desc << " e<=" << s.max_exponent->to_string();
    table.manifest.emplace_back("scenario." + s.label, desc.str());
  }
  return table;
}

void write_results(const ResultTable& t, std::ostream& out) {
  const auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : "NA"; };
  out << "record,label,trial,method,n,sigma,num_queries,B_or_cap,seed,feasible,objective,"
         "accuracy,false_pos,false_neg,queries_used,solve_ms,accuracy_all\n";
  for (const TrialRow& r : t.rows) {
    const std::optional<double> acc =
        r.score ? std::optional<double>(r.score->accuracy) : std::nullopt;
    out << "trial," << r.label << ',' << r.trial << ',' << to_string(r.method) << ',' << r.n << ','
        << format_real(r.sigma) << ',' << r.num_queries << ',' << format_real(r.param) << ','
        << r.seed << ',' << (r.feasible ? 1 : 0) << ','
        << (r.feasible ? format_real(r.objective) : "NA") << ',' << opt(acc) << ','
        << (r.score ? std::to_string(r.score->false_positives) : "NA") << ','
        << (r.score ? std::to_string(r.score->false_negatives) : "NA") << ',' << r.queries_used
        << ',' << (t.record_timing ? format_real(r.solve_ms) : "NA") << ','
        << opt(acc ? acc : r.excess_accuracy) << '\n';
  }
  for (const AggregateRow& a : t.aggregates) {
    const bool any = a.mean_accuracy.has_value();
    out << "aggregate," << a.label << ',' << a.trials << ',' << to_string(a.method) << ',' << a.n
        << ',' << format_real(a.sigma) << ',' << a.num_queries << ',' << format_real(a.param) << ','
        << t.root_seed << ',' << format_real(a.feasible_fraction) << ','
        << (any ? format_real(a.mean_objective) : "NA") << ',' << opt(a.mean_accuracy) << ','
        << (any ? format_real(a.mean_false_pos) : "NA") << ','
        << (any ? format_real(a.mean_false_neg) : "NA") << ',' << format_real(a.mean_queries_used)
        << ',' << (t.record_timing ? format_real(a.mean_solve_ms) : "NA") << ','
        << opt(a.mean_accuracy_all) << '\n';
  }
}

void write_results(const ResultTable& t, const std::filesystem::path& path) {
  std::ofstream out;
  open_for_write(out, path);
  write_results(t, out);
  if (!out) throw Error("failed writing " + path.string());
}

void write_manifest(const ResultTable& t, std::ostream& out) {
  out << "lprlab_version = " << LPRLAB_VERSION << '\n';
  out << "root_seed = " << t.root_seed << '\n';
  for (const auto& [key, value] : t.manifest) out << key << " = " << value << '\n';
  out << "trial_rows = " << t.rows.size() << '\n';
  out << "aggregate_rows = " << t.aggregates.size() << '\n';
  out << "timing_recorded = " << (t.record_timing ? "true" : "false") << '\n';
}

void write_manifest(const ResultTable& t, const std::filesystem::path& path) {
  std::ofstream out;
  open_for_write(out, path);
  write_manifest(t, out);
  if (!out) throw Error("failed writing " + path.string());
}

std::optional<double> first_crossing(const ResultTable& t, std::string_view label, std::size_t n,
                                     double param, CrossingAxis axis, double threshold) {
  for (const AggregateRow& a : t.aggregates) {
    if (a.label != label || a.n != n || a.param != param || !a.mean_accuracy) continue;
    if (axis == CrossingAxis::Sigma && *a.mean_accuracy < threshold) return a.sigma;
    if (axis == CrossingAxis::Queries && *a.mean_accuracy >= threshold) {
      return static_cast<double>(a.num_queries);
    }
  }
  return std::nullopt;
}

}  // namespace lprlab
