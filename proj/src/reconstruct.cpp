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

#include "lprlab/reconstruct.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "lprlab/error.hpp"

namespace lprlab {
namespace {

constexpr double kGapTolerance = 1e-6;

// Rows and answers that survived suppression.
struct Usable {
  std::vector<std::size_t> rows;
  std::vector<double> values;
};

Usable usable_rows(const QueryMatrix& queries, const AnswerSet& answers) {
  if (answers.size() != queries.rows) {
    throw InvalidArgument("answer set has " + std::to_string(answers.size()) +
                          " answers for " + std::to_string(queries.rows) + " queries");
  }
  Usable u;
  for (std::size_t q = 0; q < queries.rows; ++q) {
    if (answers.answers[q].suppressed()) continue;
    u.rows.push_back(q);
    u.values.push_back(answers.answers[q].value);
  }
  if (u.rows.empty()) throw NoUsableQueries("zero usable queries: every answer was suppressed");
  return u;
}

std::vector<lp::Term> query_terms(const QueryMatrix& queries, std::size_t q, double scale) {
  std::vector<lp::Term> terms;
  const auto row = queries.row(q);
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] != 0) terms.push_back({i, scale * row[i]});
  }
  return terms;
}

lp::LPProblem l1_problem(const QueryMatrix& queries, const Usable& u, double t_upper) {
  const std::size_t n = queries.cols;
  lp::LPProblem p(n + u.rows.size());
  for (std::size_t i = 0; i < n; ++i) {
    p.bounds[i] = {0.0, 1.0};
    p.var_names.push_back("X" + std::to_string(i));
  }
  for (std::size_t k = 0; k < u.rows.size(); ++k) {
    const std::size_t t = n + k;
    p.bounds[t] = {0.0, t_upper};
    p.objective[t] = 1.0;
    p.var_names.push_back("T" + std::to_string(k));
    // t + q(x) >= a   and   t - q(x) >= -a
    auto plus = query_terms(queries, u.rows[k], 1.0);
    plus.push_back({t, 1.0});
    p.add_row(std::move(plus), lp::Relation::GreaterEqual, u.values[k]);
    auto minus = query_terms(queries, u.rows[k], -1.0);
    minus.push_back({t, 1.0});
    p.add_row(std::move(minus), lp::Relation::GreaterEqual, -u.values[k]);
  }
  return p;
}

void require_sigma(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be >= 0");
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

constexpr double kExcessTolerance = 1e-7;

double max_excess(const QueryMatrix& queries, const Usable& u, const std::vector<double>& x,
                  double bound) {
  double worst = 0.0;
  for (std::size_t k = 0; k < u.rows.size(); ++k) {
    const auto row = queries.row(u.rows[k]);
    double v = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) v += row[i] * std::clamp(x[i], 0.0, 1.0);
    worst = std::max(worst, std::abs(u.values[k] - v) - bound);
  }
  return worst;
}

lp::LPProblem compact_dual(const QueryMatrix& queries, const Usable& u, const Method& method,
                           double sigma, double cap_penalty);

// Whether some x in the box keeps every residual within the cap.
bool caps_satisfiable(const QueryMatrix& queries, const Usable& u, double sigma, double cap,
                      const lp::SolveOptions& options) {
  Method m;
  m.kind = MethodKind::DiNi;
  m.error_bound_multiplier = cap;
  const lp::LPSolution sol = lp::solve(compact_dual(queries, u, m, sigma, 0.0), options);
  return sol.status == lp::SolveStatus::Optimal &&
         -sol.objective_value <= kExcessTolerance * static_cast<double>(u.rows.size());
}

}  // namespace

const char* to_string(MethodKind k) {
  switch (k) {
    case MethodKind::DMT: return "dmt";
    case MethodKind::DiNi: return "dini";
    case MethodKind::BoundedDMT: return "bounded-dmt";
  }
  return "?";
}

MethodKind parse_method(std::string_view text) {
  if (text == "dmt") return MethodKind::DMT;
  if (text == "dini") return MethodKind::DiNi;
  if (text == "bounded-dmt" || text == "bounded") return MethodKind::BoundedDMT;
  throw InvalidArgument("unknown method '" + std::string(text) + "'");
}

void Method::validate() const {
  if (!(error_bound_multiplier > 0.0)) throw InvalidArgument("error bound multiplier must be > 0");
  if (!(cap_multiplier > 0.0)) throw InvalidArgument("cap multiplier must be > 0");
}

double Method::parameter() const {
  switch (kind) {
    case MethodKind::DMT: return 0.0;
    case MethodKind::DiNi: return error_bound_multiplier;
    case MethodKind::BoundedDMT: return cap_multiplier;
  }
  return 0.0;
}

lp::LPProblem build_dmt(const QueryMatrix& queries, const AnswerSet& answers) {
  return l1_problem(queries, usable_rows(queries, answers), lp::kInf);
}

lp::LPProblem build_bounded_dmt(const QueryMatrix& queries, const AnswerSet& answers,
                                double sigma, double cap_multiplier) {
  require_sigma(sigma);
  if (!(cap_multiplier > 0.0)) throw InvalidArgument("cap multiplier must be > 0");
  return l1_problem(queries, usable_rows(queries, answers), cap_multiplier * sigma);
}

lp::LPProblem build_dini(const QueryMatrix& queries, const AnswerSet& answers, double B,
                         double sigma) {
  require_sigma(sigma);
  if (!(B > 0.0)) throw InvalidArgument("error bound multiplier must be > 0");
  const Usable u = usable_rows(queries, answers);
  const double bound = B * sigma;
  lp::LPProblem p(queries.cols);
  for (std::size_t i = 0; i < queries.cols; ++i) {
    p.bounds[i] = {0.0, 1.0};
    p.var_names.push_back("X" + std::to_string(i));
  }
  for (std::size_t k = 0; k < u.rows.size(); ++k) {
    p.add_row(query_terms(queries, u.rows[k], 1.0), lp::Relation::GreaterEqual, u.values[k] - bound);
    p.add_row(query_terms(queries, u.rows[k], 1.0), lp::Relation::LessEqual, u.values[k] + bound);
  }
  return p;
}

lp::LPProblem build_primal(const QueryMatrix& queries, const AnswerSet& answers,
                           const Method& method, double sigma) {
  method.validate();
  switch (method.kind) {
    case MethodKind::DMT: return build_dmt(queries, answers);
    case MethodKind::DiNi: return build_dini(queries, answers, method.error_bound_multiplier, sigma);
    case MethodKind::BoundedDMT:
      return build_bounded_dmt(queries, answers, sigma, method.cap_multiplier);
  }
  throw InvalidArgument("unknown method");
}

namespace {

// Penalty weight on cap excess in the BoundedDMT compact dual. It only has to
// exceed the largest cap multiplier at the optimum; attack() raises it when a
// solve comes back over the cap although the caps are satisfiable.
constexpr double kInitialCapPenalty = 64.0;
constexpr int kPenaltyRounds = 4;

lp::LPProblem compact_dual(const QueryMatrix& queries, const Usable& u, const Method& method,
                           double sigma, double cap_penalty) {
  const std::size_t n = queries.cols;
  // Columns per query: y in [-1,1] for DMT; its positive and negative parts
  // for DiNi, whose conjugate needs |y|; y plus the two excess parts for
  // BoundedDMT.
  const std::size_t per_query = method.kind == MethodKind::DMT    ? 1
                                : method.kind == MethodKind::DiNi ? 2
                                                                  : 3;
  const std::size_t ny = per_query * u.rows.size();
  lp::LPProblem p(ny + n);
  std::vector<double> column_sign(per_query, 1.0);
  column_sign.back() = per_query == 1 ? 1.0 : -1.0;

  for (std::size_t k = 0; k < u.rows.size(); ++k) {
    const double a = u.values[k];
    const std::size_t base = per_query * k;
    switch (method.kind) {
      case MethodKind::DMT:
        // phi = |r|, phi* = indicator(|y| <= 1)
        p.bounds[base] = {-1.0, 1.0};
        p.objective[base] = -a;
        break;
      case MethodKind::DiNi: {
        // phi = max(0, |r| - E), phi* = E |y| + indicator(|y| <= 1)
        const double e = method.error_bound_multiplier * sigma;
        p.bounds[base] = {0.0, 1.0};
        p.bounds[base + 1] = {0.0, 1.0};
        p.objective[base] = -a + e;
        p.objective[base + 1] = a + e;
        break;
      }
      case MethodKind::BoundedDMT: {
        // phi = |r| + M max(0, |r| - C); the last two carry the excess
        const double cap = method.cap_multiplier * sigma;
        p.bounds[base] = {-1.0, 1.0};
        p.objective[base] = -a;
        p.bounds[base + 1] = {0.0, cap_penalty};
        p.bounds[base + 2] = {0.0, cap_penalty};
        p.objective[base + 1] = -a + cap;
        p.objective[base + 2] = a + cap;
        break;
      }
    }
  }
  std::vector<std::vector<lp::Term>> rows(n);
  for (std::size_t k = 0; k < u.rows.size(); ++k) {
    const auto coef = queries.row(u.rows[k]);
    for (std::size_t i = 0; i < n; ++i) {
      if (coef[i] == 0) continue;
      for (std::size_t c = 0; c < per_query; ++c) {
        rows[i].push_back({per_query * k + c, -column_sign[c] * coef[i]});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t w = ny + i;
    p.objective[w] = 1.0;
    rows[i].push_back({w, 1.0});
    p.add_row(std::move(rows[i]), lp::Relation::GreaterEqual, 0.0);
  }
  return p;
}

}  // namespace

lp::LPProblem build_compact_dual(const QueryMatrix& queries, const AnswerSet& answers,
                                 const Method& method, double sigma) {
  method.validate();
  require_sigma(sigma);
  return compact_dual(queries, usable_rows(queries, answers), method, sigma, kInitialCapPenalty);
}

std::vector<std::uint8_t> round_bits(std::span<const double> fractional) {
  std::vector<std::uint8_t> bits(fractional.size());
  for (std::size_t i = 0; i < fractional.size(); ++i) bits[i] = fractional[i] >= 0.5 ? 1 : 0;
  return bits;
}

Score score(std::span<const std::uint8_t> bits, std::span<const std::uint8_t> truth) {
  if (bits.size() != truth.size()) {
    throw InvalidArgument("score: " + std::to_string(bits.size()) + " bits against " +
                          std::to_string(truth.size()) + " truth values");
  }
  if (bits.empty()) throw InvalidArgument("score: empty vectors");
  Score s;
  std::size_t match = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == truth[i]) {
      ++match;
    } else if (truth[i] == 1) {
      ++s.false_negatives;
    } else {
      ++s.false_positives;
    }
  }
  s.accuracy = static_cast<double>(match) / static_cast<double>(bits.size());
  return s;
}

double truth_objective(const QueryMatrix& queries, const AnswerSet& answers,
                       std::span<const std::uint8_t> truth) {
  double total = 0.0;
  for (std::size_t q = 0; q < queries.rows; ++q) {
    if (answers.answers[q].suppressed()) continue;
    const auto row = queries.row(q);
    double v = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) v += row[i] * truth[i];
    total += std::abs(answers.answers[q].value - v);
  }
  return total;
}

ReconstructionResult attack(const QueryMatrix& queries, const AnswerSet& answers,
                            const Method& method, double sigma, const AttackOptions& options) {
  method.validate();
  require_sigma(sigma);
  const Usable u = usable_rows(queries, answers);
  const std::size_t n = queries.cols;
  const lp::LPProblem primal = build_primal(queries, answers, method, sigma);

  ReconstructionResult res;
  res.queries_used = u.rows.size();
  const auto start = std::chrono::steady_clock::now();

  std::vector<double> x;
  double dual_bound = 0.0;
  if (options.route == SolveRoute::Primal) {
    const lp::LPSolution sol = lp::solve(primal, options.solver);
    res.iterations = sol.iterations;
    res.solve_ms = elapsed_ms(start);
    if (!sol.has_point()) return res;
    x.assign(sol.assignment.begin(), sol.assignment.begin() + static_cast<std::ptrdiff_t>(n));
    dual_bound = sol.objective_value;
  } else {
    const double bound = method.kind == MethodKind::DiNi     ? method.error_bound_multiplier * sigma
                         : method.kind == MethodKind::BoundedDMT ? method.cap_multiplier * sigma
                                                                 : 0.0;
    double penalty = kInitialCapPenalty;
    for (int round = 0;; ++round) {
      const lp::LPSolution sol =
          lp::solve(compact_dual(queries, u, method, sigma, penalty), options.solver);
      res.iterations += sol.iterations;
      if (sol.status != lp::SolveStatus::Optimal) {
        throw Error(std::string("compact dual ended ") + lp::to_string(sol.status));
      }
      x = sol.row_duals;
      dual_bound = -sol.objective_value;
      if (method.kind == MethodKind::DMT) break;
      if (method.kind == MethodKind::DiNi) {
        // dual_bound is the least total excess over E; zero means feasible.
        if (dual_bound > kExcessTolerance * static_cast<double>(u.rows.size())) {
          res.solve_ms = elapsed_ms(start);
          res.excess_point = std::move(x);
          for (double& v : res.excess_point) v = std::clamp(v, 0.0, 1.0);
          return res;
        }
        break;
      }
      if (max_excess(queries, u, x, bound) <= options.solver.tol.feasibility) break;
      if (!caps_satisfiable(queries, u, sigma, method.cap_multiplier, options.solver)) {
        res.solve_ms = elapsed_ms(start);
        return res;
      }
      if (round + 1 >= kPenaltyRounds) throw Error("cap penalty did not converge");
      penalty *= 16.0;
    }
    res.solve_ms = elapsed_ms(start);
  }
  for (double& v : x) v = std::clamp(v, 0.0, 1.0);

  res.residuals.resize(u.rows.size());
  double l1 = 0.0;
  for (std::size_t k = 0; k < u.rows.size(); ++k) {
    const auto row = queries.row(u.rows[k]);
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) v += row[i] * x[i];
    res.residuals[k] = u.values[k] - v;
    l1 += std::abs(res.residuals[k]);
  }

  std::vector<double> point = x;
  if (method.kind != MethodKind::DiNi) {
    for (double r : res.residuals) point.push_back(std::abs(r));
  }
  if (!lp::verify(primal, point, options.solver.tol)) {
    throw Error(std::string("recovered point violates the ") + to_string(method.kind) + " program");
  }
  if (method.kind != MethodKind::DiNi &&
      std::abs(l1 - dual_bound) > kGapTolerance * std::max(1.0, std::abs(l1))) {
    throw Error("duality gap " + std::to_string(l1 - dual_bound) + " exceeds tolerance");
  }

  res.feasible = true;
  res.objective_value = method.kind == MethodKind::DiNi ? 0.0 : l1;
  res.fractional = std::move(x);
  res.bits = round_bits(res.fractional);
  return res;
}

Target Target::of(const Dataset& d) { return Target{d.ids(), d.bits()}; }

Target Target::of(const PresenceInstance& p) { return Target{p.candidate_ids, p.present}; }

ReconstructionResult reconstruct(const Target& target, const QueryFamily& family,
                                 const NoiseModel& nm, const Method& method, std::uint64_t seed,
                                 const AttackOptions& options) {
  const QueryMatrix m = materialize_all(family, target.ids);
  const AnswerSet answers = answer_matrix(m, target.truth, nm, seed);
  ReconstructionResult res = attack(m, answers, method, nm.sigma, options);
  if (res.feasible) res.score = score(res.bits, target.truth);
  if (!res.excess_point.empty()) res.excess_score = score(round_bits(res.excess_point), target.truth);
  return res;
}

}  // namespace lprlab
