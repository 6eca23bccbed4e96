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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lprlab/dataset.hpp"
#include "lprlab/lp/problem.hpp"
#include "lprlab/lp/simplex.hpp"
#include "lprlab/oracle.hpp"
#include "lprlab/querygen.hpp"

namespace lprlab {

enum class MethodKind { DMT, DiNi, BoundedDMT };

const char* to_string(MethodKind k);
MethodKind parse_method(std::string_view text);

/// Which LP to build. DiNi bounds each residual by B * sigma; BoundedDMT
/// keeps the L1 objective and caps each residual at cap_multiplier * sigma.
struct Method {
  MethodKind kind = MethodKind::DMT;
  double error_bound_multiplier = 3.0;
  double cap_multiplier = 5.0;

  void validate() const;
  /// B for DiNi, the cap multiplier for BoundedDMT, 0 for DMT.
  double parameter() const;
};

struct Score {
  double accuracy = 0.0;
  std::size_t false_positives = 0;  // truth 0, reconstructed 1
  std::size_t false_negatives = 0;  // truth 1, reconstructed 0
};

struct ReconstructionResult {
  std::vector<double> fractional;     // x' in [0,1]^n (empty when infeasible)
  std::vector<std::uint8_t> bits;     // rounded x' (empty when infeasible)
  std::vector<double> residuals;      // a_q - q(x') for each used query
  double objective_value = 0.0;
  bool feasible = false;
  std::optional<Score> score;
  std::size_t queries_used = 0;
  // Infeasible DiNi through the compact dual only: the box point minimizing
  // the total excess of |residual| over B*sigma, and its score.
  std::vector<double> excess_point;
  std::optional<Score> excess_score;
  std::size_t iterations = 0;
  double solve_ms = 0.0;
};

// Both routes solve the same program. CompactDual runs the simplex on the
// n-row Lagrangian dual (one row per record instead of two per query) and
// reads x' off the row multipliers; Primal solves the stated LP directly and
// is only practical for small instances.
enum class SolveRoute { CompactDual, Primal };

struct AttackOptions {
  SolveRoute route = SolveRoute::CompactDual;
  lp::SolveOptions solver;
};

/// Variables x'_0..x'_{n-1} in [0,1] then t_q >= 0 per usable answer; two
/// rows per usable answer, t_q >= +-(a_q - q(x')); objective sum t_q.
lp::LPProblem build_dmt(const QueryMatrix& queries, const AnswerSet& answers);

/// Variables x' in [0,1]; rows a_q - B*sigma <= q(x') <= a_q + B*sigma
/// (two per usable answer); zero objective.
lp::LPProblem build_dini(const QueryMatrix& queries, const AnswerSet& answers, double B,
                         double sigma);

/// build_dmt with t_q <= cap_multiplier * sigma.
lp::LPProblem build_bounded_dmt(const QueryMatrix& queries, const AnswerSet& answers,
                                double sigma, double cap_multiplier);

lp::LPProblem build_primal(const QueryMatrix& queries, const AnswerSet& answers,
                           const Method& method, double sigma);

/// The Lagrangian dual with the t variables eliminated:
///   min  -sum_q a_q y_q + sum_q phi*_q(y_q) + sum_i w_i
///   s.t. w_i - sum_q A_qi y_q >= 0,  w >= 0
/// with y_q boxed in [-1,1] (split into nonnegative parts where phi* needs
/// |y_q|) and phi* the conjugate of the per-query residual penalty phi. Row multipliers are the primal x'.
/// DMT uses phi = |r|. DiNi uses the excess max(0, |r| - B*sigma), whose
/// minimum is zero exactly when the DiNi program is feasible. BoundedDMT
/// adds a large multiple of the excess over the cap to |r|.
lp::LPProblem build_compact_dual(const QueryMatrix& queries, const AnswerSet& answers,
                                 const Method& method, double sigma);

/// 1 iff the value is >= 0.5.
std::vector<std::uint8_t> round_bits(std::span<const double> fractional);

Score score(std::span<const std::uint8_t> bits, std::span<const std::uint8_t> truth);

/// Sum over usable answers of |a_q - q(truth)|: the DMT objective at the
/// true database, an upper bound on the DMT optimum.
double truth_objective(const QueryMatrix& queries, const AnswerSet& answers,
                       std::span<const std::uint8_t> truth);

/// Build, solve and round. Suppressed answers are dropped; throws
/// NoUsableQueries when none remain. feasible=false leaves bits empty.
ReconstructionResult attack(const QueryMatrix& queries, const AnswerSet& answers,
                            const Method& method, double sigma, const AttackOptions& options = {});

/// The identifier universe to reconstruct over and its ground truth.
struct Target {
  std::vector<Identifier> ids;
  std::vector<std::uint8_t> truth;

  static Target of(const Dataset& d);
  static Target of(const PresenceInstance& p);
};

/// Oracle answers, attack and score in one call.
ReconstructionResult reconstruct(const Target& target, const QueryFamily& family,
                                 const NoiseModel& nm, const Method& method, std::uint64_t seed,
                                 const AttackOptions& options = {});

}  // namespace lprlab
