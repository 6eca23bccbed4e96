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
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace lprlab::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, Equal, GreaterEqual };

struct Term {
  std::size_t var = 0;
  double coef = 0.0;
};

/// sum(terms) <relation> rhs. Rows are stored sparsely; the solver densifies.
struct Row {
  std::vector<Term> terms;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

struct Bounds {
  double lower = 0.0;
  double upper = kInf;
};

/// minimize objective . z  subject to rows and per-variable bounds.
struct LPProblem {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<Row> rows;
  std::vector<Bounds> bounds;
  std::vector<std::string> var_names;  // optional, used by the MPS writer

  explicit LPProblem(std::size_t n = 0) : num_vars(n), objective(n, 0.0), bounds(n) {}

  std::size_t add_row(std::vector<Term> terms, Relation rel, double rhs);
  bool objective_is_zero() const;
  /// Throws InvalidArgument on out-of-range variables, crossed bounds or
  /// mis-sized vectors.
  void validate() const;
};

struct Tolerances {
  double feasibility = 1e-7;
  double optimality = 1e-9;
  double pivot = 1e-10;
};

enum class SolveStatus { Optimal, Feasible, Infeasible, Unbounded };

const char* to_string(SolveStatus s);

struct LPSolution {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> assignment;  // filled for Optimal / Feasible
  double objective_value = 0.0;
  std::size_t iterations = 0;
  // Multipliers y with reduced cost c_j - sum_r y_r a_rj; y_r >= 0 on binding
  // >= rows and <= 0 on binding <= rows of a minimization. Optimal only.
  std::vector<double> row_duals;

  bool has_point() const {
    return status == SolveStatus::Optimal || status == SolveStatus::Feasible;
  }
};

double row_activity(const Row& row, std::span<const double> z);

/// Closed-tolerance check of every bound and row; independent of the solver.
bool verify(const LPProblem& p, std::span<const double> assignment, const Tolerances& tol = {});
bool verify(const LPProblem& p, const LPSolution& s, const Tolerances& tol = {});

/// Fixed-format MPS text for cross-checking against external solvers.
void write_mps(const LPProblem& p, std::ostream& out, const std::string& name = "LPRLAB");

}  // namespace lprlab::lp
