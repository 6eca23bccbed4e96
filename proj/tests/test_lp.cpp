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
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "lprlab/error.hpp"
#include "lprlab/lp/kernels.hpp"
#include "lprlab/lp/simplex.hpp"

using namespace lprlab;
using namespace lprlab::lp;

namespace {

// Brute-force oracle for small boxed LPs: every vertex lies on n active
// constraints drawn from the rows and the variable bounds, so enumerate all
// n-subsets, solve each square system and keep the best feasible point.
struct Hyperplane {
  std::vector<long double> a;
  long double b;
};

std::optional<std::vector<long double>> solve_square(std::vector<Hyperplane> sys) {
  const std::size_t n = sys.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(sys[r].a[col]) > std::fabs(sys[piv].a[col])) piv = r;
    }
    if (std::fabs(sys[piv].a[col]) < 1e-12L) return std::nullopt;
    std::swap(sys[col], sys[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const long double f = sys[r].a[col] / sys[col].a[col];
      for (std::size_t k = col; k < n; ++k) sys[r].a[k] -= f * sys[col].a[k];
      sys[r].b -= f * sys[col].b;
    }
  }
  std::vector<long double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = sys[i].b / sys[i].a[i];
  return z;
}

bool feasible_point(const LPProblem& p, const std::vector<long double>& z) {
  const long double tol = 1e-7L;
  for (std::size_t j = 0; j < p.num_vars; ++j) {
    if (z[j] < p.bounds[j].lower - tol || z[j] > p.bounds[j].upper + tol) return false;
  }
  for (const Row& row : p.rows) {
    long double act = 0;
    for (const Term& t : row.terms) act += t.coef * z[t.var];
    if (row.relation != Relation::GreaterEqual && act > row.rhs + tol) return false;
    if (row.relation != Relation::LessEqual && act < row.rhs - tol) return false;
  }
  return true;
}

// Minimum objective over all vertices, or nullopt when no vertex is feasible.
std::optional<long double> vertex_oracle(const LPProblem& p) {
  const std::size_t n = p.num_vars;
  std::vector<Hyperplane> planes;
  for (const Row& row : p.rows) {
    Hyperplane h{std::vector<long double>(n, 0), row.rhs};
    for (const Term& t : row.terms) h.a[t.var] += t.coef;
    planes.push_back(h);
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (double v : {p.bounds[j].lower, p.bounds[j].upper}) {
      Hyperplane h{std::vector<long double>(n, 0), v};
      h.a[j] = 1;
      planes.push_back(h);
    }
  }
  std::optional<long double> best;
  std::vector<bool> pick(planes.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(n), true);
  do {
    std::vector<Hyperplane> sys;
    for (std::size_t i = 0; i < planes.size(); ++i) {
      if (pick[i]) sys.push_back(planes[i]);
    }
    const auto z = solve_square(sys);
    if (!z || !feasible_point(p, *z)) continue;
    long double obj = 0;
    for (std::size_t j = 0; j < n; ++j) obj += p.objective[j] * (*z)[j];
    if (!best || obj < *best) best = obj;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

LPProblem random_boxed(std::mt19937_64& g, bool integral) {
  std::uniform_int_distribution<int> nvars(1, 4), nrows(1, 5), rel(0, 2), small(-4, 4);
  std::uniform_real_distribution<double> real(-3.0, 3.0);
  auto coef = [&] { return integral ? static_cast<double>(small(g)) : real(g); };
  LPProblem p(static_cast<std::size_t>(nvars(g)));
  for (std::size_t j = 0; j < p.num_vars; ++j) {
    const double lo = static_cast<double>(small(g));
    p.bounds[j] = {lo, lo + 1.0 + static_cast<double>(std::abs(small(g)))};
    p.objective[j] = (g() % 5 == 0) ? 0.0 : coef();
  }
  const int rows = nrows(g);
  for (int r = 0; r < rows; ++r) {
    std::vector<Term> terms;
    for (std::size_t j = 0; j < p.num_vars; ++j) {
      if (g() % 3 != 0) terms.push_back({j, coef()});
    }
    const int kind = rel(g);
    p.add_row(std::move(terms),
              kind == 0 ? Relation::LessEqual : kind == 1 ? Relation::GreaterEqual : Relation::Equal,
              coef());
  }
  return p;
}

void check_duals(const LPProblem& p, const LPSolution& s) {
  ASSERT_EQ(s.row_duals.size(), p.rows.size());
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    const Row& row = p.rows[r];
    const double act = row_activity(row, s.assignment);
    const double y = s.row_duals[r];
    const bool binding = std::abs(act - row.rhs) <= 1e-6;
    if (!binding) {
      EXPECT_NEAR(y, 0.0, 1e-7);
    } else if (row.relation == Relation::GreaterEqual) {
      EXPECT_GE(y, -1e-7);
    } else if (row.relation == Relation::LessEqual) {
      EXPECT_LE(y, 1e-7);
    }
  }
}

}  // namespace

TEST(Simplex, TwoVariableOptimum) {
  // min -x - y  s.t.  x + 2y <= 4, 3x + y <= 6, x, y >= 0  ->  (1.6, 1.2).
  LPProblem p(2);
  p.objective = {-1.0, -1.0};
  p.add_row({{0, 1.0}, {1, 2.0}}, Relation::LessEqual, 4.0);
  p.add_row({{0, 3.0}, {1, 1.0}}, Relation::LessEqual, 6.0);
  for (Algorithm a : {Algorithm::Auto, Algorithm::Primal}) {
    SolveOptions o;
    o.algorithm = a;
    const LPSolution s = solve(p, o);
    ASSERT_EQ(s.status, SolveStatus::Optimal);
    EXPECT_NEAR(s.assignment[0], 1.6, 1e-9);
    EXPECT_NEAR(s.assignment[1], 1.2, 1e-9);
    EXPECT_NEAR(s.objective_value, -2.8, 1e-9);
    EXPECT_TRUE(verify(p, s));
    check_duals(p, s);
  }
}

TEST(Simplex, ReportsInfeasibleAndUnbounded) {
  LPProblem infeasible(1);
  infeasible.bounds[0] = {0.0, 1.0};
  infeasible.add_row({{0, 1.0}}, Relation::GreaterEqual, 2.0);
  EXPECT_EQ(solve(infeasible).status, SolveStatus::Infeasible);
  infeasible.objective = {1.0};
  EXPECT_EQ(solve(infeasible).status, SolveStatus::Infeasible);

  LPProblem unbounded(2);
  unbounded.objective = {-1.0, 0.0};
  unbounded.add_row({{0, 1.0}, {1, -1.0}}, Relation::LessEqual, 1.0);
  EXPECT_EQ(solve(unbounded).status, SolveStatus::Unbounded);
}

TEST(Simplex, ZeroObjectiveStopsAtFeasibility) {
  LPProblem p(3);
  p.add_row({{0, 1.0}, {1, 1.0}, {2, 1.0}}, Relation::Equal, 2.0);
  p.add_row({{0, 1.0}, {2, -1.0}}, Relation::GreaterEqual, 0.5);
  const LPSolution s = solve(p);
  EXPECT_EQ(s.status, SolveStatus::Feasible);
  EXPECT_TRUE(verify(p, s));
}

TEST(Simplex, DualRequestNeedsFiniteRestingBounds) {
  LPProblem p(1);
  p.objective = {-1.0};
  p.add_row({{0, 1.0}}, Relation::LessEqual, 3.0);
  SolveOptions o;
  o.algorithm = Algorithm::Dual;
  EXPECT_THROW(solve(p, o), InvalidArgument);
}

TEST(Simplex, AgreesWithVertexEnumeration) {
  std::mt19937_64 g(31337);
  int feasible = 0, infeasible = 0;
  for (int t = 0; t < 200; ++t) {
    const LPProblem p = random_boxed(g, t % 2 == 0);
    const auto truth = vertex_oracle(p);
    const bool zero = p.objective_is_zero();
    for (Algorithm a : {Algorithm::Auto, Algorithm::Primal, Algorithm::Dual}) {
      SolveOptions o;
      o.algorithm = a;
      const LPSolution s = solve(p, o);
      SCOPED_TRACE("case " + std::to_string(t) + " algorithm " + std::to_string(static_cast<int>(a)));
      if (!truth) {
        ASSERT_EQ(s.status, SolveStatus::Infeasible);
        continue;
      }
      ASSERT_TRUE(s.has_point());
      EXPECT_TRUE(verify(p, s));
      if (zero && a != Algorithm::Dual) {
        EXPECT_EQ(s.status, SolveStatus::Feasible);
        continue;
      }
      ASSERT_EQ(s.status, SolveStatus::Optimal);
      EXPECT_NEAR(s.objective_value, static_cast<double>(*truth), 1e-7);
      check_duals(p, s);
    }
    (truth ? feasible : infeasible)++;
  }
  EXPECT_GT(feasible, 40);
  EXPECT_GT(infeasible, 20);
}

TEST(Simplex, DegenerateIntegralLpsTerminate) {
  // Many equal integer costs and a shared right-hand side: heavy ties in both
  // the primal and dual ratio tests.
  std::mt19937_64 g(5);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 30;
    LPProblem p(n);
    for (std::size_t j = 0; j < n; ++j) {
      p.bounds[j] = {0.0, 1.0};
      p.objective[j] = static_cast<double>(static_cast<int>(g() % 3) - 1);
    }
    for (int r = 0; r < 40; ++r) {
      std::vector<Term> terms;
      for (std::size_t j = 0; j < n; ++j) {
        if (g() & 1) terms.push_back({j, 1.0});
      }
      p.add_row(std::move(terms), Relation::LessEqual, 2.0);
    }
    SolveOptions dual, primal;
    primal.algorithm = Algorithm::Primal;
    const LPSolution a = solve(p, dual), b = solve(p, primal);
    ASSERT_EQ(a.status, SolveStatus::Optimal);
    ASSERT_EQ(b.status, SolveStatus::Optimal);
    EXPECT_NEAR(a.objective_value, b.objective_value, 1e-8);
    EXPECT_TRUE(verify(p, a));
  }
}

TEST(Simplex, ObjectiveScalingAndRelaxationMonotonicity) {
  std::mt19937_64 g(77);
  for (int t = 0; t < 30; ++t) {
    LPProblem p = random_boxed(g, false);
    const LPSolution base = solve(p);
    if (base.status != SolveStatus::Optimal) continue;
    LPProblem scaled = p;
    for (double& c : scaled.objective) c *= 8.0;
    EXPECT_NEAR(solve(scaled).objective_value, 8.0 * base.objective_value, 1e-6);

    // Loosening every row cannot make the optimum worse.
    LPProblem loose = p;
    for (Row& row : loose.rows) {
      if (row.relation == Relation::LessEqual) row.rhs += 1.0;
      if (row.relation == Relation::GreaterEqual) row.rhs -= 1.0;
    }
    const LPSolution l = solve(loose);
    ASSERT_EQ(l.status, SolveStatus::Optimal);
    EXPECT_LE(l.objective_value, base.objective_value + 1e-8);
  }
}

TEST(Simplex, SerialAndParallelKernelsAgree) {
  std::mt19937_64 g(3);
  const std::size_t n = 120;
  LPProblem p(n);
  for (std::size_t j = 0; j < n; ++j) {
    p.bounds[j] = {0.0, 1.0};
    p.objective[j] = static_cast<double>(static_cast<int>(g() % 7) - 3);
  }
  for (int r = 0; r < 700; ++r) {
    std::vector<Term> terms;
    for (std::size_t j = 0; j < n; ++j) {
      if (g() % 4 == 0) terms.push_back({j, static_cast<double>(g() % 5)});
    }
    p.add_row(std::move(terms), Relation::LessEqual, 4.0 + static_cast<double>(g() % 6));
  }
  SolveOptions serial, parallel;
  serial.kernel = KernelMode::Serial;
  parallel.kernel = KernelMode::Parallel;
  const LPSolution a = solve(p, serial), b = solve(p, parallel);
  ASSERT_EQ(a.status, SolveStatus::Optimal);
  EXPECT_EQ(a.assignment, b.assignment);
  EXPECT_EQ(a.objective_value, b.objective_value);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Kernels, PivotMatchesDefinition) {
  std::mt19937_64 g(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t rows = 300, cols = 400;
  std::vector<double> tab(rows * cols), cost(cols);
  for (double& v : tab) v = u(g);
  for (double& v : cost) v = u(g);
  std::vector<double> t2 = tab, c2 = cost;
  const std::size_t r = 17, q = 123;
  const std::vector<double> orig = tab, corig = cost;
  kernels::pivot_serial(tab, rows, cols, cost, r, q);
  kernels::pivot_parallel(t2, rows, cols, c2, r, q);
  EXPECT_EQ(tab, t2);
  EXPECT_EQ(cost, c2);
  const double pv = orig[r * cols + q];
  for (std::size_t k = 0; k < rows; k += 37) {
    for (std::size_t j = 0; j < cols; j += 41) {
      const double expect = k == r ? orig[r * cols + j] / pv
                                   : orig[k * cols + j] - orig[k * cols + q] * orig[r * cols + j] / pv;
      EXPECT_NEAR(tab[k * cols + j], expect, 1e-9);
    }
  }
  for (std::size_t k = 0; k < rows; ++k) EXPECT_NEAR(tab[k * cols + q], k == r ? 1.0 : 0.0, 1e-12);
  EXPECT_NEAR(cost[q], 0.0, 1e-12);
}

TEST(Verify, ClosedTolerance) {
  LPProblem p(1);
  p.bounds[0] = {0.0, 1.0};
  p.add_row({{0, 1.0}}, Relation::LessEqual, 0.5);
  const std::vector<double> edge{0.5 + 5e-8}, over{0.5 + 1e-6};
  EXPECT_TRUE(verify(p, edge));
  EXPECT_FALSE(verify(p, over));
  EXPECT_FALSE(verify(p, std::vector<double>{-0.01}));
}

TEST(Problem, ValidateRejectsMalformedInput) {
  LPProblem p(1);
  p.bounds[0] = {2.0, 1.0};
  EXPECT_THROW(p.validate(), InvalidArgument);
  LPProblem q(1);
  q.add_row({{3, 1.0}}, Relation::LessEqual, 1.0);
  EXPECT_THROW(q.validate(), InvalidArgument);
}

TEST(Mps, ContainsSections) {
  LPProblem p(2);
  p.objective = {1.0, -2.0};
  p.bounds[1] = {-1.0, 3.0};
  p.add_row({{0, 1.0}, {1, 1.0}}, Relation::Equal, 1.0);
  std::ostringstream out;
  write_mps(p, out, "T");
  const std::string s = out.str();
  for (const char* section : {"NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA"}) {
    EXPECT_NE(s.find(section), std::string::npos) << section;
  }
}
