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

#include "lprlab/kernel_mode.hpp"
#include "lprlab/lp/problem.hpp"

namespace lprlab::lp {

enum class Algorithm { Auto, Primal, Dual };

struct SolveOptions {
  // Auto runs the dual simplex whenever the slack basis can be made dual
  // feasible by resting each variable at the bound its cost prefers, and the
  // two-phase primal simplex otherwise. Dual throws when that start fails.
  Algorithm algorithm = Algorithm::Auto;
  Tolerances tol;
  // 0 selects 50 * (rows + vars).
  std::size_t iteration_limit = 0;
  // Consecutive degenerate pivots before switching from Dantzig to Bland.
  std::size_t bland_after = 50;
  KernelMode kernel = KernelMode::Parallel;
  // Bases up to this order are periodically refactorized with a dense LU and
  // polished after termination; larger tableaux rely on the pivots alone.
  std::size_t refactor_limit = 1000;
};

/// Bounded-variable simplex on a dense tableau.
///
/// Every row gets a logical variable s_r = a_r . z whose bounds encode the
/// relation, so the starting basis is the identity and variables rest at
/// either bound. The primal path is two-phase: phase 1 minimizes the sum of
/// bound violations of the basic variables, phase 2 runs Dantzig pricing and
/// falls back to Bland's rule after a stall of degenerate pivots. A zero
/// objective stops after phase 1 with status Feasible.
///
/// The dual path picks the most infeasible basic variable to leave and runs
/// a bound-flipping ratio test, so one iteration can move many boxed
/// variables across their ranges. If it ends with residual dual
/// infeasibility the primal phase 2 finishes from the same basis.
///
/// Throws IterationLimitExceeded or SingularBasis; infeasibility and
/// unboundedness are reported through LPSolution::status.
LPSolution solve(const LPProblem& p, const SolveOptions& options = {});

}  // namespace lprlab::lp
