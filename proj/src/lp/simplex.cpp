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

#include "lprlab/lp/simplex.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "lprlab/error.hpp"
#include "lprlab/lp/kernels.hpp"
#include "lprlab/rng.hpp"

namespace lprlab::lp {
namespace {

enum class VarState : std::uint8_t { Basic, AtLower, AtUpper, FreeZero };

constexpr double kDegenerateStep = 1e-12;
constexpr int kMaxPolishRounds = 5;
constexpr double kCostPerturbation = 1e-7;

struct Ratio {
  double theta = kInf;
  std::ptrdiff_t row = -1;  // -1: bound flip of the entering variable
  bool to_upper = false;
};

class Simplex {
 public:
  Simplex(const LPProblem& p, const SolveOptions& o) : p_(p), opt_(o) {
    m_ = p.rows.size();
    nv_ = p.num_vars;
    n_ = nv_ + m_;
    can_refactor_ = m_ > 0 && m_ <= opt_.refactor_limit;
    limit_ = opt_.iteration_limit != 0 ? opt_.iteration_limit : 50 * (m_ + nv_);
    refactor_every_ = std::max<std::size_t>(200, 4 * m_);

    t_.assign(m_ * n_, 0.0);
    if (can_refactor_) a0_.assign(m_ * nv_, 0.0);
    lb_.resize(n_);
    ub_.resize(n_);
    c_.assign(n_, 0.0);
    x_.assign(n_, 0.0);
    state_.resize(n_);
    basis_.resize(m_);

    for (std::size_t j = 0; j < nv_; ++j) {
      lb_[j] = p.bounds[j].lower;
      ub_[j] = p.bounds[j].upper;
      c_[j] = p.objective[j];
      if (std::isfinite(lb_[j])) {
        state_[j] = VarState::AtLower;
        x_[j] = lb_[j];
      } else if (std::isfinite(ub_[j])) {
        state_[j] = VarState::AtUpper;
        x_[j] = ub_[j];
      } else {
        state_[j] = VarState::FreeZero;
      }
    }
    // Tableau of [A | -I] against the basis of logicals (B = -I): [-A | I].
    for (std::size_t r = 0; r < m_; ++r) {
      const Row& row = p.rows[r];
      double activity = 0.0;
      for (const Term& term : row.terms) {
        t_[r * n_ + term.var] -= term.coef;
        if (can_refactor_) a0_[r * nv_ + term.var] += term.coef;
        activity += term.coef * x_[term.var];
      }
      t_[r * n_ + nv_ + r] = 1.0;
      const std::size_t s = nv_ + r;
      lb_[s] = row.relation == Relation::LessEqual ? -kInf : row.rhs;
      ub_[s] = row.relation == Relation::GreaterEqual ? kInf : row.rhs;
      basis_[r] = s;
      state_[s] = VarState::Basic;
      x_[s] = activity;
    }
    d_ = c_;
  }

  LPSolution run() {
    const bool zero_objective = p_.objective_is_zero();
    const bool want_dual = opt_.algorithm == Algorithm::Dual ||
                           (opt_.algorithm == Algorithm::Auto && !zero_objective);
    if (want_dual && rest_for_dual()) {
      perturb_costs();
      const DualOutcome out = run_dual();
      if (out == DualOutcome::Infeasible) return finish(SolveStatus::Infeasible);
      restore_costs();
      if (out == DualOutcome::Optimal && dual_feasible()) return finish(SolveStatus::Optimal);
    } else if (opt_.algorithm == Algorithm::Dual) {
      throw InvalidArgument("simplex: no dual feasible slack basis for the dual algorithm");
    }
    return run_primal(zero_objective);
  }

 private:
  enum class DualOutcome { Optimal, Infeasible, NeedsPrimal };

  // Rests every structural at the bound its cost pulls toward. Fails, leaving
  // the primal start untouched, when some cost pulls toward an infinite bound.
  bool rest_for_dual() {
    for (std::size_t j = 0; j < nv_; ++j) {
      if (c_[j] > 0.0 && !std::isfinite(lb_[j])) return false;
      if (c_[j] < 0.0 && !std::isfinite(ub_[j])) return false;
    }
    for (std::size_t j = 0; j < nv_; ++j) {
      if (c_[j] < 0.0) {
        state_[j] = VarState::AtUpper;
        x_[j] = ub_[j];
      }
    }
    for (std::size_t r = 0; r < m_; ++r) {
      double activity = 0.0;
      for (const Term& term : p_.rows[r].terms) activity += term.coef * x_[term.var];
      x_[nv_ + r] = activity;
    }
    return true;
  }

  // Integral data makes many reduced costs tie at zero and the dual stalls.
  // Each structural cost is pushed a little further in the direction it
  // already points, which keeps the resting basis dual feasible.
  void perturb_costs() {
    c_orig_ = c_;
    for (std::size_t j = 0; j < nv_; ++j) {
      double dir = c_[j] > 0.0 ? 1.0 : c_[j] < 0.0 ? -1.0 : 0.0;
      if (dir == 0.0) {
        if (std::isfinite(lb_[j])) dir = 1.0;
        else if (std::isfinite(ub_[j])) dir = -1.0;
        else continue;
      }
      const double u = static_cast<double>(splitmix64(j) >> 11) * 0x1.0p-53;
      c_[j] += dir * kCostPerturbation * (1.0 + std::abs(c_[j])) * (1.0 + u);
      d_[j] = c_[j];
    }
  }

  // Reduced costs follow the cost change linearly: d' = d - dc + T^T dc_B.
  void restore_costs() {
    if (c_orig_.empty()) return;
    std::vector<double> delta(n_);
    for (std::size_t j = 0; j < n_; ++j) delta[j] = c_[j] - c_orig_[j];
    for (std::size_t j = 0; j < n_; ++j) d_[j] -= delta[j];
    for (std::size_t k = 0; k < m_; ++k) {
      const double db = delta[basis_[k]];
      if (db == 0.0) continue;
      const double* row = &t_[k * n_];
      for (std::size_t j = 0; j < n_; ++j) d_[j] += db * row[j];
    }
    for (std::size_t k = 0; k < m_; ++k) d_[basis_[k]] = 0.0;
    c_ = std::move(c_orig_);
    c_orig_.clear();
  }

  struct Breakpoint {
    double ratio;
    double magnitude;  // |pivot row entry|
    std::size_t var;
  };

  DualOutcome run_dual() {
    const double ftol = opt_.tol.feasibility;
    int polish_rounds = 0;
    std::vector<Breakpoint> cand;
    std::vector<std::size_t> flips;
    for (;;) {
      if (iter_ >= limit_) {
        throw IterationLimitExceeded(
            "simplex: iteration limit " + std::to_string(limit_) + " exceeded", iter_);
      }
      if (can_refactor_ && since_refactor_ >= refactor_every_) refactor();

      const bool bland = degenerate_run_ >= opt_.bland_after;
      std::ptrdiff_t r = -1;
      double worst = 0.0;
      for (std::size_t k = 0; k < m_; ++k) {
        const std::size_t b = basis_[k];
        const double v = std::max(lb_[b] - x_[b], x_[b] - ub_[b]);
        if (v <= ftol) continue;
        if (bland ? (r < 0 || b < basis_[static_cast<std::size_t>(r)]) : v > worst) {
          worst = v;
          r = static_cast<std::ptrdiff_t>(k);
        }
      }
      if (r < 0) {
        if (can_refactor_ && since_refactor_ > 0 && polish_rounds < kMaxPolishRounds) {
          ++polish_rounds;
          refactor();
          continue;
        }
        return dual_feasible() ? DualOutcome::Optimal : DualOutcome::NeedsPrimal;
      }

      const auto row = static_cast<std::size_t>(r);
      const std::size_t leaving = basis_[row];
      const bool to_lower = x_[leaving] < lb_[leaving];
      const double target = to_lower ? lb_[leaving] : ub_[leaving];
      const double sign = to_lower ? 1.0 : -1.0;

      cand.clear();
      const double* alpha = &t_[row * n_];
      for (std::size_t j = 0; j < n_; ++j) {
        const VarState s = state_[j];
        if (s == VarState::Basic || lb_[j] == ub_[j]) continue;
        const double beta = -sign * alpha[j];
        if (std::abs(beta) <= opt_.tol.pivot) continue;
        const bool ok = s == VarState::FreeZero || (s == VarState::AtLower && beta > 0.0) ||
                        (s == VarState::AtUpper && beta < 0.0);
        if (!ok) continue;
        const double ratio = s == VarState::FreeZero ? 0.0 : std::max(0.0, d_[j] / beta);
        cand.push_back({ratio, std::abs(beta), j});
      }
      if (cand.empty()) return DualOutcome::Infeasible;
      std::sort(cand.begin(), cand.end(), [bland](const Breakpoint& a, const Breakpoint& b) {
        if (a.ratio != b.ratio) return a.ratio < b.ratio;
        return bland ? a.var < b.var : a.magnitude > b.magnitude;
      });

      // Walk the breakpoints while the dual objective keeps improving; each
      // boxed variable passed on the way flips to its opposite bound.
      double slope = std::abs(x_[leaving] - target);
      flips.clear();
      std::ptrdiff_t entering = -1;
      for (const Breakpoint& bp : cand) {
        const double range = ub_[bp.var] - lb_[bp.var];
        if (std::isfinite(range) && slope - bp.magnitude * range > ftol) {
          slope -= bp.magnitude * range;
          flips.push_back(bp.var);
          continue;
        }
        entering = static_cast<std::ptrdiff_t>(bp.var);
        degenerate_run_ = bp.ratio <= kDegenerateStep ? degenerate_run_ + 1 : 0;
        break;
      }
      if (entering < 0) return DualOutcome::Infeasible;

      for (const std::size_t j : flips) {
        const bool up = state_[j] == VarState::AtLower;
        const double delta = up ? ub_[j] - lb_[j] : lb_[j] - ub_[j];
        state_[j] = up ? VarState::AtUpper : VarState::AtLower;
        x_[j] = up ? ub_[j] : lb_[j];
        shift_basics(j, delta);
      }
      const auto q = static_cast<std::size_t>(entering);
      const double delta = (x_[leaving] - target) / t(row, q);
      x_[q] += delta;
      shift_basics(q, delta);
      x_[leaving] = target;
      state_[leaving] = to_lower ? VarState::AtLower : VarState::AtUpper;
      basis_[row] = q;
      state_[q] = VarState::Basic;
      pivot(row, q);
      ++iter_;
      ++since_refactor_;
    }
  }

  bool dual_feasible() const {
    const double tol = opt_.tol.optimality;
    for (std::size_t j = 0; j < n_; ++j) {
      const VarState s = state_[j];
      if (s == VarState::Basic || lb_[j] == ub_[j]) continue;
      if ((s == VarState::AtLower || s == VarState::FreeZero) && d_[j] < -tol) return false;
      if ((s == VarState::AtUpper || s == VarState::FreeZero) && d_[j] > tol) return false;
    }
    return true;
  }

  void shift_basics(std::size_t j, double delta) {
    if (delta == 0.0) return;
    for (std::size_t k = 0; k < m_; ++k) {
      const double a = t(k, j);
      if (a != 0.0) x_[basis_[k]] -= delta * a;
    }
  }

  void pivot(std::size_t r, std::size_t q) {
    if (opt_.kernel == KernelMode::Serial) {
      kernels::pivot_serial(t_, m_, n_, d_, r, q);
    } else {
      kernels::pivot_parallel(t_, m_, n_, d_, r, q);
    }
  }

  LPSolution run_primal(bool zero_objective) {
    degenerate_run_ = 0;
    int polish_rounds = 0;
    std::vector<double> phase1;
    for (;;) {
      if (iter_ >= limit_) {
        throw IterationLimitExceeded(
            "simplex: iteration limit " + std::to_string(limit_) + " exceeded", iter_);
      }
      if (can_refactor_ && since_refactor_ >= refactor_every_) refactor();

      const bool infeasible = any_infeasible();
      if (!infeasible && zero_objective) return finish(SolveStatus::Feasible);

      const std::vector<double>* prices = &d_;
      if (infeasible) {
        phase1_prices(phase1);
        prices = &phase1;
      }
      const bool bland = degenerate_run_ >= opt_.bland_after;
      const std::ptrdiff_t q = choose_entering(*prices, bland);
      if (q < 0) {
        if (can_refactor_ && since_refactor_ > 0 && polish_rounds < kMaxPolishRounds) {
          ++polish_rounds;
          refactor();
          continue;
        }
        return finish(infeasible ? SolveStatus::Infeasible : SolveStatus::Optimal);
      }
      const double dir = (*prices)[q] < 0.0 ? 1.0 : -1.0;
      const Ratio ratio = ratio_test(static_cast<std::size_t>(q), dir, infeasible, bland);
      if (!std::isfinite(ratio.theta)) {
        if (infeasible) throw SingularBasis("simplex: unbounded ray during phase 1");
        return finish(SolveStatus::Unbounded);
      }
      step(static_cast<std::size_t>(q), dir, ratio);
      degenerate_run_ = ratio.theta <= kDegenerateStep ? degenerate_run_ + 1 : 0;
      ++iter_;
      ++since_refactor_;
    }
  }

  double& t(std::size_t k, std::size_t j) { return t_[k * n_ + j]; }

  bool below(std::size_t j) const { return x_[j] < lb_[j] - opt_.tol.feasibility; }
  bool above(std::size_t j) const { return x_[j] > ub_[j] + opt_.tol.feasibility; }

  bool any_infeasible() const {
    for (std::size_t k = 0; k < m_; ++k) {
      if (below(basis_[k]) || above(basis_[k])) return true;
    }
    return false;
  }

  // Gradient of the sum of basic bound violations with respect to each
  // nonbasic variable: -sum_k c1_k T[k][j], c1 = -1 below / +1 above.
  void phase1_prices(std::vector<double>& out) {
    out.assign(n_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) {
      const std::size_t b = basis_[k];
      const double w = below(b) ? 1.0 : above(b) ? -1.0 : 0.0;
      if (w == 0.0) continue;
      const double* row = &t_[k * n_];
      for (std::size_t j = 0; j < n_; ++j) out[j] += w * row[j];
    }
    for (std::size_t k = 0; k < m_; ++k) out[basis_[k]] = 0.0;
  }

  std::ptrdiff_t choose_entering(const std::vector<double>& prices, bool bland) const {
    const double tol = opt_.tol.optimality;
    std::ptrdiff_t best = -1;
    double best_score = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      const VarState s = state_[j];
      if (s == VarState::Basic || lb_[j] == ub_[j]) continue;
      const double dj = prices[j];
      double score = 0.0;
      if (dj < -tol && (s == VarState::AtLower || s == VarState::FreeZero)) score = -dj;
      if (dj > tol && (s == VarState::AtUpper || s == VarState::FreeZero)) score = dj;
      if (score <= 0.0) continue;
      if (bland) return static_cast<std::ptrdiff_t>(j);
      if (score > best_score) {
        best_score = score;
        best = static_cast<std::ptrdiff_t>(j);
      }
    }
    return best;
  }

  Ratio ratio_test(std::size_t q, double dir, bool phase1, bool bland) {
    Ratio best;
    if (std::isfinite(lb_[q]) && std::isfinite(ub_[q])) best.theta = ub_[q] - lb_[q];

    // Candidate limits per row, then a tie-break among near-minimal ratios.
    std::vector<std::pair<double, std::size_t>> cand;
    for (std::size_t k = 0; k < m_; ++k) {
      const double alpha = t(k, q);
      if (std::abs(alpha) <= opt_.tol.pivot) continue;
      const double g = -dir * alpha;  // rate of change of basic k
      const std::size_t b = basis_[k];
      double limit = kInf;
      bool to_upper = false;
      if (phase1 && below(b)) {
        if (g > 0.0) limit = (lb_[b] - x_[b]) / g;
      } else if (phase1 && above(b)) {
        if (g < 0.0) {
          limit = (x_[b] - ub_[b]) / -g;
          to_upper = true;
        }
      } else if (g < 0.0) {
        if (std::isfinite(lb_[b])) limit = std::max(0.0, x_[b] - lb_[b]) / -g;
      } else if (std::isfinite(ub_[b])) {
        limit = std::max(0.0, ub_[b] - x_[b]) / g;
        to_upper = true;
      }
      if (std::isfinite(limit)) cand.emplace_back(limit, k * 2 + (to_upper ? 1 : 0));
    }
    if (cand.empty()) return best;
    double min_ratio = kInf;
    for (const auto& [lim, code] : cand) min_ratio = std::min(min_ratio, lim);
    if (best.theta <= min_ratio) return best;  // bound flip wins ties

    const double slack = std::max(kDegenerateStep, min_ratio * 1e-12);
    double best_alpha = -1.0;
    std::size_t best_var = SIZE_MAX;
    for (const auto& [lim, code] : cand) {
      if (lim > min_ratio + slack) continue;
      const std::size_t k = code / 2;
      const double alpha = std::abs(t(k, q));
      const bool take = bland ? basis_[k] < best_var : alpha > best_alpha;
      if (take) {
        best_alpha = alpha;
        best_var = basis_[k];
        best.row = static_cast<std::ptrdiff_t>(k);
        best.to_upper = (code & 1) != 0;
        best.theta = lim;
      }
    }
    return best;
  }

  void step(std::size_t q, double dir, const Ratio& ratio) {
    const double delta = dir * ratio.theta;
    if (delta != 0.0) {
      x_[q] += delta;
      for (std::size_t k = 0; k < m_; ++k) {
        const double alpha = t(k, q);
        if (alpha != 0.0) x_[basis_[k]] -= delta * alpha;
      }
    }
    if (ratio.row < 0) {
      state_[q] = dir > 0.0 ? VarState::AtUpper : VarState::AtLower;
      x_[q] = dir > 0.0 ? ub_[q] : lb_[q];
      return;
    }
    const auto r = static_cast<std::size_t>(ratio.row);
    const std::size_t leaving = basis_[r];
    state_[leaving] = ratio.to_upper ? VarState::AtUpper : VarState::AtLower;
    x_[leaving] = ratio.to_upper ? ub_[leaving] : lb_[leaving];
    basis_[r] = q;
    state_[q] = VarState::Basic;
    pivot(r, q);
  }

  // Column j of [A | -I] from the original data.
  Eigen::VectorXd column(std::size_t j) const {
    Eigen::VectorXd col = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m_));
    if (j < nv_) {
      for (std::size_t r = 0; r < m_; ++r) col[static_cast<Eigen::Index>(r)] = a0_[r * nv_ + j];
    } else {
      col[static_cast<Eigen::Index>(j - nv_)] = -1.0;
    }
    return col;
  }

  // Recomputes the tableau, basic values and reduced costs from the original
  // rows through a fresh LU of the basis, discarding accumulated pivot error.
  void refactor() {
    const auto m = static_cast<Eigen::Index>(m_);
    const auto n = static_cast<Eigen::Index>(n_);
    Eigen::MatrixXd basis(m, m);
    for (std::size_t k = 0; k < m_; ++k) basis.col(static_cast<Eigen::Index>(k)) = column(basis_[k]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
    lu.setThreshold(opt_.tol.pivot);
    if (lu.rank() < m) throw SingularBasis("simplex: basis became numerically singular");

    Eigen::MatrixXd full(m, n);
    full.leftCols(static_cast<Eigen::Index>(nv_)) =
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            a0_.data(), m, static_cast<Eigen::Index>(nv_));
    full.rightCols(m) = -Eigen::MatrixXd::Identity(m, m);
    const Eigen::MatrixXd tab = lu.solve(full);
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(t_.data(), m, n) = tab;

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (std::size_t j = 0; j < n_; ++j) {
      if (state_[j] != VarState::Basic && x_[j] != 0.0) rhs += full.col(static_cast<Eigen::Index>(j)) * x_[j];
    }
    const Eigen::VectorXd xb = -lu.solve(rhs);
    Eigen::VectorXd cb(m);
    for (std::size_t k = 0; k < m_; ++k) {
      x_[basis_[k]] = xb[static_cast<Eigen::Index>(k)];
      cb[static_cast<Eigen::Index>(k)] = c_[basis_[k]];
    }
    const Eigen::VectorXd reduced =
        Eigen::Map<const Eigen::VectorXd>(c_.data(), n) - tab.transpose() * cb;
    for (std::size_t j = 0; j < n_; ++j) d_[j] = reduced[static_cast<Eigen::Index>(j)];
    for (std::size_t k = 0; k < m_; ++k) d_[basis_[k]] = 0.0;
    since_refactor_ = 0;
  }

  LPSolution finish(SolveStatus status) {
    LPSolution s;
    s.status = status;
    s.iterations = iter_;
    if (status == SolveStatus::Optimal || status == SolveStatus::Feasible) {
      s.assignment.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(nv_));
      for (std::size_t j = 0; j < nv_; ++j) s.objective_value += c_[j] * x_[j];
    }
    if (status == SolveStatus::Optimal) {
      s.row_duals.assign(d_.begin() + static_cast<std::ptrdiff_t>(nv_), d_.end());
    }
    return s;
  }

  const LPProblem& p_;
  SolveOptions opt_;
  std::size_t m_ = 0, nv_ = 0, n_ = 0;
  std::vector<double> t_, a0_, d_, c_, c_orig_, lb_, ub_, x_;
  std::vector<std::size_t> basis_;
  std::vector<VarState> state_;
  bool can_refactor_ = false;
  std::size_t limit_ = 0, refactor_every_ = 0;
  std::size_t iter_ = 0, since_refactor_ = 0, degenerate_run_ = 0;
};

}  // namespace

LPSolution solve(const LPProblem& p, const SolveOptions& options) {
  p.validate();
  Simplex simplex(p, options);
  return simplex.run();
}

}  // namespace lprlab::lp
