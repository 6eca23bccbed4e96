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

#include "lprlab/lp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "lprlab/error.hpp"

namespace lprlab::lp {

std::size_t LPProblem::add_row(std::vector<Term> terms, Relation rel, double rhs) {
  rows.push_back(Row{std::move(terms), rel, rhs});
  return rows.size() - 1;
}

bool LPProblem::objective_is_zero() const {
  return std::all_of(objective.begin(), objective.end(), [](double c) { return c == 0.0; });
}

void LPProblem::validate() const {
  if (objective.size() != num_vars || bounds.size() != num_vars) {
    throw InvalidArgument("LPProblem: objective and bounds must have num_vars entries");
  }
  for (std::size_t j = 0; j < num_vars; ++j) {
    const Bounds& b = bounds[j];
    if (std::isnan(b.lower) || std::isnan(b.upper) || b.lower > b.upper || b.lower == kInf ||
        b.upper == -kInf) {
      throw InvalidArgument("LPProblem: invalid bounds on variable " + std::to_string(j));
    }
    if (!std::isfinite(objective[j])) {
      throw InvalidArgument("LPProblem: non-finite objective on variable " + std::to_string(j));
    }
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!std::isfinite(rows[r].rhs)) {
      throw InvalidArgument("LPProblem: non-finite rhs in row " + std::to_string(r));
    }
    for (const Term& t : rows[r].terms) {
      if (t.var >= num_vars || !std::isfinite(t.coef)) {
        throw InvalidArgument("LPProblem: bad term in row " + std::to_string(r));
      }
    }
  }
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
  }
  return "?";
}

double row_activity(const Row& row, std::span<const double> z) {
  double a = 0.0;
  for (const Term& t : row.terms) a += t.coef * z[t.var];
  return a;
}

bool verify(const LPProblem& p, std::span<const double> z, const Tolerances& tol) {
  if (z.size() != p.num_vars) return false;
  for (std::size_t j = 0; j < p.num_vars; ++j) {
    if (!std::isfinite(z[j])) return false;
    if (z[j] < p.bounds[j].lower - tol.feasibility) return false;
    if (z[j] > p.bounds[j].upper + tol.feasibility) return false;
  }
  for (const Row& row : p.rows) {
    const double a = row_activity(row, z);
    switch (row.relation) {
      case Relation::LessEqual:
        if (a - row.rhs > tol.feasibility) return false;
        break;
      case Relation::GreaterEqual:
        if (row.rhs - a > tol.feasibility) return false;
        break;
      case Relation::Equal:
        if (std::abs(a - row.rhs) > tol.feasibility) return false;
        break;
    }
  }
  return true;
}

bool verify(const LPProblem& p, const LPSolution& s, const Tolerances& tol) {
  return s.has_point() && verify(p, std::span<const double>(s.assignment), tol);
}

namespace {

std::string var_name(const LPProblem& p, std::size_t j) {
  if (j < p.var_names.size() && !p.var_names[j].empty()) return p.var_names[j];
  return "X" + std::to_string(j);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Fixed-format MPS field layout: columns 2-3, 5-12, 15-22, 25-36, 40-47, 50-61.
void field_line(std::ostream& out, const std::string& code, const std::string& n1,
                const std::string& n2, const std::string& v1) {
  char buf[96];
  std::snprintf(buf, sizeof buf, " %-2s %-8s  %-8s  %12s", code.c_str(), n1.c_str(), n2.c_str(),
                v1.c_str());
  std::string line = buf;
  while (!line.empty() && line.back() == ' ') line.pop_back();
  out << line << '\n';
}

}  // namespace

void write_mps(const LPProblem& p, std::ostream& out, const std::string& name) {
  p.validate();
  out << "NAME          " << name << '\n';
  out << "ROWS\n";
  out << " N  COST\n";
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    const char* code = p.rows[r].relation == Relation::LessEqual   ? "L"
                       : p.rows[r].relation == Relation::Equal     ? "E"
                                                                   : "G";
    out << ' ' << code << "  R" << r << '\n';
  }
  // Column-major view of the sparse rows.
  std::vector<std::map<std::size_t, double>> cols(p.num_vars);
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    for (const Term& t : p.rows[r].terms) cols[t.var][r] += t.coef;
  }
  out << "COLUMNS\n";
  for (std::size_t j = 0; j < p.num_vars; ++j) {
    const std::string vn = var_name(p, j);
    if (p.objective[j] != 0.0) field_line(out, "", vn, "COST", num(p.objective[j]));
    for (const auto& [r, c] : cols[j]) {
      if (c != 0.0) field_line(out, "", vn, "R" + std::to_string(r), num(c));
    }
  }
  out << "RHS\n";
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    if (p.rows[r].rhs != 0.0) field_line(out, "", "RHS", "R" + std::to_string(r), num(p.rows[r].rhs));
  }
  out << "BOUNDS\n";
  for (std::size_t j = 0; j < p.num_vars; ++j) {
    const Bounds& b = p.bounds[j];
    const std::string vn = var_name(p, j);
    if (b.lower == -kInf && b.upper == kInf) {
      field_line(out, "FR", "BND", vn, "");
    } else if (b.lower == b.upper) {
      field_line(out, "FX", "BND", vn, num(b.lower));
    } else {
      if (b.lower == -kInf) {
        field_line(out, "MI", "BND", vn, "");
      } else if (b.lower != 0.0) {
        field_line(out, "LO", "BND", vn, num(b.lower));
      }
      if (b.upper != kInf) field_line(out, "UP", "BND", vn, num(b.upper));
    }
  }
  out << "ENDATA\n";
}

}  // namespace lprlab::lp
