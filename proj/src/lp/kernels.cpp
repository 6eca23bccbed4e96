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

#include "lprlab/lp/kernels.hpp"

#include <omp.h>

#include <vector>

namespace lprlab::lp::kernels {
namespace {

// Scales the pivot row and returns the positions of its nonzeros.
std::vector<std::size_t> prepare_pivot_row(double* prow, std::size_t cols, std::size_t q) {
  const double inv = 1.0 / prow[q];
  std::vector<std::size_t> nz;
  nz.reserve(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    if (prow[j] != 0.0) {
      prow[j] *= inv;
      nz.push_back(j);
    }
  }
  prow[q] = 1.0;
  return nz;
}

inline void eliminate(double* row, const double* prow, const std::vector<std::size_t>& nz,
                      std::size_t cols, std::size_t q) {
  const double f = row[q];
  if (f == 0.0) return;
  if (nz.size() * 2 < cols) {
    for (std::size_t j : nz) row[j] -= f * prow[j];
  } else {
    for (std::size_t j = 0; j < cols; ++j) row[j] -= f * prow[j];
  }
  row[q] = 0.0;
}

}  // namespace

void pivot_serial(std::span<double> tableau, std::size_t rows, std::size_t cols,
                  std::span<double> cost, std::size_t r, std::size_t q) {
  double* base = tableau.data();
  double* prow = base + r * cols;
  const auto nz = prepare_pivot_row(prow, cols, q);
  for (std::size_t k = 0; k < rows; ++k) {
    if (k != r) eliminate(base + k * cols, prow, nz, cols, q);
  }
  eliminate(cost.data(), prow, nz, cols, q);
}

void pivot_parallel(std::span<double> tableau, std::size_t rows, std::size_t cols,
                    std::span<double> cost, std::size_t r, std::size_t q) {
  double* base = tableau.data();
  double* prow = base + r * cols;
  const auto nz = prepare_pivot_row(prow, cols, q);
  const auto n = static_cast<std::ptrdiff_t>(rows);
  const auto rr = static_cast<std::ptrdiff_t>(r);
#pragma omp parallel for schedule(static) if (rows * cols >= kParallelMinEntries && !omp_in_parallel())
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    if (k != rr) eliminate(base + k * cols, prow, nz, cols, q);
  }
  eliminate(cost.data(), prow, nz, cols, q);
}

}  // namespace lprlab::lp::kernels
