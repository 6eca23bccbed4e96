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
#include <span>

namespace lprlab::lp::kernels {

/// Gauss-Jordan pivot on a dense row-major tableau with `rows` rows of width
/// `cols`, plus a detached cost row of the same width: row r is scaled so
/// column q becomes 1, then column q is eliminated from every other row and
/// from `cost`. Rows are independent, so the parallel variant splits them
/// across OpenMP threads and produces bitwise-identical output.
void pivot_serial(std::span<double> tableau, std::size_t rows, std::size_t cols,
                  std::span<double> cost, std::size_t r, std::size_t q);

void pivot_parallel(std::span<double> tableau, std::size_t rows, std::size_t cols,
                    std::span<double> cost, std::size_t r, std::size_t q);

// Below this many tableau entries the parallel variant runs serially.
inline constexpr std::size_t kParallelMinEntries = 1u << 16;

}  // namespace lprlab::lp::kernels
