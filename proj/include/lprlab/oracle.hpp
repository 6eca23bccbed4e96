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
#include <iosfwd>
#include <span>
#include <vector>

#include "lprlab/dataset.hpp"
#include "lprlab/querygen.hpp"
#include "lprlab/rng.hpp"

namespace lprlab {

/// Simulated noisy counting mechanism: exact count plus a rounded zero-mean
/// Gaussian draw, with optional hard low-count suppression.
struct NoiseModel {
  double sigma = 0.0;
  bool round_to_integer = true;
  bool suppression_enabled = false;
  std::int64_t suppression_threshold = 4;

  void validate() const;
};

enum class AnswerStatus { Value, Suppressed };

struct Answer {
  AnswerStatus status = AnswerStatus::Value;
  double value = 0.0;           // meaningful only when status == Value
  std::int64_t true_count = 0;  // kept for analysis; never fed to reconstruction

  bool suppressed() const { return status == AnswerStatus::Suppressed; }
  friend bool operator==(const Answer&, const Answer&) = default;
};

/// One answer per query, in family order.
struct AnswerSet {
  std::vector<Answer> answers;
  NoiseModel model;
  std::uint64_t seed = 0;

  std::size_t size() const { return answers.size(); }
  std::size_t usable() const;
};

/// Draws exactly one Gaussian (two uniforms) from rng per call, suppressed
/// or not, so stream positions never depend on the data.
Answer answer(const Dataset& d, const QuerySpec& q, const NoiseModel& nm, Engine& rng);

/// +-1 semantics regardless of q.is_signed; never suppressed.
Answer answer_signed(const Dataset& d, const QuerySpec& q, const NoiseModel& nm, Engine& rng);

/// Answers every query of f; query k uses the substream derive_seed(seed, k).
/// Errors are rethrown with the failing query index.
AnswerSet answer_all(const Dataset& d, const QueryFamily& f, const NoiseModel& nm,
                     std::uint64_t seed);

/// Same mechanism over pre-materialized rows; signed rows bypass suppression.
AnswerSet answer_matrix(const QueryMatrix& m, std::span<const std::uint8_t> truth,
                        const NoiseModel& nm, std::uint64_t seed);

/// CSV: query_index,status,value[,true_count].
void write_answers_csv(const AnswerSet& a, std::ostream& out, bool expose_truth = false);

}  // namespace lprlab
