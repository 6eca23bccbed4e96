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

#include "lprlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "lprlab/error.hpp"

namespace lprlab {
namespace {

constexpr std::uint64_t kAnswerStream = 0x414E'5357ULL;

Answer noisy(std::int64_t true_value, bool may_suppress, const NoiseModel& nm, Engine& rng) {
  const double z = standard_normal(rng);
  Answer a;
  a.true_count = true_value;
  if (may_suppress && nm.suppression_enabled && true_value < nm.suppression_threshold) {
    a.status = AnswerStatus::Suppressed;
    return a;
  }
  const double e = nm.sigma * z;
  a.value = static_cast<double>(true_value) + (nm.round_to_integer ? std::round(e) : e);
  return a;
}

std::int64_t row_value(std::span<const std::int8_t> row, std::span<const std::uint8_t> truth) {
  std::int64_t v = 0;
  for (std::size_t i = 0; i < row.size(); ++i) v += row[i] * truth[i];
  return v;
}

}  // namespace

void NoiseModel::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("noise sigma must be >= 0");
  if (suppression_threshold < 0) throw InvalidArgument("suppression threshold must be >= 0");
}

std::size_t AnswerSet::usable() const {
  return static_cast<std::size_t>(
      std::count_if(answers.begin(), answers.end(), [](const Answer& a) { return !a.suppressed(); }));
}

Answer answer(const Dataset& d, const QuerySpec& q, const NoiseModel& nm, Engine& rng) {
  if (q.is_signed) return answer_signed(d, q, nm, rng);
  nm.validate();
  std::int64_t count = 0;
  for (std::size_t i : materialize(q, d.ids())) count += d.bits()[i];
  return noisy(count, true, nm, rng);
}

Answer answer_signed(const Dataset& d, const QuerySpec& q, const NoiseModel& nm, Engine& rng) {
  nm.validate();
  const auto members = materialize(q, d.ids());
  std::int64_t inside = 0;
  for (std::size_t i : members) inside += d.bits()[i];
  std::int64_t total = 0;
  for (std::uint8_t b : d.bits()) total += b;
  return noisy(inside - (total - inside), false, nm, rng);
}

AnswerSet answer_all(const Dataset& d, const QueryFamily& f, const NoiseModel& nm,
                     std::uint64_t seed) {
  nm.validate();
  AnswerSet out{{}, nm, seed};
  out.answers.reserve(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    Engine rng(derive_seed(seed, {kAnswerStream, k}));
    try {
      out.answers.push_back(answer(d, f.queries[k], nm, rng));
    } catch (const Error& e) {
      throw Error("query " + std::to_string(k) + ": " + e.what());
    }
  }
  return out;
}

AnswerSet answer_matrix(const QueryMatrix& m, std::span<const std::uint8_t> truth,
                        const NoiseModel& nm, std::uint64_t seed) {
  nm.validate();
  if (truth.size() != m.cols) throw InvalidArgument("answer_matrix: truth length mismatch");
  if (m.signed_rows.size() != m.rows) throw InvalidArgument("answer_matrix: malformed matrix");
  AnswerSet out{{}, nm, seed};
  out.answers.reserve(m.rows);
  for (std::size_t k = 0; k < m.rows; ++k) {
    Engine rng(derive_seed(seed, {kAnswerStream, k}));
    const auto row = m.row(k);
    out.answers.push_back(noisy(row_value(row, truth), m.signed_rows[k] == 0, nm, rng));
  }
  return out;
}

void write_answers_csv(const AnswerSet& a, std::ostream& out, bool expose_truth) {
  out << "query_index,status,value" << (expose_truth ? ",true_count" : "") << '\n';
  for (std::size_t k = 0; k < a.size(); ++k) {
    const Answer& ans = a.answers[k];
    out << k << ',' << (ans.suppressed() ? "suppressed" : "value") << ',';
    if (!ans.suppressed()) out << ans.value;
    if (expose_truth) out << ',' << ans.true_count;
    out << '\n';
  }
}

}  // namespace lprlab
