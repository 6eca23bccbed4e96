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

#include "lprlab/querygen.hpp"

#include <algorithm>
#include <exception>
#include <ostream>
#include <set>

#include "lprlab/error.hpp"
#include "lprlab/rng.hpp"

namespace lprlab {

QueryMatrix QueryMatrix::prefix(std::size_t k) const {
  if (k > rows) throw InvalidArgument("QueryMatrix::prefix: not enough rows");
  QueryMatrix out;
  out.rows = k;
  out.cols = cols;
  out.coef.assign(coef.begin(), coef.begin() + static_cast<std::ptrdiff_t>(k * cols));
  out.signed_rows.assign(signed_rows.begin(), signed_rows.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

std::vector<std::uint64_t> first_primes(std::size_t count) {
  std::vector<std::uint64_t> primes;
  for (std::uint64_t v = 2; primes.size() < count; ++v) {
    if (is_prime(v)) primes.push_back(v);
  }
  return primes;
}

std::vector<Exponent> default_exponents() {
  std::vector<Exponent> es;
  for (int tenths = 5; tenths <= 19; ++tenths) {
    if (tenths != 10) es.emplace_back(tenths, 10);
  }
  return es;
}

std::vector<int> default_moduli() { return {2, 5}; }

void validate(const DigitPredicate& q) {
  if (!is_prime(q.prime)) throw InvalidArgument("digit predicate: p must be prime");
  if (q.digit_index < 1) throw InvalidArgument("digit predicate: j must be at least 1");
  if (q.exponent.is_one()) throw InvalidArgument("digit predicate: exponent must differ from 1");
  if (q.modulus < 2) throw InvalidArgument("digit predicate: modulus must be at least 2");
}

bool digit_predicate(const DigitPredicate& q, Identifier id, const PrecisionPolicy& policy) {
  validate(q);
  if (id == 0) throw InvalidArgument("digit predicate: identifier must be positive");
  return fractional_digit(q.prime * id, q.exponent, q.digit_index, policy) % q.modulus == 0;
}

QueryFamily standard_family(std::size_t primes, int j_max, const std::vector<Exponent>& exponents,
                            const std::vector<int>& moduli) {
  if (primes == 0 || j_max < 1 || exponents.empty() || moduli.empty()) {
    throw InvalidArgument("standard_family: every axis needs at least one value");
  }
  if (std::set<Exponent>(exponents.begin(), exponents.end()).size() != exponents.size() ||
      std::set<int>(moduli.begin(), moduli.end()).size() != moduli.size()) {
    throw InvalidArgument("standard_family: duplicate exponent or modulus");
  }
  QueryFamily f;
  for (std::uint64_t p : first_primes(primes)) {
    for (int j = 1; j <= j_max; ++j) {
      for (const Exponent& e : exponents) {
        for (int mu : moduli) {
          DigitPredicate q{p, j, e, mu};
          validate(q);
          f.queries.push_back(QuerySpec{q, false});
        }
      }
    }
  }
  f.provenance = "standard primes=" + std::to_string(primes) + " j_max=" + std::to_string(j_max) +
                 " exponents=" + std::to_string(exponents.size()) +
                 " moduli=" + std::to_string(moduli.size());
  return f;
}

QueryFamily filter_by_exponent(const QueryFamily& f, const Exponent& e_max) {
  QueryFamily out;
  for (const QuerySpec& q : f.queries) {
    const auto* dp = std::get_if<DigitPredicate>(&q.definition);
    if (dp == nullptr || dp->exponent <= e_max) out.queries.push_back(q);
  }
  out.provenance = f.provenance + " | e<=" + e_max.to_string();
  return out;
}

QueryFamily truncate(const QueryFamily& f, std::size_t k) {
  QueryFamily out;
  out.queries.assign(f.queries.begin(),
                     f.queries.begin() + static_cast<std::ptrdiff_t>(std::min(k, f.size())));
  out.provenance = f.provenance + " | first " + std::to_string(out.size());
  return out;
}

QueryFamily random_subset_family(std::size_t n, std::size_t num_queries, std::uint64_t seed) {
  if (n == 0 || num_queries == 0) {
    throw InvalidArgument("random_subset_family: n and num_queries must be positive");
  }
  QueryFamily f;
  f.queries.reserve(num_queries);
  for (std::size_t q = 0; q < num_queries; ++q) {
    Engine rng(derive_seed(seed, {0x5155'4552ULL, q}));
    ExplicitSubset s;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng() >> 63) s.members.push_back(i);
    }
    f.queries.push_back(QuerySpec{std::move(s), false});
  }
  f.provenance = "random-subset n=" + std::to_string(n) + " m=" + std::to_string(num_queries) +
                 " seed=" + std::to_string(seed);
  return f;
}

QueryFamily signed_variant(const QueryFamily& f) {
  QueryFamily out = f;
  for (QuerySpec& q : out.queries) q.is_signed = true;
  out.provenance += " | signed";
  return out;
}

std::vector<std::size_t> materialize(const QuerySpec& q, std::span<const Identifier> ids,
                                     const PrecisionPolicy& policy) {
  if (const auto* s = std::get_if<ExplicitSubset>(&q.definition)) {
    for (std::size_t i = 0; i < s->members.size(); ++i) {
      if (s->members[i] >= ids.size()) {
        throw InvalidArgument("explicit subset member " + std::to_string(s->members[i]) +
                              " outside a target of size " + std::to_string(ids.size()));
      }
      if (i > 0 && s->members[i - 1] >= s->members[i]) {
        throw InvalidArgument("explicit subset members must be sorted and distinct");
      }
    }
    return s->members;
  }
  const auto& dp = std::get<DigitPredicate>(q.definition);
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (digit_predicate(dp, ids[i], policy)) members.push_back(i);
  }
  return members;
}

namespace {

void fill_row(const QuerySpec& q, std::span<const Identifier> ids, const PrecisionPolicy& policy,
              std::int8_t* row) {
  const std::int8_t off = q.is_signed ? -1 : 0;
  std::fill(row, row + ids.size(), off);
  for (std::size_t i : materialize(q, ids, policy)) row[i] = 1;
}

}  // namespace

QueryMatrix materialize_all(const QueryFamily& f, std::span<const Identifier> ids, KernelMode mode,
                            const PrecisionPolicy& policy) {
  QueryMatrix m;
  m.rows = f.size();
  m.cols = ids.size();
  m.coef.assign(m.rows * m.cols, 0);
  m.signed_rows.resize(m.rows);
  for (std::size_t q = 0; q < m.rows; ++q) m.signed_rows[q] = f.queries[q].is_signed ? 1 : 0;
  const auto rows = static_cast<std::ptrdiff_t>(m.rows);

  if (mode == KernelMode::Serial) {
    for (std::ptrdiff_t q = 0; q < rows; ++q) {
      fill_row(f.queries[q], ids, policy, m.coef.data() + q * m.cols);
    }
    return m;
  }

  // Exceptions cannot cross the parallel region; keep the lowest failing row.
  std::ptrdiff_t failed_row = rows;
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t q = 0; q < rows; ++q) {
    try {
      fill_row(f.queries[q], ids, policy, m.coef.data() + q * m.cols);
    } catch (...) {
#pragma omp critical(lprlab_materialize_error)
      if (q < failed_row) {
        failed_row = q;
        failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return m;
}

std::string emit_sql(const QuerySpec& q, std::string_view table, std::string_view id_column,
                     Identifier lo, Identifier hi, const std::optional<std::string>& attr_condition) {
  const auto* dp = std::get_if<DigitPredicate>(&q.definition);
  if (dp == nullptr) throw InvalidArgument("emit_sql: explicit subsets have no SQL form");
  validate(*dp);
  std::string scale = "1" + std::string(static_cast<std::size_t>(dp->digit_index), '0');
  const std::string power = "((" + std::string(id_column) + " * " + std::to_string(dp->prime) +
                            ")^" + dp->exponent.to_string() + ")";
  std::string sql = "SELECT count(" + std::string(id_column) + ") FROM " + std::string(table) +
                    " WHERE floor(" + scale + " * " + power + " + 0.5) = floor(" + scale + " * " +
                    power + ") AND " + std::string(id_column) + " BETWEEN " + std::to_string(lo) +
                    " AND " + std::to_string(hi);
  if (attr_condition && !attr_condition->empty()) sql += " AND " + *attr_condition;
  return sql;
}

void write_family_csv(const QueryFamily& f, std::ostream& out) {
  out << "index,p,j,e,mu\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto* dp = std::get_if<DigitPredicate>(&f.queries[i].definition);
    if (dp == nullptr) throw InvalidArgument("write_family_csv: explicit subsets have no parameters");
    out << i << ',' << dp->prime << ',' << dp->digit_index << ',' << dp->exponent.to_string() << ','
        << dp->modulus << '\n';
  }
}

}  // namespace lprlab
