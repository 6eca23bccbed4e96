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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lprlab/dataset.hpp"
#include "lprlab/digit.hpp"
#include "lprlab/kernel_mode.hpp"

namespace lprlab {

/// Membership rule: identifier i is selected iff the j-th fractional decimal
/// digit of (prime * i)^exponent is divisible by modulus.
struct DigitPredicate {
  std::uint64_t prime = 2;
  int digit_index = 1;
  Exponent exponent;
  int modulus = 2;

  friend bool operator==(const DigitPredicate&, const DigitPredicate&) = default;
};

/// A fixed set of 0-based positions into the target's identifier list.
struct ExplicitSubset {
  std::vector<std::size_t> members;  // sorted, distinct

  friend bool operator==(const ExplicitSubset&, const ExplicitSubset&) = default;
};

struct QuerySpec {
  std::variant<DigitPredicate, ExplicitSubset> definition;
  // Signed queries answer sum_{i in q} x_i - sum_{i not in q} x_i.
  bool is_signed = false;

  friend bool operator==(const QuerySpec&, const QuerySpec&) = default;
};

struct QueryFamily {
  std::vector<QuerySpec> queries;
  std::string provenance;

  std::size_t size() const { return queries.size(); }
};

/// Row-major num_queries x n coefficient matrix of materialized queries:
/// 0/1 for subset queries, -1/+1 for signed ones.
struct QueryMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int8_t> coef;
  std::vector<std::uint8_t> signed_rows;  // 1 where the query has +-1 semantics

  std::span<const std::int8_t> row(std::size_t q) const {
    return {coef.data() + q * cols, cols};
  }
  /// The first k rows.
  QueryMatrix prefix(std::size_t k) const;
};

bool is_prime(std::uint64_t v);
std::vector<std::uint64_t> first_primes(std::size_t count);

/// {0.5, 0.6, ..., 1.9} without 1.
std::vector<Exponent> default_exponents();
std::vector<int> default_moduli();

void validate(const DigitPredicate& q);

bool digit_predicate(const DigitPredicate& q, Identifier id, const PrecisionPolicy& policy = {});

/// Cross product in p, j, e, modulus order (p outermost). Throws on an
/// exponent equal to 1 or on empty axes.
QueryFamily standard_family(std::size_t primes = 25, int j_max = 5,
                            const std::vector<Exponent>& exponents = default_exponents(),
                            const std::vector<int>& moduli = default_moduli());

/// Keeps digit-predicate queries with exponent <= e_max; explicit subsets pass through.
QueryFamily filter_by_exponent(const QueryFamily& f, const Exponent& e_max);

/// The first k queries in family order.
QueryFamily truncate(const QueryFamily& f, std::size_t k);

/// Each index included independently with probability 1/2.
QueryFamily random_subset_family(std::size_t n, std::size_t num_queries, std::uint64_t seed);

/// Same predicates with +-1 semantics.
QueryFamily signed_variant(const QueryFamily& f);

/// Sorted 0-based positions selected by q among ids.
std::vector<std::size_t> materialize(const QuerySpec& q, std::span<const Identifier> ids,
                                     const PrecisionPolicy& policy = {});

/// Coefficient matrix for every query of f. Parallel mode splits queries over
/// OpenMP threads; output is identical to the serial reference.
QueryMatrix materialize_all(const QueryFamily& f, std::span<const Identifier> ids,
                            KernelMode mode = KernelMode::Parallel,
                            const PrecisionPolicy& policy = {});

/// The restricted-SQL form of a digit-predicate query. Note the template
/// tests frac(10^j * v) < 0.5 and has no modulus; it is reproduced verbatim
/// for interoperability, while membership follows digit_predicate.
std::string emit_sql(const QuerySpec& q, std::string_view table, std::string_view id_column,
                     Identifier lo, Identifier hi,
                     const std::optional<std::string>& attr_condition = std::nullopt);

/// CSV with columns index,p,j,e,mu (digit predicates only).
void write_family_csv(const QueryFamily& f, std::ostream& out);

}  // namespace lprlab
