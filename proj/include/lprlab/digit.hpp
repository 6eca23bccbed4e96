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

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace lprlab {

/// A positive rational exponent num/den kept in lowest terms. Parsed from and
/// printed as a plain decimal ("0.7" <-> 7/10) so SQL text round-trips.
class Exponent {
 public:
  Exponent() = default;
  Exponent(std::int64_t num, std::int64_t den);

  static Exponent parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_one() const { return num_ == den_; }

  /// Terminating decimal when den has only factors 2 and 5, else "num/den".
  std::string to_string() const;

  friend bool operator==(const Exponent&, const Exponent&) = default;
  friend std::strong_ordering operator<=>(const Exponent& a, const Exponent& b) {
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }

 private:
  std::int64_t num_ = 1;
  std::int64_t den_ = 1;
};

struct PrecisionPolicy {
  int base_digits = 50;     // minimum significant decimal digits
  int guard_exponent = 20;  // boundary band of 10^-guard around each digit cut
  // Resolve values inside the band by exact integer comparison of
  // k^den against base^num * 10^(j*den).
  bool exact_certification = true;
  std::int64_t max_certify_denominator = 1000;
};

/// floor(base^e * 10^j) mod 10, i.e. the j-th digit after the decimal point.
/// Throws PrecisionExhausted when the digit cannot be certified.
int fractional_digit(std::uint64_t base, const Exponent& e, int j,
                     const PrecisionPolicy& policy = {});

}  // namespace lprlab
