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

#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <random>

#include "lprlab/digit.hpp"
#include "lprlab/error.hpp"
#include "lprlab/querygen.hpp"

using namespace lprlab;
using boost::multiprecision::cpp_int;

namespace {

// floor(v^(1/k)) for v >= 0 by bisection on exact integers.
cpp_int integer_root(const cpp_int& v, unsigned k) {
  cpp_int lo = 0, hi = 1;
  while (boost::multiprecision::pow(hi, k) <= v) hi *= 2;
  while (hi - lo > 1) {
    const cpp_int mid = (lo + hi) / 2;
    if (boost::multiprecision::pow(mid, k) <= v) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

// floor(base^(num/den) * 10^j) mod 10, entirely in integer arithmetic:
// floor((base^num * 10^(j*den))^(1/den)).
int exact_digit(std::uint64_t base, unsigned num, unsigned den, unsigned j) {
  const cpp_int radicand = boost::multiprecision::pow(cpp_int(base), num) *
                           boost::multiprecision::pow(cpp_int(10), j * den);
  return static_cast<int>(integer_root(radicand, den) % 10);
}

}  // namespace

TEST(Exponent, ParsesAndPrintsDecimals) {
  const Exponent e = Exponent::parse("0.7");
  EXPECT_EQ(e.num(), 7);
  EXPECT_EQ(e.den(), 10);
  EXPECT_EQ(e.to_string(), "0.7");
  EXPECT_EQ(Exponent::parse("1.50").to_string(), "1.5");
  EXPECT_EQ(Exponent::parse("3/2"), Exponent(3, 2));
  EXPECT_LT(Exponent::parse("0.8"), Exponent::parse("1.4"));
  EXPECT_TRUE(Exponent::parse("1.0").is_one());
  EXPECT_THROW(Exponent::parse("abc"), InvalidArgument);
  EXPECT_THROW(Exponent::parse("-0.5"), InvalidArgument);
}

TEST(FractionalDigit, ExactSquareHasZeroDigits) {
  for (int j = 1; j <= 5; ++j) {
    EXPECT_EQ(fractional_digit(10000, Exponent(1, 2), j), 0);
  }
  DigitPredicate q{2, 3, Exponent(1, 2), 7};
  EXPECT_TRUE(digit_predicate(q, 5000));
  q.modulus = 2;
  q.digit_index = 1;
  EXPECT_TRUE(digit_predicate(q, 5000));
}

TEST(FractionalDigit, MatchesExactIntegerRootOracle) {
  EXPECT_EQ(fractional_digit(4004, Exponent(7, 10), 2), exact_digit(4004, 7, 10, 2));

  std::mt19937_64 rng(123);
  const std::vector<unsigned> nums{5, 6, 7, 8, 9, 11, 12, 13, 14, 15, 16, 17, 18, 19};
  for (int trial = 0; trial < 400; ++trial) {
    const std::uint64_t base = 2 + rng() % 120000;
    const unsigned num = nums[rng() % nums.size()];
    const unsigned j = 1 + static_cast<unsigned>(rng() % 5);
    const Exponent e(num, 10);
    ASSERT_EQ(fractional_digit(base, e, static_cast<int>(j)),
              exact_digit(base, static_cast<unsigned>(e.num()), static_cast<unsigned>(e.den()), j))
        << "base=" << base << " e=" << e.to_string() << " j=" << j;
  }
}

TEST(FractionalDigit, CertifiesValuesOnDigitBoundaries) {
  // Integer powers and roots whose decimal expansion terminates.
  EXPECT_EQ(fractional_digit(100, Exponent(1, 2), 1), 0);
  EXPECT_EQ(fractional_digit(121, Exponent(3, 2), 4), exact_digit(121, 3, 2, 4));
  EXPECT_EQ(fractional_digit(1024, Exponent(1, 5), 3), 0);  // 1024^(1/5) = 4
}

TEST(FractionalDigit, SelectionRatesOverIdRange) {
  int five = 0, two = 0;
  for (Identifier id = 1; id <= 10000; ++id) {
    const int d = fractional_digit(2 * id, Exponent(7, 10), 2);
    five += d % 5 == 0;
    two += d % 2 == 0;
  }
  EXPECT_NEAR(five / 10000.0, 0.2, 0.03);
  EXPECT_NEAR(two / 10000.0, 0.5, 0.03);
}

TEST(FractionalDigit, WithoutCertificationBoundaryValuesFailLoudly) {
  PrecisionPolicy p;
  p.exact_certification = false;
  EXPECT_THROW(fractional_digit(10000, Exponent(1, 2), 2, p), PrecisionExhausted);
}
