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

#include "lprlab/digit.hpp"

#include <gmp.h>
#include <mpfr.h>

#include <charconv>
#include <cmath>
#include <numeric>

#include "lprlab/error.hpp"

namespace lprlab {
namespace {

class BigInt {
 public:
  BigInt() { mpz_init(v_); }
  ~BigInt() { mpz_clear(v_); }
  BigInt(const BigInt&) = delete;
  BigInt& operator=(const BigInt&) = delete;
  mpz_ptr get() { return v_; }
  mpz_srcptr get() const { return v_; }

 private:
  mpz_t v_;
};

class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t bits) { mpfr_init2(v_, bits); }
  ~BigFloat() { mpfr_clear(v_); }
  BigFloat(const BigFloat&) = delete;
  BigFloat& operator=(const BigFloat&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

std::int64_t pow10_i64(int k) {
  std::int64_t p = 1;
  while (k-- > 0) p *= 10;
  return p;
}

bool is_terminating(std::int64_t den) {
  while (den % 2 == 0) den /= 2;
  while (den % 5 == 0) den /= 5;
  return den == 1;
}

int mod10(const BigInt& k) { return static_cast<int>(mpz_fdiv_ui(k.get(), 10)); }

}  // namespace

Exponent::Exponent(std::int64_t num, std::int64_t den) {
  if (num <= 0 || den <= 0) throw InvalidArgument("exponent must be a positive rational");
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Exponent Exponent::parse(std::string_view text) {
  auto bad = [&] { return InvalidArgument("cannot parse exponent '" + std::string(text) + "'"); };
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    if (s.empty() || s.front() < '0' || s.front() > '9') throw bad();
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw bad();
    return v;
  };
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    return Exponent(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return Exponent(parse_int(text), 1);
  const std::string_view whole = text.substr(0, dot);
  const std::string_view frac = text.substr(dot + 1);
  if (frac.empty() || frac.size() > 12) throw bad();
  const std::int64_t scale = pow10_i64(static_cast<int>(frac.size()));
  const std::int64_t w = whole.empty() ? 0 : parse_int(whole);
  return Exponent(w * scale + parse_int(frac), scale);
}

std::string Exponent::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  if (!is_terminating(den_)) return std::to_string(num_) + "/" + std::to_string(den_);
  int places = 0;
  std::int64_t scale = 1;
  while (scale % den_ != 0) {
    scale *= 10;
    ++places;
  }
  const std::int64_t scaled = num_ * (scale / den_);
  std::string frac = std::to_string(scaled % scale);
  frac.insert(0, static_cast<std::size_t>(places) - frac.size(), '0');
  return std::to_string(scaled / scale) + "." + frac;
}

int fractional_digit(std::uint64_t base, const Exponent& e, int j, const PrecisionPolicy& policy) {
  if (base == 0) throw InvalidArgument("fractional_digit: base must be positive");
  if (j < 1) throw InvalidArgument("fractional_digit: digit index must be at least 1");

  BigInt power;  // base^num, exact
  mpz_ui_pow_ui(power.get(), base, static_cast<unsigned long>(e.num()));
  BigInt scale;  // 10^j
  mpz_ui_pow_ui(scale.get(), 10, static_cast<unsigned long>(j));

  const double int_digits = e.value() * std::log10(static_cast<double>(base)) + j + 1;
  int digits = std::max(policy.base_digits,
                        static_cast<int>(std::ceil(int_digits)) + policy.guard_exponent + 10);

  for (int attempt = 0; attempt < 2; ++attempt, digits *= 2) {
    const auto bits = static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 16;
    BigFloat w(bits);
    mpfr_set_z(w.get(), power.get(), MPFR_RNDN);
    mpfr_rootn_ui(w.get(), w.get(), static_cast<unsigned long>(e.den()), MPFR_RNDN);
    mpfr_mul_z(w.get(), w.get(), scale.get(), MPFR_RNDN);

    BigFloat frac(bits);
    mpfr_frac(frac.get(), w.get(), MPFR_RNDN);
    BigFloat band(bits);
    mpfr_set_ui(band.get(), 10, MPFR_RNDN);
    mpfr_pow_si(band.get(), band.get(), -policy.guard_exponent, MPFR_RNDN);

    const bool near_low = mpfr_cmp(frac.get(), band.get()) <= 0;
    mpfr_ui_sub(frac.get(), 1, frac.get(), MPFR_RNDN);
    const bool near_high = mpfr_cmp(frac.get(), band.get()) <= 0;
    if (!near_low && !near_high) {
      BigInt k;
      mpfr_get_z(k.get(), w.get(), MPFR_RNDD);
      return mod10(k);
    }
    if (attempt == 1 && policy.exact_certification && e.den() <= policy.max_certify_denominator) {
      // w sits within the band of the integer k; compare k^den with the exact
      // value of w^den = base^num * 10^(j*den) to decide which side it is on.
      BigInt k;
      mpfr_get_z(k.get(), w.get(), MPFR_RNDN);
      BigInt target;
      mpz_pow_ui(target.get(), scale.get(), static_cast<unsigned long>(e.den()));
      mpz_mul(target.get(), target.get(), power.get());
      BigInt kp;
      mpz_pow_ui(kp.get(), k.get(), static_cast<unsigned long>(e.den()));
      if (mpz_cmp(kp.get(), target.get()) > 0) mpz_sub_ui(k.get(), k.get(), 1);
      return mod10(k);
    }
  }
  throw PrecisionExhausted("digit " + std::to_string(j) + " of " + std::to_string(base) + "^" +
                           e.to_string() + " lies on a digit boundary at " +
                           std::to_string(digits / 2) + " significant digits");
}

}  // namespace lprlab
