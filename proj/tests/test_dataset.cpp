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

#include <numeric>
#include <sstream>

#include "lprlab/dataset.hpp"
#include "lprlab/error.hpp"

using namespace lprlab;

namespace {

Dataset from_text(const std::string& text, const std::string& target = "C") {
  std::istringstream in(text);
  return load_csv(in, "id", "status", target);
}

std::string error_of(const std::string& text) {
  try {
    from_text(text);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

Dataset loans(const std::string& target) {
  return load_csv(LPRLAB_TEST_LOANS, LoansProfile::kIdColumn, LoansProfile::kAttrColumn, target);
}

}  // namespace

TEST(LoadCsv, MapsTargetValueToBits) {
  const Dataset d = from_text("id,status\n7,C\n2,A\n");
  ASSERT_EQ(d.size(), 2U);
  EXPECT_EQ(d.entries()[0], (Entry{2, 0}));
  EXPECT_EQ(d.entries()[1], (Entry{7, 1}));
}

TEST(LoadCsv, TrimsWhitespaceAndHandlesQuotesAndBom) {
  const Dataset d = from_text("\xEF\xBB\xBFstatus, id\n\" C \", 3\nCC,4\n");
  EXPECT_EQ(d.bits(), (std::vector<std::uint8_t>{1, 0}));
  EXPECT_EQ(d.ids(), (std::vector<Identifier>{3, 4}));
}

TEST(LoadCsv, ErrorsNameTheRow) {
  EXPECT_NE(error_of("id,other\n1,C\n").find("missing column 'status'"), std::string::npos);
  EXPECT_NE(error_of("id,status\n1,C\nx7,C\n").find("row 3"), std::string::npos);
  EXPECT_NE(error_of("id,status\n1,C\n-4,C\n").find("unparsable identifier"), std::string::npos);
  EXPECT_NE(error_of("id,status\n5,C\n2,A\n5,A\n").find("row 4: duplicate identifier 5"),
            std::string::npos);
  EXPECT_THROW(from_text("id,status\n0,C\n"), DataError);
  EXPECT_THROW(from_text("id,status\n"), DataError);
}

TEST(Dataset, RejectsBrokenInvariants) {
  EXPECT_THROW(Dataset("x", {}), DataError);
  EXPECT_THROW(Dataset("x", {{2, 0}, {2, 1}}), DataError);
  EXPECT_THROW(Dataset("x", {{3, 0}, {2, 1}}), DataError);
  EXPECT_THROW(Dataset("x", {{1, 2}}), DataError);
}

TEST(Synth, DegenerateProbabilitiesAndDeterminism) {
  for (std::uint64_t seed : {1ULL, 99ULL}) {
    const auto zeros = synth(5, 0.0, seed).bits();
    const auto ones = synth(5, 1.0, seed).bits();
    EXPECT_EQ(std::accumulate(zeros.begin(), zeros.end(), 0), 0);
    EXPECT_EQ(std::accumulate(ones.begin(), ones.end(), 0), 5);
  }
  EXPECT_EQ(synth(300, 0.3, 4), synth(300, 0.3, 4));
  EXPECT_NE(synth(300, 0.3, 4).bits(), synth(300, 0.3, 5).bits());
  const Dataset d = synth(10, 0.5, 1);
  EXPECT_EQ(d.ids().front(), 1U);
  EXPECT_EQ(d.ids().back(), 10U);
  EXPECT_THROW(synth(0, 0.5, 1), InvalidArgument);
  EXPECT_THROW(synth(3, 1.5, 1), InvalidArgument);
}

TEST(Synth, DensityWithinBinomialBand) {
  const auto bits = synth(1000, 0.5, 1).bits();
  const double frac = std::accumulate(bits.begin(), bits.end(), 0.0) / 1000.0;
  EXPECT_GE(frac, 0.45);
  EXPECT_LE(frac, 0.55);
}

TEST(Restrict, KeepsClosedRangeInOrder) {
  const Dataset d("d", {{2, 0}, {7, 1}, {9, 1}});
  const Dataset r = restrict(d, 7, 9);
  EXPECT_EQ(r.ids(), (std::vector<Identifier>{7, 9}));
  EXPECT_EQ(r.bits(), (std::vector<std::uint8_t>{1, 1}));
  EXPECT_EQ(restrict(d, 1, 100), d);
  EXPECT_THROW(restrict(d, 3, 6), DataError);
  EXPECT_THROW(restrict(d, 9, 7), InvalidArgument);
}

TEST(Presence, MembershipOverRange) {
  const Dataset d("d", {{2, 0}, {3, 1}});
  const PresenceInstance p = presence_instance(d, 1, 4);
  EXPECT_EQ(p.candidate_ids, (std::vector<Identifier>{1, 2, 3, 4}));
  EXPECT_EQ(p.present, (std::vector<std::uint8_t>{0, 1, 1, 0}));
  const PresenceInstance h = presence_instance(d, 1, 4, RangeConvention::HalfOpen);
  EXPECT_EQ(h.candidate_ids.size(), 3U);
  const PresenceInstance none = presence_instance(d, 10, 20);
  EXPECT_EQ(std::accumulate(none.present.begin(), none.present.end(), 0), 0);
}

TEST(Presence, SumMatchesRestrictedCount) {
  const Dataset d = synth(200, 0.5, 3);
  const Dataset sub("sub", {{5, 1}, {17, 0}, {40, 1}, {41, 1}, {120, 0}});
  const PresenceInstance p = presence_instance(sub, 10, 60);
  EXPECT_EQ(std::accumulate(p.present.begin(), p.present.end(), 0U), restrict(sub, 10, 60).size());
  const PresenceInstance w = presence_window(d, 50, 100);
  EXPECT_EQ(w.candidate_ids.size(), 100U);
  EXPECT_EQ(w.candidate_ids.front(), 50U);
  EXPECT_EQ(w.candidate_ids.back(), 149U);
}

TEST(LoansSurrogate, RangeCountsMatchTheReferenceTable) {
  const Dataset c = loans("C");
  EXPECT_EQ(restrict(c, 2000, 3000).size(), 73U);
  EXPECT_EQ(restrict(c, 2500, 2600).size(), 12U);
  EXPECT_EQ(restrict(c, 3000, 5000).size(), 110U);
  EXPECT_EQ(restrict(c, 5000, 7000).size(), 130U);
  EXPECT_EQ(restrict(loans("A"), 10000, 12000).size(), 142U);

  const PresenceInstance p = presence_window(c, 2500, 100);
  EXPECT_EQ(p.candidate_ids.size(), 100U);
  EXPECT_EQ(std::accumulate(p.present.begin(), p.present.end(), 0), 12);
}

TEST(WriteCsv, RoundTrips) {
  const Dataset d = synth(20, 0.5, 8);
  std::stringstream ss;
  write_csv(d, ss, "id", "status");
  EXPECT_EQ(load_csv(ss, "id", "status", "1"), d);
}
