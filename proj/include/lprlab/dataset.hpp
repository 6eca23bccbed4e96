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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lprlab {

using Identifier = std::uint64_t;

struct Entry {
  Identifier id = 0;
  std::uint8_t bit = 0;

  friend bool operator==(const Entry&, const Entry&) = default;
};

/// An ordered attack target: entries sorted by strictly increasing identifier,
/// each carrying one secret bit. Immutable after construction.
class Dataset {
 public:
  /// Throws DataError unless identifiers are positive, strictly increasing and
  /// bits are 0/1, and there is at least one entry.
  Dataset(std::string name, std::vector<Entry> entries);

  std::size_t size() const { return entries_.size(); }
  const std::string& name() const { return name_; }
  std::span<const Entry> entries() const { return entries_; }
  const std::vector<Identifier>& ids() const { return ids_; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  bool contains(Identifier id) const;

  friend bool operator==(const Dataset& a, const Dataset& b) { return a.entries_ == b.entries_; }

 private:
  std::string name_;
  std::vector<Entry> entries_;
  std::vector<Identifier> ids_;
  std::vector<std::uint8_t> bits_;
};

/// Candidate identifier universe plus the ground-truth membership flags.
struct PresenceInstance {
  std::vector<Identifier> candidate_ids;
  std::vector<std::uint8_t> present;
};

// SQL ranges ("BETWEEN lo AND hi") include both ends while candidate windows
// of fixed width exclude the upper one, so both readings are exposed.
enum class RangeConvention { Inclusive, HalfOpen };

// Column names of the public banking "loans" table.
struct LoansProfile {
  static constexpr std::string_view kIdColumn = "clientId";
  static constexpr std::string_view kAttrColumn = "status";
};

Dataset load_csv(const std::filesystem::path& path, std::string_view id_column,
                 std::string_view attr_column, std::string_view target_value);
Dataset load_csv(std::istream& in, std::string_view id_column, std::string_view attr_column,
                 std::string_view target_value, std::string name = "csv");

/// Identifiers 1..n, each bit an independent Bernoulli(rho) draw.
Dataset synth(std::size_t n, double rho, std::uint64_t seed);

/// Entries with lo <= id <= hi. Throws DataError when nothing remains.
Dataset restrict(const Dataset& d, Identifier lo, Identifier hi);

PresenceInstance presence_instance(const Dataset& d, Identifier lo, Identifier hi,
                                   RangeConvention convention = RangeConvention::Inclusive);

/// The window [lo, lo + width).
PresenceInstance presence_window(const Dataset& d, Identifier lo, std::size_t width = 100);

void write_csv(const Dataset& d, std::ostream& out, std::string_view id_column = "id",
               std::string_view attr_column = "bit");

// Splits one CSV record. Supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace lprlab
