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

#include "lprlab/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "lprlab/error.hpp"
#include "lprlab/rng.hpp"

namespace lprlab {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::size_t column_index(const std::vector<std::string>& header, std::string_view name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == name) return i;
  }
  throw DataError("missing column '" + std::string(name) + "' (row 1)");
}

}  // namespace

Dataset::Dataset(std::string name, std::vector<Entry> entries)
    : name_(std::move(name)), entries_(std::move(entries)) {
  if (entries_.empty()) throw DataError("dataset '" + name_ + "' has no entries");
  ids_.reserve(entries_.size());
  bits_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Entry& e = entries_[i];
    if (e.id == 0) throw DataError("identifier must be positive (entry " + std::to_string(i) + ")");
    if (e.bit > 1) throw DataError("bit must be 0 or 1 (entry " + std::to_string(i) + ")");
    if (i > 0 && entries_[i - 1].id >= e.id) {
      throw DataError("identifiers must be strictly increasing (entry " + std::to_string(i) + ")");
    }
    ids_.push_back(e.id);
    bits_.push_back(e.bit);
  }
}

bool Dataset::contains(Identifier id) const { return std::binary_search(ids_.begin(), ids_.end(), id); }

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

Dataset load_csv(std::istream& in, std::string_view id_column, std::string_view attr_column,
                 std::string_view target_value, std::string name) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty CSV: missing header row");
  if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
  const auto header = split_csv_line(line);
  const std::size_t id_col = column_index(header, id_column);
  const std::size_t attr_col = column_index(header, attr_column);
  const std::string_view target = trim(target_value);

  std::vector<std::pair<Entry, std::size_t>> rows;  // entry, row number
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() <= std::max(id_col, attr_col)) {
      throw DataError("row " + std::to_string(row) + ": too few fields");
    }
    const std::string_view id_text = trim(fields[id_col]);
    Identifier id = 0;
    const auto [ptr, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
    if (ec != std::errc{} || ptr != id_text.data() + id_text.size() || id == 0) {
      throw DataError("row " + std::to_string(row) + ": unparsable identifier '" +
                      std::string(id_text) + "'");
    }
    const std::uint8_t bit = trim(fields[attr_col]) == target ? 1 : 0;
    rows.push_back({Entry{id, bit}, row});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first.id < b.first.id; });
  std::vector<Entry> entries;
  entries.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i - 1].first.id == rows[i].first.id) {
      throw DataError("row " + std::to_string(std::max(rows[i - 1].second, rows[i].second)) +
                      ": duplicate identifier " + std::to_string(rows[i].first.id));
    }
    entries.push_back(rows[i].first);
  }
  return Dataset(std::move(name), std::move(entries));
}

Dataset load_csv(const std::filesystem::path& path, std::string_view id_column,
                 std::string_view attr_column, std::string_view target_value) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return load_csv(in, id_column, attr_column, target_value, path.stem().string());
}

Dataset synth(std::size_t n, double rho, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("synth: n must be at least 1");
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("synth: rho must lie in [0, 1]");
  Engine rng(derive_seed(seed, {0x5359'4E54ULL}));
  std::vector<Entry> entries(n);
  for (std::size_t i = 0; i < n; ++i) {
    // One uniform per entry, strict comparison so rho = 0 and rho = 1 are exact.
    entries[i] = Entry{i + 1, static_cast<std::uint8_t>(uniform01(rng) < rho ? 1 : 0)};
  }
  return Dataset("synth-n" + std::to_string(n), std::move(entries));
}

Dataset restrict(const Dataset& d, Identifier lo, Identifier hi) {
  if (lo > hi) throw InvalidArgument("restrict: lo must not exceed hi");
  std::vector<Entry> kept;
  for (const Entry& e : d.entries()) {
    if (e.id >= lo && e.id <= hi) kept.push_back(e);
  }
  if (kept.empty()) {
    throw DataError("restrict: no identifiers in [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "]");
  }
  return Dataset(d.name() + "[" + std::to_string(lo) + "," + std::to_string(hi) + "]",
                 std::move(kept));
}

PresenceInstance presence_instance(const Dataset& d, Identifier lo, Identifier hi,
                                   RangeConvention convention) {
  if (lo > hi) throw InvalidArgument("presence_instance: lo must not exceed hi");
  const Identifier end = convention == RangeConvention::Inclusive ? hi + 1 : hi;
  PresenceInstance inst;
  for (Identifier id = lo; id < end; ++id) {
    inst.candidate_ids.push_back(id);
    inst.present.push_back(d.contains(id) ? 1 : 0);
  }
  return inst;
}

PresenceInstance presence_window(const Dataset& d, Identifier lo, std::size_t width) {
  return presence_instance(d, lo, lo + width, RangeConvention::HalfOpen);
}

void write_csv(const Dataset& d, std::ostream& out, std::string_view id_column,
               std::string_view attr_column) {
  out << id_column << ',' << attr_column << '\n';
  for (const Entry& e : d.entries()) out << e.id << ',' << int{e.bit} << '\n';
}

}  // namespace lprlab
