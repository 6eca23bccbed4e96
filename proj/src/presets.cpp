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

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>

#include "lprlab/error.hpp"
#include "lprlab/experiments.hpp"

namespace lprlab {
namespace {

const std::vector<std::size_t> kSweepSizes{50, 100, 200, 400};
const std::vector<double> kDiniMultipliers{1.0, 2.0, 2.5, 3.0, 4.0};

std::vector<double> real_range(double start, double stop, double step) {
  std::vector<double> out;
  for (std::size_t k = 0;; ++k) {
    const double v = start + static_cast<double>(k) * step;
    if (v > stop + 1e-9 * std::abs(step)) break;
    out.push_back(v);
  }
  return out;
}

std::vector<std::size_t> count_range(std::size_t start, std::size_t stop, std::size_t step) {
  std::vector<std::size_t> out;
  for (std::size_t v = start; v <= stop; v += step) out.push_back(v);
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct LineError {
  std::size_t line;
  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidArgument("config line " + std::to_string(line) + ": " + what);
  }
};

double parse_real(std::string_view text, const LineError& where) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    where.fail("'" + t + "' is not a number");
  }
  return v;
}

std::uint64_t parse_count(std::string_view text, const LineError& where) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    where.fail("'" + t + "' is not a non-negative integer");
  }
  return v;
}

bool parse_bool(std::string_view text, const LineError& where) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  where.fail("'" + t + "' is not a boolean");
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<double> parse_real_list(std::string_view text, const LineError& where) {
  std::vector<double> out;
  for (const std::string& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(parse_real(parts[0], where));
    } else if (parts.size() == 3) {
      const double step = parse_real(parts[2], where);
      if (!(step > 0.0)) where.fail("range step must be > 0");
      for (double v : real_range(parse_real(parts[0], where), parse_real(parts[1], where), step)) {
        out.push_back(v);
      }
    } else {
      where.fail("'" + item + "' is neither a value nor start:stop:step");
    }
  }
  return out;
}

std::vector<std::size_t> parse_count_list(std::string_view text, const LineError& where) {
  std::vector<std::size_t> out;
  for (const std::string& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(parse_count(parts[0], where));
    } else if (parts.size() == 3) {
      const std::size_t step = parse_count(parts[2], where);
      if (step == 0) where.fail("range step must be > 0");
      for (std::size_t v : count_range(parse_count(parts[0], where), parse_count(parts[1], where), step)) {
        out.push_back(v);
      }
    } else {
      where.fail("'" + item + "' is neither a value nor start:stop:step");
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3b", "table1", "presence"};
}

SweepConfig sweep_preset(std::string_view name) {
  SweepConfig cfg;
  cfg.name = std::string(name);
  cfg.trials = 10;
  const std::vector<double> sigmas = real_range(1.0, 20.0, 1.0);
  const std::vector<std::size_t> counts = count_range(50, 2950, 100);
  if (name == "fig1a" || name == "fig2a") {
    cfg.n_values = kSweepSizes;
    cfg.sigma_values = sigmas;
    cfg.query_counts = {2550};
  } else if (name == "fig1b" || name == "fig2b") {
    cfg.n_values = kSweepSizes;
    cfg.sigma_values = {4.0};
    cfg.query_counts = counts;
  } else if (name == "fig3a" || name == "fig3b") {
    cfg.method.kind = MethodKind::DiNi;
    cfg.param_values = kDiniMultipliers;
    cfg.n_values = {100};
    cfg.sigma_values = name == "fig3a" ? sigmas : std::vector<double>{4.0};
    cfg.query_counts = name == "fig3a" ? std::vector<std::size_t>{2550} : counts;
  } else if (name == "table1" || name == "presence") {
    throw InvalidArgument("preset '" + std::string(name) + "' is not a sweep grid");
  } else {
    throw InvalidArgument("unknown preset '" + std::string(name) + "'");
  }
  if (name == "fig2a" || name == "fig2b") cfg.query_kind = QueryKind::Signed;
  return cfg;
}

SweepConfig parse_sweep_config(std::istream& in) {
  SweepConfig cfg;
  std::string raw;
  std::size_t line_no = 0;
  bool seen_key = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const LineError where{line_no};
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) where.fail("expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (value.empty()) where.fail("empty value for '" + key + "'");

    if (key == "preset") {
      if (seen_key) where.fail("preset must be the first key");
      cfg = sweep_preset(value);
    } else if (key == "name") {
      cfg.name = value;
    } else if (key == "method") {
      cfg.method.kind = parse_method(value);
    } else if (key == "query_kind" || key == "family") {
      cfg.query_kind = parse_query_kind(value);
    } else if (key == "n_values") {
      cfg.n_values = parse_count_list(value, where);
    } else if (key == "sigma_values") {
      cfg.sigma_values = parse_real_list(value, where);
    } else if (key == "query_counts") {
      cfg.query_counts = parse_count_list(value, where);
    } else if (key == "param_values" || key == "B_values") {
      cfg.param_values = parse_real_list(value, where);
    } else if (key == "error_bound_multiplier") {
      cfg.method.error_bound_multiplier = parse_real(value, where);
    } else if (key == "cap_multiplier") {
      cfg.method.cap_multiplier = parse_real(value, where);
    } else if (key == "trials") {
      cfg.trials = parse_count(value, where);
    } else if (key == "root_seed") {
      cfg.root_seed = parse_count(value, where);
    } else if (key == "rho") {
      cfg.rho = parse_real(value, where);
    } else if (key == "suppression") {
      cfg.suppression = parse_bool(value, where);
    } else if (key == "suppression_threshold") {
      cfg.suppression_threshold = static_cast<std::int64_t>(parse_count(value, where));
    } else if (key == "jobs") {
      cfg.jobs = parse_count(value, where);
    } else if (key == "record_timing") {
      cfg.record_timing = parse_bool(value, where);
    } else {
      where.fail("unknown key '" + key + "'");
    }
    seen_key = true;
  }
  cfg.validate();
  return cfg;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path.string());
  return parse_sweep_config(in);
}

}  // namespace lprlab
