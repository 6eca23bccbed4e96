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

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace lprlab {

// All randomness flows through std::mt19937_64 engines seeded from
// SplitMix64-derived substream keys, so results never depend on the order in
// which independent jobs are evaluated.
using Engine = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// hash(root, k0, k1, ...) by chained SplitMix64 finalization.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> keys);

inline std::uint64_t key_of(double v) { return std::bit_cast<std::uint64_t>(v); }

// Uniform on [0, 1) with 53 random bits.
double uniform01(Engine& rng);

// Box-Muller. Consumes exactly two uniforms per draw; the sine branch is
// discarded so the stream position is a pure function of the draw count.
double standard_normal(Engine& rng);

}  // namespace lprlab
