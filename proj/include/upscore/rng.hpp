// Copyright 2026 The upscore Authors
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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace upscore {

// Derives a decorrelated substream seed from a base seed and up to three
// stream coordinates, using the SplitMix64 finalizer as the mixer. Equal
// inputs give equal outputs on every platform, which is what makes
// parallel generation reproducible: each unit of work owns the substream
// named by its coordinates, never a shared generator.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
  const auto mix = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  std::uint64_t s = mix(base + 0x9E3779B97F4A7C15ull * (tag + 1));
  s = mix(s + 0x9E3779B97F4A7C15ull * (a + 1));
  s = mix(s + 0x9E3779B97F4A7C15ull * (b + 1));
  return s;
}

// Substream tags. Adding a tag is free; reusing one for a new purpose
// silently correlates streams, so never renumber.
inline constexpr std::uint64_t kStreamSpeaker = 1;
inline constexpr std::uint64_t kStreamUtterance = 2;
inline constexpr std::uint64_t kStreamLayer = 3;
inline constexpr std::uint64_t kStreamTrials = 4;
inline constexpr std::uint64_t kStreamTest = 99;

// Seedable generator with hand-rolled uniform and normal transforms.
// std::mt19937_64 output is specified bit for bit by the standard;
// std::normal_distribution is not, so Box-Muller is done here to keep
// generated corpora identical across standard libraries.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in (0, 1]; never 0 so it is always a valid log argument.
  double uniform() {
    return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
  }

  // Uniform integer in [0, n) by rejection, so every value is exactly
  // equally likely (no modulo bias).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    std::uint64_t x = eng_();
    while (x < threshold) {
      x = eng_();
    }
    return x % n;
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace upscore
