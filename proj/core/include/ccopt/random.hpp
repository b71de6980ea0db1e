/*
 * Copyright 2026 The ccopt Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <random>

namespace ccopt {

using Rng = std::mt19937_64;

/// Named sub-streams so that independent consumers of one master seed never
/// share random draws.
enum class Stream : std::uint32_t {
  kLayoutMacro = 1,
  kLayoutSmall = 2,
  kLayoutUe = 3,
  kLosState = 10,
  kShadowing = 11,
  kFading = 12,
  kInit = 20,
  kMutation = 21,
  kCrossover = 22,
  kRandomSearch = 30,
  kBoInit = 31,
  kBoAcquisition = 32,
  kProbe = 40,
};

inline Rng make_rng(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

/// Uniform double in [0, 1) from the top 53 bits; unlike
/// std::uniform_real_distribution this is identical on every standard library.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

}  // namespace ccopt
