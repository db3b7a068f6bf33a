// Copyright 2026 The nlsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <limits>

namespace nlsim {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return mix64(mix64(mix64(seed) ^ (stream + kGoldenGamma)) ^ (index * kGoldenGamma + 1));
}

/// Counter-based uniform bit source: the k-th draw depends only on
/// (seed, stream, index, k). Two parties holding the same triple see the same
/// coins without exchanging anything. Satisfies UniformRandomBitGenerator.
class CoinStream {
  public:
    using result_type = std::uint64_t;

    CoinStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
        : key_(derive_key(seed, stream, index)) {
    }

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() {
        ++draws_;
        return mix64(key_ + draws_ * kGoldenGamma);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    std::uint64_t draws() const noexcept {
        return draws_;
    }

  private:
    std::uint64_t key_;
    std::uint64_t draws_ = 0;
};

}  // namespace nlsim
