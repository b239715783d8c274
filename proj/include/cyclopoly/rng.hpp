/*
 Copyright 2026 The cyclopoly Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace cyclopoly {

/// SplitMix64 finalizer. Used to derive independent sub-seeds.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic child seed for a (parent, stream) pair.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) noexcept {
    return splitmix64(splitmix64(parent) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

/**
 * Seedable random source with a fully specified output sequence.
 *
 * "cyclopoly-rng v1": the engine is std::mt19937_64 (bit-exact by the C++
 * standard). Uniform variates take the top 53 bits of one draw, scaled to
 * [0, 1). Normal variates use the Box-Muller transform on two uniforms,
 * returning the cosine branch and caching the sine branch for the next call.
 * The std:: distributions are avoided because their algorithms are
 * implementation-defined.
 */
class Rng {
public:
    static constexpr int kVersion = 1;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() noexcept {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1].
    double uniform_open_zero() noexcept { return 1.0 - uniform(); }

    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open_zero();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    double normal(double mean, double std_dev) noexcept { return mean + std_dev * normal(); }

    /// Unit-rate exponential variate.
    double exponential() noexcept { return -std::log(uniform_open_zero()); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace cyclopoly
