#pragma once

#include <array>
#include <cstdint>
#include <cmath>

//! Deterministic, splittable random streams.
//!
//! Reproducibility contract: stream(master_seed, index) is a pure function
//! of its two arguments. Simulation drivers give every case its own stream,
//! so results are bit-identical no matter how cases are scheduled across
//! workers. Changing the master seed or the index gives a statistically
//! independent stream.
//!
//! Generator: xoshiro256++ (Blackman/Vigna), state filled from a SplitMix64
//! run whose start state mixes the master seed with the stream index. Both
//! algorithms are public-domain reference constructions.

namespace lrbayes {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

//! SplitMix64 output function: bijective 64-bit finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace detail

//! One independent stream. Fixed draw budget per primitive: next() is one
//! raw output, uniform() one, normal() exactly two.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index) {
        // Decorrelate start states of neighbouring indices before running
        // SplitMix64; consecutive raw states would share scrambler inputs.
        std::uint64_t sm = detail::mix64(master_seed) ^
                           detail::mix64(stream_index * detail::kGolden + 0x632BE59BD9B4E019ull);
        for (auto& word : state_) {
            sm += detail::kGolden;
            word = detail::mix64(sm);
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = detail::rotl64(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl64(state_[3], 45);
        return result;
    }

    //! Uniform on [0, 1), 53 random bits.
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    //! Uniform on (0, 1]; used where log(u) must stay finite.
    double uniform_pos() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    //! Standard normal via Box-Muller, cosine branch.
    double normal() {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return r * std::cos(6.283185307179586476925286766559 * u2);
    }

    double normal(double mean, double variance) {
        return mean + std::sqrt(variance) * normal();
    }

    //! Index into a cumulative mass vector: smallest i with u < cum[i].
    //! cum.back() is treated as 1 regardless of rounding.
    template <typename Vec>
    std::size_t discrete_from_cumulative(const Vec& cum) {
        const double u = uniform();
        std::size_t lo = 0, hi = cum.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (u < cum[mid]) hi = mid; else lo = mid + 1;
        }
        return lo;
    }

private:
    std::array<std::uint64_t, 4> state_;
};

} // namespace lrbayes
