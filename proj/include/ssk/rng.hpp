#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace ssk {

// Identity of one random stream.  Every random quantity produced by the lab
// is a pure function of (base_seed, sample_index), so independent samples can
// be generated in any order, on any number of threads, with identical results.
struct SeedSpec {
    std::uint64_t base_seed = 0;
    std::uint64_t sample_index = 0;

    friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

namespace detail {

// SplitMix64 finalizer (Stafford mix13): full-avalanche 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace detail

// Collapses a SeedSpec into the 64-bit state used to key the stream.  Two
// mixer rounds, one per key word, so flipping any input bit flips each output
// bit with probability ~1/2 (checked by the avalanche test).
constexpr std::uint64_t stream_seed(const SeedSpec& spec) {
    std::uint64_t h = 0x243F6A8885A308D3ull;
    h = detail::mix64(h ^ (spec.base_seed + 0x9E3779B97F4A7C15ull));
    h = detail::mix64(h ^ (spec.sample_index + 0x452821E638D01377ull));
    return h;
}

// xoshiro256++ with SplitMix64 state expansion.  Small, fast, and more than
// good enough statistically for Monte Carlo work.
class RandomStream {
public:
    explicit RandomStream(const SeedSpec& spec) {
        std::uint64_t x = stream_seed(spec);
        for (auto& word : state_) {
            x += 0x9E3779B97F4A7C15ull;
            word = detail::mix64(x);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0,1), 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0,1]; safe under log().
    double uniform01_open_low() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; second value of each pair is cached so
    // the stream stays a deterministic function of the draw sequence.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u = uniform01_open_low();
        const double v = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double a = 6.283185307179586476925286766559 * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Gamma(alpha, 1) for alpha >= 1, Marsaglia-Tsang squeeze/rejection.
    double gamma(double alpha) {
        if (alpha < 1.0) throw std::invalid_argument("RandomStream::gamma: alpha < 1");
        const double d = alpha - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01_open_low();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    // chi_df draw.  Exact sum of squared normals at small df; 2*Gamma(df/2)
    // above, where the direct sum gets slow.
    double chi(int df) {
        if (df < 1) throw std::invalid_argument("RandomStream::chi: df < 1");
        if (df <= 32) {
            double s = 0.0;
            for (int i = 0; i < df; ++i) {
                const double z = normal();
                s += z * z;
            }
            return std::sqrt(s);
        }
        return std::sqrt(2.0 * gamma(0.5 * df));
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

inline RandomStream derive_stream(const SeedSpec& spec) { return RandomStream(spec); }

} // namespace ssk
