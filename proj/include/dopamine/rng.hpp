#pragma once

#include <cmath>
#include <cstdint>

namespace dopamine {

/// Counter-style 64-bit PRNG (SplitMix64, Steele et al.). The output sequence
/// is a pure function of the seed, so every run replays bit-identically.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in (0, 1]; never 0, so it is safe under log().
    double next_unit() {
        return static_cast<double>((next_u64() >> 11) + 1) * (1.0 / 9007199254740992.0);
    }

private:
    uint64_t state_;
};

/// Standard-normal stream: Box-Muller transform over SplitMix64 uniforms,
/// with the usual cached spare. Deterministic given the seed.
class GaussianStream {
public:
    explicit GaussianStream(uint64_t seed) : rng_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = rng_.next_unit();
        const double u2 = rng_.next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    /// Uniform draw in (0, 1] from the same underlying stream (does not touch
    /// the Box-Muller spare, so mixing kinds stays deterministic).
    double next_uniform() { return rng_.next_unit(); }

private:
    SplitMix64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Purpose tags for deriving independent substreams from one base seed.
/// Weight init deliberately does not depend on the optimizer id, so optimizer
/// comparisons under the same seed share identical initial parameters.
enum class StreamKind : uint64_t {
    init = 1,
    perturb = 2,
    data_noise = 3,
    directions = 4,
    split = 5,
};

/// Derives a substream seed from (base, kind, index) with a SplitMix-style
/// finalizer. Distinct (kind, index) pairs give statistically independent
/// streams.
inline uint64_t derive_seed(uint64_t base, StreamKind kind, uint64_t index = 0) {
    uint64_t z = base;
    z ^= 0x9E3779B97F4A7C15ull * (static_cast<uint64_t>(kind) + 1);
    z ^= 0xBF58476D1CE4E5B9ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace dopamine
