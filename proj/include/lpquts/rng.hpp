#ifndef LPQUTS_RNG_HPP
#define LPQUTS_RNG_HPP

#include <cstdint>
#include <random>

namespace lpquts {

/// Deterministic RNG wrapper. All randomness in the library flows through
/// this class so that results are reproducible across platforms; the raw
/// std distributions are avoided because their algorithms are
/// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), gen_(mix(seed)) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in (0, 1]; redraws the (measure-zero) exact 0.
    double uniform_pos() {
        double u = uniform();
        while (u == 0.0) u = uniform();
        return u;
    }

    /// Uniform integer in [0, bound), bound >= 1. Rejection sampling keeps
    /// the draw unbiased.
    std::uint64_t uniform_int(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % bound;
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Independent child stream, e.g. one per shot or per instance.
    Rng derive(std::uint64_t stream) const {
        return Rng(mix(seed_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1))));
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        // splitmix64 finalizer; decorrelates nearby seeds.
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

} // namespace lpquts

#endif
