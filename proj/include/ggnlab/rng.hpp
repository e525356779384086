#pragma once

#include <cmath>
#include <cstdint>

namespace ggnlab {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Replication r of master seed m draws its stream seed from this mix.
// The rule is part of the reproducibility contract: changing it changes
// every simulation artifact byte-for-byte.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replication) {
    return splitmix64(master ^ splitmix64(0x9e3779b97f4a7c15ULL * (replication + 1)));
}

// xoshiro256++ with splitmix64 seeding. One generator call per uniform,
// so a stream's draw count is a deterministic function of what was sampled.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) {
        std::uint64_t z = seed;
        for (auto& w : state_) {
            z = splitmix64(z);
            w = z;
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

    // Uniform on the open interval (0,1); never returns 0 or 1, so logs and
    // quantile transforms are always finite.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    // Standard normal by the polar method (rejection; ~1.27 iterations).
    double normal() {
        for (;;) {
            const double a = 2.0 * uniform() - 1.0;
            const double b = 2.0 * uniform() - 1.0;
            const double r = a * a + b * b;
            if (r < 1.0 && r > 0.0) return a * std::sqrt(-2.0 * std::log(r) / r);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

}  // namespace ggnlab
