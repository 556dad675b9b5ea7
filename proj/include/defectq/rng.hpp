#pragma once

#include <cstdint>

namespace defectq {

// Counter-based generator: output k = mix(seed, k). Streams derived by
// hashing ids into the seed, so (master_seed, lattice, trial) always maps
// to the same sequence regardless of thread interleaving or platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(splitmix(seed ^ 0x9e3779b97f4a7c15ull)) {}

    static uint64_t derive(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
        uint64_t h = seed;
        h = splitmix(h ^ (a + 0x9e3779b97f4a7c15ull));
        h = splitmix(h ^ (b + 0xbf58476d1ce4e5b9ull));
        h = splitmix(h ^ (c + 0x94d049bb133111ebull));
        return h;
    }

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return splitmix(state_);
    }

    // uniform in [0, 1)
    double next_double() {
        return (next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in [0, n)
    uint64_t next_below(uint64_t n) {
        return next_u64() % n;
    }

    bool bernoulli(double p) { return next_double() < p; }

private:
    static uint64_t splitmix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    uint64_t state_;
};

} // namespace defectq
