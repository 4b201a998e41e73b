#pragma once

#include <cstdint>
#include <random>

namespace csr {

// splitmix64 finalizer, used both to whiten user seeds and to derive
// independent sub-stream seeds (deployment index, simulation replicate).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Sub-stream rule: stream i of base seed s is seeded with
// splitmix64(s ^ splitmix64(i + 1)). Documented so sweeps are
// reproducible across machines.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(base ^ splitmix64(index + 1));
}

// mt19937_64 output is fully specified by the standard; the
// distributions below are hand-rolled because std::uniform_*_distribution
// is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    // uniform double in [0, 1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in {0, ..., n-1}; modulo bias is < 2^-53 for the
    // ranges used here (contention windows, STA counts)
    std::uint64_t below(std::uint64_t n) { return gen_() % n; }

private:
    std::mt19937_64 gen_;
};

} // namespace csr
