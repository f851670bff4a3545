#pragma once

#include <cmath>
#include <cstdint>

namespace gcorr {

/// Counter-based generator built on the splitmix64 finalizer: every draw is
/// a pure hash of (seed, stream, counter), so parallel consumers can sample
/// any index directly and results never depend on evaluation order.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(seed + 0x9e3779b97f4a7c15ull * (stream + 1))) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t bits(std::uint64_t counter) const {
        return mix(key_ ^ (counter * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull));
    }

    /// Uniform on the open interval (0,1).
    double uniform(std::uint64_t counter) const {
        return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(std::uint64_t counter, double lo, double hi) const {
        return lo + (hi - lo) * uniform(counter);
    }

    /// Standard normal via Box-Muller; consumes two sub-counters per draw.
    double normal(std::uint64_t counter) const {
        double u1 = uniform(2 * counter);
        double u2 = uniform(2 * counter + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

private:
    std::uint64_t key_;
};

/// Convenience sequential view over a CounterRng.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : rng_(seed, stream) {}

    double uniform() { return rng_.uniform(n_++); }
    double uniform(double lo, double hi) { return rng_.uniform(n_++, lo, hi); }
    std::uint64_t bits() { return rng_.bits(n_++); }

    double normal() {
        // two raw counters, so mixed uniform/normal call sequences never
        // reuse a sub-draw
        double u1 = rng_.uniform(n_++);
        double u2 = rng_.uniform(n_++);
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586477 * u2);
    }

    const CounterRng& rng() const { return rng_; }

private:
    CounterRng rng_;
    std::uint64_t n_ = 0;
};

}  // namespace gcorr
