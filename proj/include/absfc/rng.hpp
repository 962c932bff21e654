#pragma once

#include <cstdint>
#include <random>

namespace absfc {

/// Deterministic RNG owned by one simulation run. All stochastic events of a
/// period consume this stream in a fixed order, so (seed, config) pins the
/// whole trajectory.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return unit_(gen_); }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * unit_(gen_);
    }
    /// Integer in [0, n).
    std::size_t index(std::size_t n) {
        std::uniform_int_distribution<std::size_t> d(0, n - 1);
        return d(gen_);
    }
    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

} // namespace absfc
