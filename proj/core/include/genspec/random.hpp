#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace genspec {

/// Seeded pseudo-random stream. Identical seeds and draw sequences give
/// identical values on the same build. Not thread-safe; confine each
/// instance to one task.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }

    double normal();
    /// Uniform on the open interval (0, 1).
    double uniform_open();

    /// Child seed for a labelled sub-stream, so that independent attempts
    /// can be drawn in any order (or concurrently) with the same result.
    static std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept;

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

} // namespace genspec
