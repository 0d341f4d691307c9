#include <genspec/random.hpp>

namespace genspec {

namespace {

// SplitMix64 finalizer.
constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

double RandomSource::normal() { return normal_(engine_); }

double RandomSource::uniform_open() {
    double u = 0.0;
    while (u <= 0.0 || u >= 1.0) u = uniform_(engine_);
    return u;
}

std::uint64_t RandomSource::derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t state = mix(seed);
    for (std::uint64_t label : path) state = mix(state ^ mix(label + 0x632be59bd9b4e019ULL));
    return state;
}

} // namespace genspec
