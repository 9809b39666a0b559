#pragma once

#include <cstdint>
#include <initializer_list>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

namespace diffsimo {

// Every stochastic component draws from an engine it owns. Engines are never
// shared between trials. Same sequence as std::mt19937_64, faster generation.
using Rng = boost::random::mt19937_64;

// Ziggurat normal sampler; the hot loops draw billions of these.
using NormalDist = boost::random::normal_distribution<double>;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based child seed: a pure function of the parent and the key path, so
// the result does not depend on which worker runs the unit or in what order.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t s = mix64(parent);
    for (std::uint64_t k : keys) s = mix64(s ^ mix64(k + 0x632be59bd9b4e019ULL));
    return s;
}

inline Rng make_rng(std::uint64_t parent, std::initializer_list<std::uint64_t> keys) {
    return Rng(derive_seed(parent, keys));
}

// Named sub-streams of one trial.
enum class Stream : std::uint64_t { kFading = 1, kPhaseNoise = 2, kSymbols = 3, kAwgn = 4 };

}  // namespace diffsimo
