#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace radonlik {

using Rng = std::mt19937_64;

/// Independent, reproducible substream for (seed, path...). Work that may
/// run on any thread derives its generator from its logical index, never
/// from a shared generator, so results do not depend on scheduling.
Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path = {});

/// Uniform double on the open interval (0, 1).
double uniform_open(Rng& rng);

}  // namespace radonlik
