#include "radonlik/random.hpp"

#include <vector>

namespace radonlik {

Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * (path.size() + 1) + 1);
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  words.push_back(static_cast<std::uint32_t>(path.size()));
  for (auto v : path) push(v);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

double uniform_open(Rng& rng) {
  // 53 random bits shifted off zero.
  const std::uint64_t bits = rng() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace radonlik
