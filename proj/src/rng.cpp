#include "imitanet/rng.hpp"

#include "imitanet/errors.hpp"

namespace imitanet {

namespace {
__extension__ typedef unsigned __int128 Wide;
}  // namespace

std::size_t Rng::uniform_index(std::size_t n) {
  if (n == 0) throw ArgumentError("uniform_index: empty range");
  const auto range = static_cast<std::uint64_t>(n);
  Wide m = static_cast<Wide>(next()) * range;
  auto low = static_cast<std::uint64_t>(m);
  if (low < range) {
    const std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      m = static_cast<Wide>(next()) * range;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::size_t>(m >> 64);
}

double Rng::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ (index * 0xd1b54a32d192ed03ULL));
}

}  // namespace imitanet
