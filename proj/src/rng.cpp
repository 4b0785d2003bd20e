#include "rng.hpp"

#include <limits>
#include <vector>

namespace offtd {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view cell_id,
                          std::uint64_t run) {
  std::uint64_t s0 = mix64(base_seed);
  std::uint64_t s1 = mix64(s0 ^ fnv1a64(cell_id));
  return mix64(s1 ^ run);
}

int Rng::uniform_int(int n) {
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  // 2^64 mod n: draws below this threshold are rejected so that the
  // remaining range is an exact multiple of n.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t r = next_u64();
    if (r >= threshold) return static_cast<int>(r % bound);
  }
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int Rng::sample_discrete(const double* p, int n) {
  double u = uniform01();
  double cum = 0.0;
  int last_pos = 0;
  for (int i = 0; i < n; ++i) {
    if (p[i] <= 0.0) continue;
    last_pos = i;
    cum += p[i];
    if (u < cum) return i;
  }
  // Guard against the accumulated row summing to slightly less than 1.
  return last_pos;
}

}  // namespace offtd
