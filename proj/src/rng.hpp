#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace offtd {

// SplitMix64 finalizer. Used for seed derivation only, never as a stream.
std::uint64_t mix64(std::uint64_t x);

// FNV-1a over bytes; stable way to fold a cell-id string into a seed.
std::uint64_t fnv1a64(std::string_view s);

// Seed for one (cell, run) work item:
//   s0 = mix64(base); s1 = mix64(s0 ^ fnv1a64(cell_id)); seed = mix64(s1 ^ run).
// Documented in docs/formats.md; results must be byte-identical across
// worker counts, so every run derives its seed independently of scheduling.
std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view cell_id,
                          std::uint64_t run);

// Deterministic RNG: the std::mt19937_64 engine is bit-exact per the C++
// standard, but the standard *distributions* are not portable, so all
// mappings from raw 64-bit draws are implemented explicitly here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Unbiased integer in [0, n) via modulo rejection.
  int uniform_int(int n);

  // Double in [0, 1) with 53 random mantissa bits.
  double uniform01();

  // Index sampled from an (unnormalized is not allowed) probability row,
  // by ascending-index inverse CDF; ties in the CDF resolve to the lower
  // index, so the draw is reproducible bit-for-bit.
  int sample_discrete(const double* p, int n);

  // Fisher-Yates shuffle using uniform_int (front-to-back).
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
      int j = uniform_int(i + 1);
      std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace offtd
