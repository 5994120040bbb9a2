#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>

namespace thematic {

/// Seedable, portable random source: std::mt19937_64 (bit-exact across
/// standard libraries) with integer-to-real conversion done here rather than
/// by <random> distributions, whose output is implementation-defined.
///
/// Stream splitting: stream s of seed x is an mt19937_64 seeded with
/// splitmix64(x + s * 0x9E3779B97F4A7C15). Single-worker code uses stream 0;
/// parallel worker w uses stream w + 1; community detection uses stream 0 of
/// its own seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0);

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, n); n > 0.
  std::uint32_t below(std::uint32_t n) { return static_cast<std::uint32_t>(uniform() * n); }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = below(static_cast<std::uint32_t>(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // Textual engine state, restorable with from_state.
  std::string state() const;
  static Rng from_state(const std::string& state);

  friend bool operator==(const Rng& a, const Rng& b) { return a.engine_ == b.engine_; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace thematic
