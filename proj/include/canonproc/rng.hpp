#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace canonproc {

/// Philox4x32-10 block function. Maps (counter, key) to four pseudorandom
/// 32-bit words. Stateless, so any draw can be recomputed from its address.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// 64-bit FNV-1a over a byte string.
std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

/// A reproducible random stream addressed by (seed, purpose label, index).
///
/// Draw number k of the stream is a pure function of (seed, label, index, k),
/// so results never depend on iteration order or thread count.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::string_view label,
                std::uint64_t index);

  /// Four raw 32-bit words of block `block`.
  std::array<std::uint32_t, 4> block(std::uint64_t block) const;

  /// Uniform double in (0, 1) built from 53 random bits; draw k.
  double uniform(std::uint64_t k) const;

  /// Random sign for coordinate k (128 signs per Philox block).
  int sign(std::uint64_t k) const;

  /// Standard normal for coordinate k via Box-Muller; coordinates 2j and 2j+1
  /// share one uniform pair.
  double normal(std::uint64_t k) const;

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t index_;
};

}  // namespace canonproc
