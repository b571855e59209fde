#include "canonproc/rng.hpp"

#include <cmath>
#include <numbers>

namespace canonproc {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(prod >> 32);
  lo = static_cast<std::uint32_t>(prod);
}

// Uniform on (0,1): (m + 0.5) * 2^-53 never hits either endpoint.
inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits =
      ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

CounterStream::CounterStream(std::uint64_t seed, std::string_view label,
                             std::uint64_t index)
    : index_(index) {
  // Key = seed folded with the label hash, so distinct purposes never share
  // a stream even under the same user seed.
  const std::uint64_t mixed = seed ^ (fnv1a64(label) * 0x9E3779B97F4A7C15ULL);
  key_ = {static_cast<std::uint32_t>(mixed),
          static_cast<std::uint32_t>(mixed >> 32)};
}

std::array<std::uint32_t, 4> CounterStream::block(std::uint64_t block) const {
  return philox4x32({static_cast<std::uint32_t>(block),
                     static_cast<std::uint32_t>(block >> 32),
                     static_cast<std::uint32_t>(index_),
                     static_cast<std::uint32_t>(index_ >> 32)},
                    key_);
}

double CounterStream::uniform(std::uint64_t k) const {
  const auto w = block(k / 2);
  return k % 2 == 0 ? to_open_unit(w[0], w[1]) : to_open_unit(w[2], w[3]);
}

int CounterStream::sign(std::uint64_t k) const {
  const auto w = block(k / 128);
  const unsigned bit = static_cast<unsigned>(k % 128);
  return ((w[bit / 32] >> (bit % 32)) & 1U) ? 1 : -1;
}

double CounterStream::normal(std::uint64_t k) const {
  const auto w = block(k / 2);
  const double u1 = to_open_unit(w[0], w[1]);
  const double u2 = to_open_unit(w[2], w[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return k % 2 == 0 ? radius * std::cos(angle) : radius * std::sin(angle);
}

}  // namespace canonproc
