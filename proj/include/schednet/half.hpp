#pragma once

#include <bit>
#include <cstdint>

namespace schednet {

// IEEE 754 binary16 conversions with round-to-nearest-even, straight off the
// double bit pattern (no intermediate float32, so there is no double
// rounding). One bandwidth unit on the wire is one of these.

inline std::uint16_t double_to_half(double d) {
  const std::uint64_t x = std::bit_cast<std::uint64_t>(d);
  const std::uint16_t sign = static_cast<std::uint16_t>((x >> 48) & 0x8000u);
  std::uint64_t mant = x & 0x000fffffffffffffULL;
  const int exp = static_cast<int>((x >> 52) & 0x7ff);

  if (exp == 0x7ff) {  // inf / nan
    if (mant == 0) return static_cast<std::uint16_t>(sign | 0x7c00u);
    return static_cast<std::uint16_t>(sign | 0x7e00u |
                                      static_cast<std::uint16_t>(mant >> 42));
  }

  const int e = exp - 1023 + 15;
  if (e >= 31) return static_cast<std::uint16_t>(sign | 0x7c00u);  // overflow
  if (e <= 0) {
    if (e < -10) return sign;  // underflows to zero even after rounding
    mant |= 1ULL << 52;
    const int shift = 43 - e;
    std::uint64_t h = mant >> shift;
    const std::uint64_t rem = mant & ((1ULL << shift) - 1);
    const std::uint64_t halfway = 1ULL << (shift - 1);
    if (rem > halfway || (rem == halfway && (h & 1))) ++h;
    return static_cast<std::uint16_t>(sign | h);
  }

  std::uint16_t h = static_cast<std::uint16_t>(
      sign | (static_cast<std::uint16_t>(e) << 10) |
      static_cast<std::uint16_t>(mant >> 42));
  const std::uint64_t rem = mant & ((1ULL << 42) - 1);
  const std::uint64_t halfway = 1ULL << 41;
  // rounding may carry into the exponent; 0x7bff + 1 = 0x7c00 = inf, as it should
  if (rem > halfway || (rem == halfway && (h & 1))) ++h;
  return h;
}

inline double half_to_double(std::uint16_t h) {
  const std::uint64_t sign = static_cast<std::uint64_t>(h & 0x8000u) << 48;
  const std::uint32_t exp = (h >> 10) & 0x1f;
  std::uint64_t mant = h & 0x3ffu;

  std::uint64_t x;
  if (exp == 0) {
    if (mant == 0) {
      x = sign;  // signed zero
    } else {
      // subnormal: renormalize into a double
      int s = 0;
      while (!(mant & 0x400u)) {
        mant <<= 1;
        ++s;
      }
      x = sign | (static_cast<std::uint64_t>(1023 - 15 + 1 - s) << 52) |
          ((mant & 0x3ffu) << 42);
    }
  } else if (exp == 31) {
    x = sign | (0x7ffULL << 52) | (mant << 42);
  } else {
    x = sign | (static_cast<std::uint64_t>(exp - 15 + 1023) << 52) | (mant << 42);
  }
  return std::bit_cast<double>(x);
}

// what a value looks like after crossing the wire
inline double quantize_half(double x) { return half_to_double(double_to_half(x)); }

}  // namespace schednet
