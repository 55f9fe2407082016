#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace schednet {

// Deterministic random stream. All sampling goes through hand-rolled
// transforms of the raw engine output so that sequences are reproducible
// bit-for-bit across standard libraries (std::*_distribution is not
// portable between implementations).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // uniform in [0,1) with 53 bits of resolution
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller; the sine branch is discarded to keep the stream stateless
  double normal(double mean = 0.0, double sd = 1.0) {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * r * std::cos(6.283185307179586476925286766559 * u2);
  }

  // integer in [0, n)
  int randint(int n) {
    const int v = static_cast<int>(uniform01() * static_cast<double>(n));
    return v < n ? v : n - 1;
  }

 private:
  std::mt19937_64 eng_;
};

// splitmix64 finalizer; used to derive independent substream seeds from
// one master seed (per agent, per net, per worker, ...).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace schednet
