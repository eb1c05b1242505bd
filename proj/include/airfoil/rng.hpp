#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>

#include "airfoil/errors.hpp"

namespace airfoil {

// splitmix64 mix step; used to derive independent stream seeds from one
// master seed so that toggling one RNG consumer does not shift the others.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream_id) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream_id + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic random stream. Draw procedures are hand-rolled on top of
// mt19937_64 so results do not depend on the standard library's
// distribution implementations.
class RngStream {
 public:
  RngStream() : engine_(0) {}
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  static RngStream derived(std::uint64_t master, std::uint64_t stream_id) {
    return RngStream(mix_seed(master, stream_id));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Rejection sampling, so exactly uniform.
  int uniform_int(int n) {
    if (n <= 0) throw ArgumentError("uniform_int: n must be positive");
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return static_cast<int>(v % un);
  }

  /// Standard normal via Box-Muller (cosine branch only, so one draw
  /// consumes exactly two engine outputs).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  friend std::ostream& operator<<(std::ostream& os, const RngStream& s) {
    return os << s.engine_;
  }
  friend std::istream& operator>>(std::istream& is, RngStream& s) {
    return is >> s.engine_;
  }

  bool operator==(const RngStream& other) const {
    return engine_ == other.engine_;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace airfoil
