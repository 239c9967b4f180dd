#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace gfflab::rng {

// Counter-based generator built on the SplitMix64 finalizer
// (Steele-Lea-Flood constants). Output i of a stream with key k is
// mix64(k + (i+1) * kGamma), so draws are a pure function of
// (master_seed, purpose, replica, counter) and bit-reproducible across
// platforms and thread schedules.
inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// Purpose tags keep streams for different pipeline stages disjoint.
enum class Purpose : std::uint64_t {
  kField = 1,
  kFieldTilde = 2,
  kWalk = 3,
  kHolding = 4,
  kProbe = 5,
  kCover = 6,
  kHitting = 7,
  kGeneric = 8,
};

class Stream {
 public:
  Stream(std::uint64_t master_seed, Purpose purpose, std::uint64_t replica)
      : key_(mix64(mix64(master_seed + kGamma * static_cast<std::uint64_t>(purpose)) +
                   replica)) {}

  explicit Stream(std::uint64_t raw_key) : key_(raw_key) {}

  std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGamma); }

  // Uniform on (0,1]; never returns 0 so logs are safe.
  double next_unit() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform integer in [0, n) via 128-bit multiply (Lemire).
  std::uint32_t next_below(std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  double next_exp() { return -std::log(next_unit()); }

  // Box-Muller pair; second value cached.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Poisson(mean) as the number of unit-exponential arrivals in [0, mean].
  // O(mean) but exactly mirrors the holding-time construction it models.
  long long next_poisson(double mean) {
    long long k = 0;
    double s = next_exp();
    while (s <= mean) {
      ++k;
      s += next_exp();
    }
    return k;
  }

  // Gamma(k,1) with integer shape, as a sum of exponentials.
  double next_gamma_int(long long k) {
    double s = 0.0;
    for (long long i = 0; i < k; ++i) s += next_exp();
    return s;
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline std::string stream_tag(std::uint64_t master_seed, Purpose purpose,
                              std::uint64_t replica) {
  return "seed=" + std::to_string(master_seed) +
         ",purpose=" + std::to_string(static_cast<std::uint64_t>(purpose)) +
         ",replica=" + std::to_string(replica);
}

}  // namespace gfflab::rng
