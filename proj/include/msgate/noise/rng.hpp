// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace msgate {

/// Counter-based random stream: every (seed, shot, channel, draw) tuple maps
/// to the same bits regardless of call order or thread placement, so Monte
/// Carlo runs are reproducible under any parallel schedule.
///
/// Stream splitting is a keyed splitmix64 chain; values are consumed through
/// an explicit draw counter rather than hidden generator state.
class RandomStream {
public:
  RandomStream(std::uint64_t seed, std::uint64_t shot, std::uint64_t channel)
      : key_(mix(mix(mix(0x9e3779b97f4a7c15ULL ^ seed) ^ shot) ^ (channel * 0xbf58476d1ce4e5b9ULL))) {}

  /// Uniform double in (0, 1).
  double uniform() {
    const std::uint64_t bits = next();
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; implementation-defined library
  /// distributions are avoided so streams are bit-stable across platforms.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

  std::uint64_t next() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Channel tags keeping the per-shot random draws statistically independent.
enum class NoiseChannel : std::uint64_t {
  mode_jitter = 1,
  aczs = 2,
  readout = 3,
  bootstrap = 4,
  fit_start = 5,
};

inline RandomStream noise_stream(std::uint64_t seed, std::uint64_t shot, NoiseChannel ch) {
  return RandomStream(seed, shot, static_cast<std::uint64_t>(ch));
}

/// Derived seed for a named sub-task (budget row, sweep point, ...).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) {
  RandomStream s(master, salt, 0xd1ce);
  return s.next();
}

/// FNV-1a, used to salt derived seeds with row/point names.
inline std::uint64_t hash_name(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace msgate
