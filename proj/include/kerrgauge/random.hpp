#pragma once

// Counter-based random numbers. Every Wiener increment is a pure function of
// (master seed, trajectory index, step index), so an ensemble is reproducible
// however its trajectories are spread over threads, and any single trajectory
// can be replayed on its own.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <utility>

namespace kerrgauge {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit constexpr Philox4x32(Key key) : key_(key) {}

  [[nodiscard]] constexpr Counter operator()(Counter ctr) const {
    Key key = key_;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  Key key_;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed of sweep point `index` along `axis`:
///   h = FNV-1a-64(axis); seed = mix64(mix64(master ^ h) + index).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view axis,
                                    std::uint64_t index) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : axis) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return mix64(mix64(master ^ h) + index);
}

/// Maps 64 random bits to the open interval (0, 1). Keeps 52 bits so that
/// k + 0.5 is exact and the top value stays below 1.
constexpr double open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Pair of independent Wiener increments for one trajectory.
///
/// Step j of trajectory k uses Philox counter (j_lo, j_hi, k_lo, k_hi) under
/// the key formed from the master seed; the four output words give two
/// uniforms which Box-Muller turns into (dW, dWbar).
class NoiseStream {
 public:
  NoiseStream(std::uint64_t master_seed, std::uint64_t trajectory, std::uint64_t step = 0)
      : philox_({static_cast<std::uint32_t>(master_seed),
                 static_cast<std::uint32_t>(master_seed >> 32)}),
        trajectory_(trajectory),
        step_(step) {}

  /// Standard normal pair for the current step; advances the step counter.
  std::pair<double, double> next_standard() {
    const auto out = philox_({static_cast<std::uint32_t>(step_),
                              static_cast<std::uint32_t>(step_ >> 32),
                              static_cast<std::uint32_t>(trajectory_),
                              static_cast<std::uint32_t>(trajectory_ >> 32)});
    ++step_;
    const double u1 = open_unit((std::uint64_t{out[0]} << 32) | out[1]);
    const double u2 = open_unit((std::uint64_t{out[2]} << 32) | out[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(angle), r * std::sin(angle)};
  }

  [[nodiscard]] std::uint64_t step() const { return step_; }
  [[nodiscard]] std::uint64_t trajectory() const { return trajectory_; }

 private:
  Philox4x32 philox_;
  std::uint64_t trajectory_;
  std::uint64_t step_;
};

/// Two independent N(0, dt) increments; advances the stream.
inline std::pair<double, double> gaussian_increments(NoiseStream& stream, double dt) {
  const auto [z0, z1] = stream.next_standard();
  const double s = std::sqrt(dt);
  return {s * z0, s * z1};
}

}  // namespace kerrgauge
