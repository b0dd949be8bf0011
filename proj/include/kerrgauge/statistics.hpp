#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

namespace kerrgauge {

/// Streaming mean and second central moment (Welford), mergeable with the
/// pairwise update of Chan, Golub and LeVeque. Merging is deterministic for a
/// fixed merge order.
class RunningMoments {
 public:
  void add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  void merge(const RunningMoments& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double n = na + nb;
    const double delta = other.mean_ - mean_;
    mean_ += delta * (nb / n);
    m2_ += other.m2_ + delta * delta * (na * nb / n);
    count_ += other.count_;
  }

  [[nodiscard]] std::uint64_t count() const { return count_; }

  /// NaN for an empty accumulator.
  [[nodiscard]] double mean() const {
    return count_ == 0 ? std::numeric_limits<double>::quiet_NaN() : mean_;
  }

  /// Unbiased sample variance; undefined below two samples.
  [[nodiscard]] std::optional<double> variance() const {
    if (count_ < 2) return std::nullopt;
    return m2_ / static_cast<double>(count_ - 1);
  }

  [[nodiscard]] std::optional<double> standard_error() const {
    if (auto v = variance()) return std::sqrt(*v / static_cast<double>(count_));
    return std::nullopt;
  }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace kerrgauge
