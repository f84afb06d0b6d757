#pragma once

#include <cstddef>
#include <numeric>
#include <optional>
#include <vector>

#include "neuroloop/errors.hpp"

namespace neuroloop {

/// Boxcar downsampler: consumes a fast sample series and emits the mean of the
/// last `window` samples once every `stride` inputs (right-aligned; during
/// startup the window is whatever has arrived so far). The sum is recomputed
/// at every emission so results do not depend on accumulation history.
class SlidingAverage {
 public:
  explicit SlidingAverage(std::size_t window = 200, std::size_t stride = 20)
      : window_(window), stride_(stride) {
    if (window == 0 || stride == 0) throw ConfigError("SlidingAverage: window and stride must be positive");
    buf_.reserve(window);
  }

  /// Returns the averaged value when this sample completes a stride.
  std::optional<double> push(double sample) {
    if (buf_.size() < window_) {
      buf_.push_back(sample);
    } else {
      buf_[head_] = sample;
      head_ = (head_ + 1) % window_;
    }
    if (++since_emit_ < stride_) return std::nullopt;
    since_emit_ = 0;
    const double sum = std::accumulate(buf_.begin(), buf_.end(), 0.0);
    return sum / static_cast<double>(buf_.size());
  }

  std::size_t window() const { return window_; }
  std::size_t stride() const { return stride_; }
  std::size_t fill() const { return buf_.size(); }

 private:
  std::size_t window_;
  std::size_t stride_;
  std::vector<double> buf_;
  std::size_t head_ = 0;
  std::size_t since_emit_ = 0;
};

}  // namespace neuroloop
