#pragma once

#include <cstddef>
#include <vector>

namespace hmot::perturb {

/// Interleaved row-major image with 1 or 3 channels, values in [0, 1].
class Image {
 public:
  Image() = default;
  Image(int height, int width, int channels, double fill = 0.0);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  std::size_t pixels() const { return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_); }

  double& at(int row, int col, int ch = 0) { return values_[Offset(row, col, ch)]; }
  double at(int row, int col, int ch = 0) const { return values_[Offset(row, col, ch)]; }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  /// Sum over all pixels and channels.
  double Energy() const;
  /// Clamps every value into [0, 1].
  void Clamp();

  bool operator==(const Image&) const = default;

 private:
  std::size_t Offset(int row, int col, int ch) const {
    return (static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(ch);
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 1;
  std::vector<double> values_;
};

}  // namespace hmot::perturb
