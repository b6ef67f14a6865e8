#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace scmkit {

/// Edge length of every SCM realization.
inline constexpr int kImageSize = 256;

/// Row-major single-channel 8-bit raster.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, std::uint8_t fill = 0);
  GrayImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }
  std::uint8_t& at(int x, int y) { return pixels_[index(x, y)]; }

  std::span<const std::uint8_t> pixels() const { return pixels_; }
  std::span<std::uint8_t> pixels() { return pixels_; }

  bool operator==(const GrayImage&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Row-major boolean raster. Out-of-range reads through get() return false.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);

  int width() const { return width_; }
  int height() const { return height_; }

  bool get(int x, int y) const {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) return false;
    return bits_[index(x, y)] != 0;
  }
  void set(int x, int y, bool value) { bits_[index(x, y)] = value ? 1 : 0; }

  std::size_t count() const;
  bool any() const { return count() > 0; }
  BinaryMask inverted() const;

  std::span<const std::uint8_t> bits() const { return bits_; }

  bool operator==(const BinaryMask&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Connected-component labels; 0 is background, 1..count() are regions.
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(int width, int height, std::vector<int> labels, int label_count);

  int width() const { return width_; }
  int height() const { return height_; }
  int count() const { return count_; }
  int at(int x, int y) const {
    return labels_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                   static_cast<std::size_t>(x)];
  }
  std::span<const int> labels() const { return labels_; }

  /// Pixel count per label; index 0 holds the background count.
  std::vector<std::size_t> areas() const;

 private:
  int width_ = 0;
  int height_ = 0;
  int count_ = 0;
  std::vector<int> labels_;
};

}  // namespace scmkit
