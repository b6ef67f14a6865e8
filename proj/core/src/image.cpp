#include "scmkit/image.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace scmkit {

namespace {

std::size_t checked_area(int width, int height) {
  if (width < 0 || height < 0) {
    throw std::invalid_argument("negative raster dimension");
  }
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

}  // namespace

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height), pixels_(checked_area(width, height), fill) {}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != checked_area(width, height)) {
    throw std::invalid_argument("pixel buffer has " + std::to_string(pixels_.size()) +
                                " entries, expected " +
                                std::to_string(checked_area(width, height)));
  }
}

BinaryMask::BinaryMask(int width, int height, bool fill)
    : width_(width), height_(height), bits_(checked_area(width, height), fill ? 1 : 0) {}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BinaryMask BinaryMask::inverted() const {
  BinaryMask out = *this;
  for (auto& b : out.bits_) b = b ? 0 : 1;
  return out;
}

LabelMap::LabelMap(int width, int height, std::vector<int> labels, int label_count)
    : width_(width), height_(height), count_(label_count), labels_(std::move(labels)) {
  if (labels_.size() != checked_area(width, height)) {
    throw std::invalid_argument("label buffer size mismatch");
  }
}

std::vector<std::size_t> LabelMap::areas() const {
  std::vector<std::size_t> out(static_cast<std::size_t>(count_) + 1, 0);
  for (int label : labels_) ++out[static_cast<std::size_t>(label)];
  return out;
}

}  // namespace scmkit
