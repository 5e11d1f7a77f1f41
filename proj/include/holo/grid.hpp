#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "holo/errors.hpp"

namespace holo {

enum class Unit { Photons, Radians, Dimensionless };

std::string unit_name(Unit u);
Unit unit_from_name(const std::string& name);

// Axis-aligned pixel rectangle, [x, x+w) x [y, y+h).
struct PixelRect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int area() const { return w * h; }
  bool contains(int px, int py) const {
    return px >= x && px < x + w && py >= y && py < y + h;
  }
  bool overlaps(const PixelRect& o) const {
    return x < o.x + o.w && o.x < x + w && y < o.y + o.h && o.y < y + h;
  }
};

// 2D row-major real-valued raster. Substrate for frames, phase maps,
// modulation maps. Constructors check structural invariants; validate()
// additionally enforces the unit convention (photons => values >= 0).
class ImageGrid {
 public:
  ImageGrid() = default;
  ImageGrid(int width, int height, Unit unit, double fill = 0.0);
  ImageGrid(int width, int height, Unit unit, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  Unit unit() const { return unit_; }
  std::size_t size() const { return values_.size(); }

  double& at(int x, int y) { return values_[idx(x, y)]; }
  double at(int x, int y) const { return values_[idx(x, y)]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  bool same_shape(const ImageGrid& o) const {
    return width_ == o.width_ && height_ == o.height_;
  }
  bool in_bounds(const PixelRect& r) const {
    return r.w > 0 && r.h > 0 && r.x >= 0 && r.y >= 0 && r.x + r.w <= width_ &&
           r.y + r.h <= height_;
  }

  // Throws if any value is non-finite or violates the unit convention.
  void validate() const;

  double mean() const;
  double mean(const PixelRect& r) const;
  // Sample standard deviation over a region (N-1 denominator).
  double stddev(const PixelRect& r) const;
  double median(const PixelRect& r) const;

 private:
  std::size_t idx(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  Unit unit_ = Unit::Dimensionless;
  std::vector<double> values_;
};

// Per-pixel boolean companion to an ImageGrid (degeneracy flags etc).
struct PixelMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  PixelMask() = default;
  PixelMask(int w, int h) : width(w), height(h), bits(std::size_t(w) * h, 0) {}

  std::uint8_t& at(int x, int y) { return bits[std::size_t(y) * width + x]; }
  std::uint8_t at(int x, int y) const { return bits[std::size_t(y) * width + x]; }
  std::size_t count() const;
};

void require_same_shape(const ImageGrid& a, const ImageGrid& b,
                        const char* what);

}  // namespace holo
