#include "holo/grid.hpp"

#include <algorithm>
#include <cmath>

namespace holo {

std::string unit_name(Unit u) {
  switch (u) {
    case Unit::Photons: return "photons";
    case Unit::Radians: return "radians";
    case Unit::Dimensionless: return "dimensionless";
  }
  return "unknown";
}

Unit unit_from_name(const std::string& name) {
  if (name == "photons") return Unit::Photons;
  if (name == "radians") return Unit::Radians;
  if (name == "dimensionless") return Unit::Dimensionless;
  throw DomainError("unknown unit name: " + name);
}

ImageGrid::ImageGrid(int width, int height, Unit unit, double fill)
    : width_(width), height_(height), unit_(unit) {
  if (width <= 0 || height <= 0)
    throw ShapeError("ImageGrid dimensions must be positive");
  values_.assign(std::size_t(width) * height, fill);
}

ImageGrid::ImageGrid(int width, int height, Unit unit,
                     std::vector<double> values)
    : width_(width), height_(height), unit_(unit), values_(std::move(values)) {
  if (width <= 0 || height <= 0)
    throw ShapeError("ImageGrid dimensions must be positive");
  if (values_.size() != std::size_t(width) * height)
    throw ShapeError("ImageGrid value count does not match dimensions");
}

void ImageGrid::validate() const {
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("ImageGrid holds non-finite value");
    if (unit_ == Unit::Photons && v < 0.0)
      throw DomainError("photon-count grid holds negative value");
  }
}

double ImageGrid::mean() const {
  if (values_.empty()) return 0.0;
  double s = 0.0;
  for (double v : values_) s += v;
  return s / double(values_.size());
}

double ImageGrid::mean(const PixelRect& r) const {
  if (!in_bounds(r)) throw RegionError("region outside grid");
  double s = 0.0;
  for (int y = r.y; y < r.y + r.h; ++y)
    for (int x = r.x; x < r.x + r.w; ++x) s += at(x, y);
  return s / double(r.area());
}

double ImageGrid::stddev(const PixelRect& r) const {
  if (!in_bounds(r)) throw RegionError("region outside grid");
  if (r.area() < 2) throw RegionError("stddev needs at least two pixels");
  const double m = mean(r);
  double ss = 0.0;
  for (int y = r.y; y < r.y + r.h; ++y)
    for (int x = r.x; x < r.x + r.w; ++x) {
      const double d = at(x, y) - m;
      ss += d * d;
    }
  return std::sqrt(ss / double(r.area() - 1));
}

double ImageGrid::median(const PixelRect& r) const {
  if (!in_bounds(r)) throw RegionError("region outside grid");
  std::vector<double> v;
  v.reserve(std::size_t(r.area()));
  for (int y = r.y; y < r.y + r.h; ++y)
    for (int x = r.x; x < r.x + r.w; ++x) v.push_back(at(x, y));
  const std::size_t n = v.size();
  std::nth_element(v.begin(), v.begin() + n / 2, v.end());
  double hi = v[n / 2];
  if (n % 2 == 1) return hi;
  std::nth_element(v.begin(), v.begin() + n / 2 - 1, v.begin() + n / 2);
  return 0.5 * (v[n / 2 - 1] + hi);
}

std::size_t PixelMask::count() const {
  std::size_t n = 0;
  for (auto b : bits) n += (b != 0);
  return n;
}

void require_same_shape(const ImageGrid& a, const ImageGrid& b,
                        const char* what) {
  if (!a.same_shape(b))
    throw ShapeError(std::string(what) + ": shape mismatch");
}

}  // namespace holo
