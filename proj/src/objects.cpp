#include "holo/objects.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "holo/core.hpp"
#include "holo/filters.hpp"

namespace holo {

namespace {
constexpr double kPi = std::numbers::pi;

// The five bar frequencies of the miniaturized target, lp/mm.
constexpr double kBarFrequencies[5] = {5.0, 5.6, 6.3, 7.1, 8.0};

double bar_width_px(double frequency_lp_mm, double pixel_pitch_m) {
  const double lp_mm = 1.0 / frequency_lp_mm;
  return (lp_mm / 2.0) * 1e-3 / pixel_pitch_m;
}
}  // namespace

double od_transmission_factor(double od, OdConvention convention) {
  if (od < 0.0) throw DomainError("optical density must be >= 0");
  const double exponent =
      convention == OdConvention::Amplitude ? -od / 2.0 : -od;
  return std::pow(10.0, exponent);
}

ComplexObject apply_od(const ComplexObject& object, double od,
                       OdConvention convention,
                       const std::optional<PixelRect>& region) {
  const double factor = od_transmission_factor(od, convention);
  ComplexObject out = object;
  if (!region) {
    for (double& t : out.transmission.values()) t *= factor;
    return out;
  }
  if (!out.transmission.in_bounds(*region))
    throw RegionError("od region outside object grid");
  for (int y = region->y; y < region->y + region->h; ++y)
    for (int x = region->x; x < region->x + region->w; ++x)
      out.transmission.at(x, y) *= factor;
  return out;
}

UsafLayout usaf_layout(const GridSpec& grid) {
  if (grid.width < 64 || grid.height < 64)
    throw GeometryError("usaf target needs a grid of at least 64x64");
  if (grid.pixel_pitch <= 0.0)
    throw GeometryError("usaf target needs a positive pixel pitch");

  double widths[5];
  int spans[5];
  for (int i = 0; i < 5; ++i) {
    widths[i] = bar_width_px(kBarFrequencies[i], grid.pixel_pitch);
    if (widths[i] < 2.0) {
      char msg[96];
      std::snprintf(msg, sizeof msg,
                    "usaf group %.1f lp/mm: bar width %.2f px below the 2 px minimum",
                    kBarFrequencies[i], widths[i]);
      throw ResolutionError(msg);
    }
    spans[i] = int(std::ceil(5.0 * widths[i]));
  }

  const int margin = std::max(4, std::min(grid.width, grid.height) / 25);
  const int rowgap = std::max(3, margin / 2);
  const int colw = spans[0];

  UsafLayout layout;
  const int x_v = margin;
  const int x_h = x_v + colw + margin;
  const int x_patch = x_h + colw + margin;

  int y = margin;
  for (int i = 0; i < 5; ++i) {
    BarGroupSpec v;
    v.frequency = kBarFrequencies[i];
    v.line_pair_mm = 1.0 / v.frequency;
    v.orientation = Orientation::Vertical;
    v.bar_width_px = widths[i];
    v.position = {x_v, y, spans[i], spans[i]};
    BarGroupSpec hgrp = v;
    hgrp.orientation = Orientation::Horizontal;
    hgrp.position.x = x_h;
    layout.groups.push_back(v);
    layout.groups.push_back(hgrp);
    y += spans[i] + rowgap;
  }
  if (y - rowgap + margin > grid.height ||
      x_patch + margin >= grid.width)
    throw GeometryError("grid too small for the usaf layout at this pitch");

  int patch = std::min(2 * colw, grid.width - margin - x_patch);
  patch = std::min(patch, grid.height - 2 * margin);
  if (patch < 8) throw GeometryError("no room for the usaf step patch");
  layout.step_patch = {x_patch, margin, patch, patch};

  const int fy = margin + patch + rowgap;
  const int fh = grid.height - margin - fy;
  const int fw = grid.width - margin - x_patch;
  layout.flat_region = (fh > 0 && fw > 0) ? PixelRect{x_patch, fy, fw, fh}
                                          : PixelRect{0, 0, 0, 0};
  return layout;
}

namespace {

void paint_rect(ImageGrid& phase, const PixelRect& r, double value) {
  for (int y = r.y; y < r.y + r.h; ++y)
    for (int x = r.x; x < r.x + r.w; ++x) phase.at(x, y) = value;
}

// Three bars with two gaps, anchored at the integer corner of the group
// rect; geometry is fractional, pixels are classified by their centers.
void paint_bars(ImageGrid& phase, const BarGroupSpec& group, double value) {
  const double w = group.bar_width_px;
  const double span = 5.0 * w;
  const PixelRect& r = group.position;
  for (int y = r.y; y < r.y + r.h; ++y)
    for (int x = r.x; x < r.x + r.w; ++x) {
      const double cx = x + 0.5 - r.x;
      const double cy = y + 0.5 - r.y;
      const double along = group.orientation == Orientation::Vertical ? cx : cy;
      const double across = group.orientation == Orientation::Vertical ? cy : cx;
      if (along < 0.0 || along >= span || across < 0.0 || across >= span)
        continue;
      if (int(std::floor(along / w)) % 2 == 0) phase.at(x, y) = value;
    }
}

void paint_disk(ImageGrid& phase, double cx, double cy, double radius,
                double value) {
  const int x0 = std::max(0, int(std::floor(cx - radius)));
  const int x1 = std::min(phase.width() - 1, int(std::ceil(cx + radius)));
  const int y0 = std::max(0, int(std::floor(cy - radius)));
  const int y1 = std::min(phase.height() - 1, int(std::ceil(cy + radius)));
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      const double dx = x + 0.5 - cx;
      const double dy = y + 0.5 - cy;
      if (dx * dx + dy * dy <= radius * radius) phase.at(x, y) = value;
    }
}

void paint_happy_face(ImageGrid& phase, double value) {
  const double cx = phase.width() / 2.0;
  const double cy = phase.height() / 2.0;
  const double r = 0.30 * std::min(phase.width(), phase.height());
  paint_disk(phase, cx - 0.40 * r, cy - 0.35 * r, 0.16 * r, value);
  paint_disk(phase, cx + 0.40 * r, cy - 0.35 * r, 0.16 * r, value);
  // Mouth: lower arc band (y grows downward).
  for (int y = 0; y < phase.height(); ++y)
    for (int x = 0; x < phase.width(); ++x) {
      const double dx = x + 0.5 - cx;
      const double dy = y + 0.5 - cy;
      const double rad = std::sqrt(dx * dx + dy * dy);
      if (rad < 0.55 * r || rad > 0.75 * r) continue;
      const double ang = std::atan2(dy, dx) * 180.0 / kPi;
      if (ang >= 20.0 && ang <= 160.0) phase.at(x, y) = value;
    }
}

}  // namespace

ComplexObject make_object(const ObjectSpec& spec) {
  if (spec.grid.width <= 0 || spec.grid.height <= 0)
    throw GeometryError("object grid dimensions must be positive");
  if (spec.grid.pixel_pitch <= 0.0)
    throw GeometryError("object pixel pitch must be positive");
  if (!std::isfinite(spec.phase_step))
    throw DomainError("phase_step must be finite");
  if (spec.base_transmission < 0.0 || spec.base_transmission > 1.0)
    throw DomainError("base_transmission outside [0, 1]");

  ImageGrid phase(spec.grid.width, spec.grid.height, Unit::Radians);
  switch (spec.kind) {
    case ObjectKind::Uniform:
      paint_rect(phase, {0, 0, spec.grid.width, spec.grid.height},
                 spec.phase_step);
      break;
    case ObjectKind::PhaseDisk:
      paint_disk(phase, spec.grid.width / 2.0, spec.grid.height / 2.0,
                 0.25 * std::min(spec.grid.width, spec.grid.height),
                 spec.phase_step);
      break;
    case ObjectKind::HappyFace:
      paint_happy_face(phase, spec.phase_step);
      break;
    case ObjectKind::UsafTarget: {
      const UsafLayout layout = usaf_layout(spec.grid);
      for (const auto& g : layout.groups) paint_bars(phase, g, spec.phase_step);
      paint_rect(phase, layout.step_patch, spec.phase_step);
      break;
    }
  }

  ComplexObject object;
  object.transmission = ImageGrid(spec.grid.width, spec.grid.height,
                                  Unit::Dimensionless, spec.base_transmission);
  object.phase = std::move(phase);
  object.pixel_pitch = spec.grid.pixel_pitch;
  if (spec.od > 0.0)
    object = apply_od(object, spec.od, spec.od_convention, spec.od_region);
  return object;
}

ImageGrid make_nu_map(int width, int height, double tilt_x, double tilt_y,
                      double bump_amplitude, double bump_sigma_frac) {
  ImageGrid nu(width, height, Unit::Radians);
  const double cx = width / 2.0;
  const double cy = height / 2.0;
  const double sigma = bump_sigma_frac * std::min(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const double dx = x + 0.5 - cx;
      const double dy = y + 0.5 - cy;
      const double bump =
          bump_amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      nu.at(x, y) = tilt_x * x + tilt_y * y + bump;
    }
  return nu;
}

double phase_from_height(double height, double refractive_index,
                         double wavelength, int passes) {
  if (wavelength <= 0.0) throw DomainError("wavelength must be positive");
  if (refractive_index <= 1.0)
    throw DomainError("refractive index must exceed 1");
  if (passes < 1) throw DomainError("passes must be >= 1");
  return passes * 2.0 * kPi * (refractive_index - 1.0) * height / wavelength;
}

ComplexObject blur_object(const ComplexObject& object, double psf_sigma) {
  if (psf_sigma < 0.0) throw DomainError("psf sigma must be >= 0");
  if (psf_sigma == 0.0) return object;
  object.validate();

  const int w = object.transmission.width();
  const int h = object.transmission.height();
  ImageGrid re(w, h, Unit::Dimensionless);
  ImageGrid im(w, h, Unit::Dimensionless);
  for (std::size_t i = 0; i < re.size(); ++i) {
    re[i] = object.transmission[i] * std::cos(object.phase[i]);
    im[i] = object.transmission[i] * std::sin(object.phase[i]);
  }
  const double sigma_px = psf_sigma / object.pixel_pitch;
  re = gaussian_smooth(re, sigma_px);
  im = gaussian_smooth(im, sigma_px);

  ComplexObject out;
  out.transmission = ImageGrid(w, h, Unit::Dimensionless);
  out.phase = ImageGrid(w, h, Unit::Radians);
  out.pixel_pitch = object.pixel_pitch;
  for (std::size_t i = 0; i < re.size(); ++i) {
    const double mag = std::hypot(re[i], im[i]);
    out.transmission[i] = std::min(mag, 1.0);
    out.phase[i] = mag > 0.0 ? wrap_phase(std::atan2(im[i], re[i])) : 0.0;
  }
  return out;
}

}  // namespace holo
