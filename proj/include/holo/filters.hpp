#pragma once

#include <optional>

#include "holo/grid.hpp"

namespace holo {

// Image-cleanup settings applied frame by frame before reconstruction.
struct FilterConfig {
  double lowpass_cutoff = 0.15;  // cycles/pixel, in (0, 0.5]
  double gaussian_sigma = 1.5;   // pixels, >= 0
  std::optional<ImageGrid> background;
  bool enabled = true;  // false skips lowpass + gaussian (background still applies)

  void validate() const;
};

// max(frame - background, 0), per pixel.
ImageGrid subtract_background(const ImageGrid& frame,
                              const ImageGrid& background);

// 2D FFT, zero all components with radial frequency > cutoff (cycles/px),
// inverse transform. DC is always kept, so the image mean is preserved.
ImageGrid lowpass_filter(const ImageGrid& frame, double cutoff);

// Convolution with a normalized Gaussian truncated at 4 sigma, applied
// separably with symmetric (edge-including) reflection at the borders.
// That padding makes a symmetric kernel conserve the image sum exactly.
// sigma = 0 is the identity.
ImageGrid gaussian_smooth(const ImageGrid& frame, double sigma);

// Full chain in fixed order: background -> low-pass -> Gaussian.
ImageGrid filter_frame(const ImageGrid& frame, const FilterConfig& config);

}  // namespace holo
