#include "holo/filters.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace holo {

void FilterConfig::validate() const {
  if (!(lowpass_cutoff > 0.0 && lowpass_cutoff <= 0.5))
    throw DomainError("lowpass_cutoff must lie in (0, 0.5]");
  if (gaussian_sigma < 0.0) throw DomainError("gaussian_sigma must be >= 0");
  if (background) background->validate();
}

ImageGrid subtract_background(const ImageGrid& frame,
                              const ImageGrid& background) {
  require_same_shape(frame, background, "subtract_background");
  ImageGrid out(frame.width(), frame.height(), frame.unit());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::max(frame[i] - background[i], 0.0);
  return out;
}

ImageGrid lowpass_filter(const ImageGrid& frame, double cutoff) {
  if (!(cutoff > 0.0 && cutoff <= 0.5))
    throw DomainError("lowpass cutoff must lie in (0, 0.5]");
  const int w = frame.width();
  const int h = frame.height();
  const int wc = w / 2 + 1;  // r2c packed width

  std::vector<double> real(std::size_t(w) * h);
  std::copy(frame.values().begin(), frame.values().end(), real.begin());
  std::vector<fftw_complex> spec(std::size_t(wc) * h);

  fftw_plan fwd = fftw_plan_dft_r2c_2d(h, w, real.data(), spec.data(),
                                       FFTW_ESTIMATE);
  fftw_execute(fwd);
  fftw_destroy_plan(fwd);

  const double cut2 = cutoff * cutoff;
  for (int ky = 0; ky < h; ++ky) {
    const double fy = (ky <= h / 2 ? ky : ky - h) / double(h);
    for (int kx = 0; kx < wc; ++kx) {
      const double fx = kx / double(w);
      if (fx * fx + fy * fy > cut2) {
        spec[std::size_t(ky) * wc + kx][0] = 0.0;
        spec[std::size_t(ky) * wc + kx][1] = 0.0;
      }
    }
  }

  fftw_plan bwd = fftw_plan_dft_c2r_2d(h, w, spec.data(), real.data(),
                                       FFTW_ESTIMATE);
  fftw_execute(bwd);
  fftw_destroy_plan(bwd);

  const double norm = 1.0 / (double(w) * double(h));
  ImageGrid out(w, h, frame.unit());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = real[i] * norm;
  return out;
}

namespace {

// Edge-including mirror: ..., x[1], x[0] | x[0], x[1], ..., x[n-1] | x[n-1], ...
int reflect(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -1 - i;
    if (i >= n) i = 2 * n - 1 - i;
  }
  return i;
}

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = std::max(1, int(std::ceil(4.0 * sigma)));
  std::vector<double> k(std::size_t(2 * radius + 1));
  double sum = 0.0;
  for (int j = -radius; j <= radius; ++j) {
    const double v = std::exp(-0.5 * (j / sigma) * (j / sigma));
    k[std::size_t(j + radius)] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

}  // namespace

ImageGrid gaussian_smooth(const ImageGrid& frame, double sigma) {
  if (sigma < 0.0) throw DomainError("gaussian sigma must be >= 0");
  if (sigma == 0.0) return frame;
  const int w = frame.width();
  const int h = frame.height();
  const std::vector<double> kernel = gaussian_kernel(sigma);
  const int radius = (int(kernel.size()) - 1) / 2;

  ImageGrid rows(w, h, frame.unit());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int j = -radius; j <= radius; ++j)
        acc += kernel[std::size_t(j + radius)] * frame.at(reflect(x + j, w), y);
      rows.at(x, y) = acc;
    }

  ImageGrid out(w, h, frame.unit());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int j = -radius; j <= radius; ++j)
        acc += kernel[std::size_t(j + radius)] * rows.at(x, reflect(y + j, h));
      out.at(x, y) = acc;
    }
  return out;
}

ImageGrid filter_frame(const ImageGrid& frame, const FilterConfig& config) {
  config.validate();
  ImageGrid cur = config.background
                      ? subtract_background(frame, *config.background)
                      : frame;
  if (config.enabled) {
    cur = lowpass_filter(cur, config.lowpass_cutoff);
    cur = gaussian_smooth(cur, config.gaussian_sigma);
  }
  return cur;
}

}  // namespace holo
