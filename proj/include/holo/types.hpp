#pragma once

#include <optional>
#include <vector>

#include "holo/grid.hpp"

namespace holo {

// Object complex transmission tau = t * exp(i*theta).
struct ComplexObject {
  ImageGrid transmission;  // dimensionless, t in [0,1]
  ImageGrid phase;         // radians
  double pixel_pitch = 0.0;  // meters per pixel at object plane

  void validate() const;
};

// Interferometer state seen by the signal arm. The empty-interferometer
// visibility times the object transmission sets the fringe modulation.
struct InterferometerModel {
  ImageGrid nu;             // radians, spatially varying interferometer phase
  double visibility = 1.0;  // in [0,1]
  double mean_flux = 0.0;   // photons / pixel / second
  double background_rate = 0.0;  // photons / pixel / second
  double psf_sigma = 0.0;   // meters, Gaussian PSF at object plane

  void validate() const;
};

// Global phase steps applied per frame. Reconstruction requires the
// canonical equally-spaced schedule dphi_m = 2*pi*m/M.
class PhaseStepSchedule {
 public:
  explicit PhaseStepSchedule(std::vector<double> steps);
  static PhaseStepSchedule canonical(int m);

  int size() const { return static_cast<int>(steps_.size()); }
  double step(int m) const { return steps_[std::size_t(m)]; }
  const std::vector<double>& steps() const { return steps_; }
  bool is_canonical() const { return canonical_; }

  bool operator==(const PhaseStepSchedule& o) const {
    return steps_ == o.steps_;
  }

 private:
  std::vector<double> steps_;
  bool canonical_ = false;
};

// M photon-count frames sharing a schedule and exposure.
struct FrameStack {
  PhaseStepSchedule schedule;
  std::vector<ImageGrid> frames;
  double exposure = 0.0;  // seconds

  FrameStack(PhaseStepSchedule sched, std::vector<ImageGrid> fr, double expo);

  int width() const { return frames.front().width(); }
  int height() const { return frames.front().height(); }
  // Checks the photons unit convention on every frame.
  void validate() const;
};

// Output of the per-pixel phase-shifting inversion.
struct Reconstruction {
  ImageGrid wrapped_phase;                 // radians, (-pi, pi]
  std::optional<ImageGrid> unwrapped_phase;  // radians, filled by pipeline
  ImageGrid modulation;                    // dimensionless, >= 0
  ImageGrid mean_intensity;                // photons
  PixelMask degenerate_mask;               // denominator below threshold
  PixelMask overmodulated_mask;            // modulation > 1.5 (quality flag)
};

}  // namespace holo
