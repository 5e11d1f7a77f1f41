#pragma once

#include <cstdint>

#include "holo/types.hpp"

namespace holo {

// Detector model. Counts are integer ADU in [0, 65535] when noise is on;
// with noise_enabled = false frames carry the real-valued expected counts.
struct CameraSpec {
  double exposure = 1.0;          // seconds
  double read_noise_sigma = 2.0;  // photons RMS, Gaussian, added post-Poisson
  double dark_background = 50.0;  // photons / pixel / second
  std::uint64_t seed = 0;
  bool noise_enabled = true;

  void validate() const;
};

// One frame per schedule step. Expected counts are signal_rate x exposure;
// each pixel draws from its own stream keyed by (seed, step, pixel index),
// so identical seeds reproduce identical stacks bit-exactly regardless of
// evaluation order. Expected counts above 65535 raise a range error.
FrameStack simulate_stack(const ComplexObject& object,
                          const InterferometerModel& model,
                          const PhaseStepSchedule& schedule,
                          const CameraSpec& camera);

// Object- and pump-free recording: dark counts plus read noise.
ImageGrid simulate_background(const CameraSpec& camera, int width, int height);

}  // namespace holo
