#include "holo/camera.hpp"

#include <algorithm>
#include <cmath>

#include "holo/core.hpp"
#include "holo/random.hpp"

namespace holo {

namespace {
constexpr double kMaxCount = 65535.0;
// Stream slot for the background frame; frame slots are the step indices.
constexpr std::uint64_t kBackgroundSlot = 0xFFFF;

double sample_count(Rng& rng, double lambda, double read_noise) {
  double v = double(rng.poisson(lambda));
  if (read_noise > 0.0) v += read_noise * rng.normal();
  v = std::round(v);
  return std::clamp(v, 0.0, kMaxCount);
}
}  // namespace

void CameraSpec::validate() const {
  if (exposure <= 0.0) throw DomainError("exposure must be positive");
  if (read_noise_sigma < 0.0) throw DomainError("read noise must be >= 0");
  if (dark_background < 0.0) throw DomainError("dark background must be >= 0");
}

FrameStack simulate_stack(const ComplexObject& object,
                          const InterferometerModel& model,
                          const PhaseStepSchedule& schedule,
                          const CameraSpec& camera) {
  camera.validate();
  if (!schedule.is_canonical())
    throw ScheduleError("simulate_stack needs a canonical schedule");

  std::vector<ImageGrid> frames;
  frames.reserve(std::size_t(schedule.size()));
  for (int m = 0; m < schedule.size(); ++m) {
    const ImageGrid rate = signal_rate(object, model, schedule.step(m));
    ImageGrid frame(rate.width(), rate.height(), Unit::Photons);
    for (std::size_t i = 0; i < frame.size(); ++i) {
      const double lambda = rate[i] * camera.exposure;
      if (lambda > kMaxCount)
        throw RangeError("expected counts exceed the 16-bit frame range");
      if (camera.noise_enabled) {
        Rng rng(substream(camera.seed, std::uint64_t(m), i));
        frame[i] = sample_count(rng, lambda, camera.read_noise_sigma);
      } else {
        frame[i] = lambda;
      }
    }
    frames.push_back(std::move(frame));
  }
  return FrameStack(schedule, std::move(frames), camera.exposure);
}

ImageGrid simulate_background(const CameraSpec& camera, int width, int height) {
  camera.validate();
  ImageGrid frame(width, height, Unit::Photons);
  const double lambda = camera.dark_background * camera.exposure;
  if (lambda > kMaxCount)
    throw RangeError("expected background exceeds the 16-bit frame range");
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (camera.noise_enabled) {
      Rng rng(substream(camera.seed, kBackgroundSlot, i));
      frame[i] = sample_count(rng, lambda, camera.read_noise_sigma);
    } else {
      frame[i] = lambda;
    }
  }
  return frame;
}

}  // namespace holo
