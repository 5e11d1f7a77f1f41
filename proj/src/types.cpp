#include "holo/types.hpp"

#include <cmath>
#include <numbers>

namespace holo {

void ComplexObject::validate() const {
  require_same_shape(transmission, phase, "ComplexObject");
  transmission.validate();
  phase.validate();
  for (double t : transmission.values())
    if (t < 0.0 || t > 1.0)
      throw DomainError("object transmission outside [0, 1]");
  if (pixel_pitch <= 0.0) throw DomainError("pixel_pitch must be positive");
}

void InterferometerModel::validate() const {
  nu.validate();
  if (visibility < 0.0 || visibility > 1.0)
    throw DomainError("visibility outside [0, 1]");
  if (mean_flux < 0.0) throw DomainError("mean_flux must be >= 0");
  if (background_rate < 0.0) throw DomainError("background_rate must be >= 0");
  if (psf_sigma < 0.0) throw DomainError("psf_sigma must be >= 0");
}

namespace {

bool steps_are_canonical(const std::vector<double>& steps) {
  const int m_count = static_cast<int>(steps.size());
  for (int m = 0; m < m_count; ++m) {
    const double want = 2.0 * std::numbers::pi * m / m_count;
    if (std::abs(steps[std::size_t(m)] - want) > 1e-12) return false;
  }
  return true;
}

}  // namespace

PhaseStepSchedule::PhaseStepSchedule(std::vector<double> steps)
    : steps_(std::move(steps)) {
  if (steps_.size() < 3)
    throw ScheduleError("phase schedule needs at least 3 steps");
  for (double s : steps_)
    if (!std::isfinite(s)) throw ScheduleError("non-finite phase step");
  canonical_ = steps_are_canonical(steps_);
}

PhaseStepSchedule PhaseStepSchedule::canonical(int m) {
  if (m < 3) throw ScheduleError("canonical schedule needs M >= 3");
  std::vector<double> steps(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < m; ++i)
    steps[std::size_t(i)] = 2.0 * std::numbers::pi * i / m;
  return PhaseStepSchedule(std::move(steps));
}

FrameStack::FrameStack(PhaseStepSchedule sched, std::vector<ImageGrid> fr,
                       double expo)
    : schedule(std::move(sched)), frames(std::move(fr)), exposure(expo) {
  if (frames.size() != std::size_t(schedule.size()))
    throw ShapeError("frame count does not match schedule length");
  for (const auto& f : frames)
    require_same_shape(frames.front(), f, "FrameStack");
  if (exposure <= 0.0) throw DomainError("exposure must be positive");
}

void FrameStack::validate() const {
  for (const auto& f : frames) f.validate();
}

}  // namespace holo
