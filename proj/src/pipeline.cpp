#include "holo/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "holo/core.hpp"
#include "holo/unwrap.hpp"

namespace holo {

FrameStack subset_frames(const FrameStack& stack, int m_target) {
  if (stack.schedule.size() != 12 || !stack.schedule.is_canonical())
    throw ScheduleError("subset_frames needs a canonical 12-step stack");
  if (m_target < 3 || 12 % m_target != 0)
    throw SubsetError("subset target must be one of 3, 4, 6, 12");
  const int stride = 12 / m_target;
  std::vector<ImageGrid> frames;
  frames.reserve(std::size_t(m_target));
  for (int k = 0; k < m_target; ++k)
    frames.push_back(stack.frames[std::size_t(k * stride)]);
  return FrameStack(PhaseStepSchedule::canonical(m_target), std::move(frames),
                    stack.exposure);
}

FrameStack filter_stack(const FrameStack& stack, const FilterConfig& config) {
  std::vector<ImageGrid> frames;
  frames.reserve(stack.frames.size());
  for (const auto& f : stack.frames) frames.push_back(filter_frame(f, config));
  return FrameStack(stack.schedule, std::move(frames), stack.exposure);
}

double border_median(const ImageGrid& grid, int border) {
  const int w = grid.width();
  const int h = grid.height();
  const int b = std::max(1, std::min({border, (w + 1) / 2, (h + 1) / 2}));
  std::vector<double> ring;
  ring.reserve(std::size_t(2 * b) * std::size_t(w + h));
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (x < b || x >= w - b || y < b || y >= h - b)
        ring.push_back(grid.at(x, y));
  const std::size_t n = ring.size();
  std::nth_element(ring.begin(), ring.begin() + n / 2, ring.end());
  double hi = ring[n / 2];
  if (n % 2 == 1) return hi;
  std::nth_element(ring.begin(), ring.begin() + n / 2 - 1, ring.begin() + n / 2);
  return 0.5 * (ring[n / 2 - 1] + hi);
}

HologramResult reconstruct_hologram(
    const FrameStack& object_stack, const FrameStack& reference_stack,
    const FilterConfig& filters,
    const std::optional<PixelRect>& recenter_region) {
  if (!(object_stack.schedule == reference_stack.schedule))
    throw ScheduleError("object and reference schedules differ");
  require_same_shape(object_stack.frames.front(),
                     reference_stack.frames.front(), "reconstruct_hologram");

  const FrameStack obj = filter_stack(object_stack, filters);
  const FrameStack ref = filter_stack(reference_stack, filters);

  HologramResult result;
  result.reconstruction_object = reconstruct_general(obj);
  result.reconstruction_reference = reconstruct_general(ref);

  Reconstruction& ro = result.reconstruction_object;
  Reconstruction& rr = result.reconstruction_reference;

  UnwrapResult uo = unwrap_phase(ro.wrapped_phase, &ro.degenerate_mask);
  UnwrapResult ur = unwrap_phase(rr.wrapped_phase, &rr.degenerate_mask);
  result.residue_count_object = uo.residue_count;
  result.residue_count_reference = ur.residue_count;

  const int w = ro.wrapped_phase.width();
  const int h = ro.wrapped_phase.height();
  ImageGrid abs_phase(w, h, Unit::Radians);
  for (std::size_t i = 0; i < abs_phase.size(); ++i)
    abs_phase[i] = uo.unwrapped[i] - ur.unwrapped[i];
  const double piston = recenter_region
                            ? abs_phase.median(*recenter_region)
                            : border_median(abs_phase, 10);
  for (double& v : abs_phase.values()) v -= piston;

  ImageGrid transmission(w, h, Unit::Dimensionless);
  PixelMask flagged(w, h);
  for (std::size_t i = 0; i < transmission.size(); ++i) {
    const bool bad = rr.degenerate_mask.bits[i] != 0 || rr.modulation[i] <= 0.0;
    if (bad) {
      flagged.bits[i] = 1;
      transmission[i] = 0.0;
    } else {
      transmission[i] = ro.modulation[i] / rr.modulation[i];
    }
  }

  ro.unwrapped_phase = std::move(uo.unwrapped);
  rr.unwrapped_phase = std::move(ur.unwrapped);
  result.absolute_phase = std::move(abs_phase);
  result.transmission = std::move(transmission);
  result.transmission_flagged = std::move(flagged);
  return result;
}

}  // namespace holo
