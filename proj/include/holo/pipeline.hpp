#pragma once

#include <cstddef>
#include <optional>

#include "holo/filters.hpp"
#include "holo/types.hpp"

namespace holo {

// Referenced hologram: object phase with the interferometer phase and
// unwrapping piston removed, and modulation normalized by the empty
// interferometer.
struct HologramResult {
  ImageGrid absolute_phase;  // radians
  ImageGrid transmission;    // object modulation / reference modulation
  Reconstruction reconstruction_object;
  Reconstruction reconstruction_reference;
  PixelMask transmission_flagged;  // reference modulation degenerate or zero
  std::size_t residue_count_object = 0;
  std::size_t residue_count_reference = 0;
};

// Equally spaced subset of a canonical 12-step stack, keeping frame 0:
// m_target 12 -> all, 6 -> every 2nd, 4 -> every 3rd, 3 -> every 4th.
FrameStack subset_frames(const FrameStack& stack, int m_target);

// Applies the background -> low-pass -> Gaussian chain to every frame.
FrameStack filter_stack(const FrameStack& stack, const FilterConfig& config);

// Full chain: filter both stacks, reconstruct both, unwrap both phases,
// subtract reference from object, re-center so the background region's
// median is zero (default region: the 10-px frame border), and normalize
// modulation by the reference.
HologramResult reconstruct_hologram(
    const FrameStack& object_stack, const FrameStack& reference_stack,
    const FilterConfig& filters,
    const std::optional<PixelRect>& recenter_region = std::nullopt);

// Median over a frame-shaped border ring of the given width.
double border_median(const ImageGrid& grid, int border);

}  // namespace holo
