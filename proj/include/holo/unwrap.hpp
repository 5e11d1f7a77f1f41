#pragma once

#include <cstddef>
#include <optional>

#include "holo/grid.hpp"

namespace holo {

struct UnwrapResult {
  ImageGrid unwrapped;     // wrapped + 2*pi*k per pixel
  PixelMask filled;        // pixels that were masked and back-filled
  std::size_t residue_count = 0;  // nonzero 2x2 loop integrals in the input
};

// Reliability-sorted region-growing unwrapper. Pixel reliability is the
// negated sum of squared wrapped second differences (horizontal, vertical,
// both diagonals, borders mirrored); edges carry the sum of their endpoint
// reliabilities and are merged most-reliable-first with a union-find that
// tracks per-group 2*pi offsets. Masked pixels are excluded from the
// growing, filled afterwards from their nearest unwrapped neighbours, and
// flagged. Deterministic: ties in reliability break by edge index.
UnwrapResult unwrap_phase(const ImageGrid& wrapped,
                          const PixelMask* mask = nullptr);

}  // namespace holo
