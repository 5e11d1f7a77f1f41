#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "holo/types.hpp"

namespace holo {

// Photon-count frames: binary 16-bit PGM (P5, maxval 65535, big-endian
// samples). Values must be integers in [0, 65535].
void write_pgm16(const std::filesystem::path& path, const ImageGrid& grid);
ImageGrid read_pgm16(const std::filesystem::path& path);

// Masks: binary 8-bit PGM, 0 or 255.
void write_mask_pgm(const std::filesystem::path& path, const PixelMask& mask);
PixelMask read_mask_pgm(const std::filesystem::path& path);

// Real-valued maps: small text header followed by little-endian float32
// samples. Used for phase/transmission maps and noiseless frames.
void write_f32(const std::filesystem::path& path, const ImageGrid& grid);
ImageGrid read_f32(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

// A frame stack on disk: frame_00.* ... plus a stack.meta sidecar recording
// exposure, the phase schedule, the seed and the sample format.
void write_stack(const std::filesystem::path& dir, const FrameStack& stack,
                 std::uint64_t seed, bool integer_counts);
FrameStack read_stack(const std::filesystem::path& dir);

}  // namespace holo
