#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "holo/config.hpp"

namespace holo {

// Derived measurement regions for the configured object. Explicit entries
// in the config win; these are the fallbacks.
struct MeasurementRegions {
  PixelRect region_in;   // on a phase feature
  PixelRect region_out;  // feature-free
  PixelRect flat;        // feature-free, used for noise/SNR statistics
  std::vector<PixelRect> od_regions;
};

MeasurementRegions derive_regions(const RunConfig& config);

// Writes manifest.json, object/ and reference/ frame stacks, a background
// recording, and the ground-truth (PSF-blurred) object maps.
void cmd_simulate(const RunConfig& config,
                  const std::filesystem::path& out_dir);

// Reads two stack directories, optionally subsets 12 -> m, runs the filter
// and reconstruction chain, and writes phase/transmission maps, masks and
// a metrics report. A background recording found next to the object stack
// is subtracted.
void cmd_reconstruct(const RunConfig& config,
                     const std::filesystem::path& object_stack_dir,
                     const std::filesystem::path& reference_stack_dir,
                     const std::filesystem::path& out_dir,
                     std::optional<int> subset_m);

// Self-contained simulation studies; subcommand is one of phase-step,
// resolution, noise, od-sweep, snr.
void cmd_analyze(const RunConfig& config, const std::string& subcommand,
                 const std::filesystem::path& out_dir);

}  // namespace holo
