#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "holo/camera.hpp"
#include "holo/filters.hpp"
#include "holo/objects.hpp"

namespace holo {

// Interferometer phase texture: zero or a tilt-plus-bump surface.
struct NuSpec {
  bool zero = false;
  double tilt_x = 0.010;  // rad / px
  double tilt_y = 0.006;
  double bump_amplitude = 1.0;  // rad
  double bump_sigma_frac = 0.3;
};

struct AnalysisConfig {
  std::vector<double> exposures{0.1, 0.2, 0.5, 1.0};
  std::vector<int> m_values{3, 4, 6, 12};
  int n_sets = 15;
  std::vector<double> od_values{0.0, 0.1, 0.2, 0.3, 0.4};
  std::vector<PixelRect> od_regions;  // empty -> derived from the grid
  std::optional<PixelRect> region_in;   // defaults depend on the object kind
  std::optional<PixelRect> region_out;
  std::optional<PixelRect> flat_region;
};

// Everything a run needs; all randomness flows from the single seed.
struct RunConfig {
  std::uint64_t seed = 1;
  ObjectSpec object;
  NuSpec nu;
  double visibility = 0.35;
  double mean_flux = 2000.0;      // photons / px / s
  double background_rate = 50.0;  // photons / px / s
  double psf_sigma = 52e-6;       // meters at object plane
  double exposure = 0.5;          // seconds
  double read_noise = 2.0;        // photons RMS
  bool noise = true;
  int m = 12;                     // schedule length for simulation
  FilterConfig filters;
  AnalysisConfig analysis;

  RunConfig();
  void validate() const;
};

RunConfig parse_config(const std::string& json_text,
                       const std::string& origin);
RunConfig load_config_file(const std::filesystem::path& path);

// Expanded configuration plus derived per-stack seeds, serialized
// deterministically; feeding it back through load_config_file reproduces
// the run byte for byte.
std::string manifest_json(const RunConfig& config);

InterferometerModel build_model(const RunConfig& config);
CameraSpec build_camera(const RunConfig& config, std::uint64_t stack_seed);

// Stack-seed slots derived from the master seed.
std::uint64_t object_stack_seed(const RunConfig& config);
std::uint64_t reference_stack_seed(const RunConfig& config);
std::uint64_t background_seed(const RunConfig& config);

}  // namespace holo
