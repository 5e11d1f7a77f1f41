#pragma once

#include <vector>

#include "holo/camera.hpp"
#include "holo/objects.hpp"
#include "holo/pipeline.hpp"
#include "holo/types.hpp"

namespace holo {

struct PhaseStepEstimate {
  double mean_step = 0.0;  // radians
  double std = 0.0;        // radians
  PixelRect region_in;
  PixelRect region_out;
  int n_sets = 1;
};

struct ContrastValue {
  double value = 0.0;
  double uncertainty = 0.0;
};

struct ContrastRow {
  double line_pair_mm = 0.0;
  double frequency = 0.0;  // lp/mm
  ContrastValue square_v, square_h;
  ContrastValue sine_v, sine_h;
  bool resolvable_v = false;
  bool resolvable_h = false;
};

struct NoiseReport {
  double exposure = 0.0;  // seconds
  int m_images = 0;
  double phase_noise = 0.0;       // radians, mean over sets of the spatial std
  double phase_noise_std = 0.0;   // std of that spatial std across sets
  double modulation_noise = 0.0;  // spatial std of the object modulation map
  double modulation_noise_std = 0.0;
  int n_sets = 0;
};

struct OdSweepRow {
  double od = 0.0;
  int region_index = 0;
  double relative_modulation = 0.0;
  double std = 0.0;  // spatial std within the region
};

// mean(absolute_phase over region_in) - mean(over region_out); std adds the
// two regions' spatial standard deviations in quadrature.
PhaseStepEstimate estimate_phase_step(const HologramResult& result,
                                      const PixelRect& region_in,
                                      const PixelRect& region_out);

// Combines per-set estimates: mean of means, std across sets.
PhaseStepEstimate aggregate_steps(const std::vector<PhaseStepEstimate>& sets);

// Square-wave (bar) contrast of a normalized profile: the image is averaged
// along the bar axis, divided by expected_step, and sampled on the central
// 30% of each bar and gap; C = (bar - gap)/(bar + gap) clipped below at 0.
// The uncertainty propagates the per-bar and per-gap level scatter.
ContrastValue bar_contrast(const ImageGrid& phase_image,
                           const BarGroupSpec& group, double expected_step);

// Fundamental-order correction from square-wave to sine contrast.
double sine_contrast(double square_contrast);

// A group counts as resolved when its sine contrast reaches 14.2%.
bool rayleigh_resolvable(double sine_contrast_value);

// Contrast table over a full bar layout (pairs vertical/horizontal groups).
std::vector<ContrastRow> resolution_table(const ImageGrid& phase_image,
                                          const UsafLayout& layout,
                                          double expected_step);

// Simulates n_sets independent 12-frame object+reference sets per exposure,
// subsets each to every requested M, reconstructs, and reports the phase and
// modulation noise (spatial std in flat_region: absolute phase for the
// former, the unreferenced object modulation map for the latter).
std::vector<NoiseReport> noise_sweep(const ComplexObject& object,
                                     const InterferometerModel& model,
                                     const std::vector<double>& exposures,
                                     const std::vector<int>& m_values,
                                     int n_sets, const CameraSpec& camera,
                                     const FilterConfig& filters,
                                     const PixelRect& flat_region);

// Phase-step accuracy at one (exposure, M) point, aggregated over n_sets.
PhaseStepEstimate sweep_phase_step(const ComplexObject& object,
                                   const InterferometerModel& model,
                                   double exposure, int m_value, int n_sets,
                                   const CameraSpec& camera,
                                   const FilterConfig& filters,
                                   const PixelRect& region_in,
                                   const PixelRect& region_out);

// Relative modulation vs optical density over the given regions. The OD
// filter is applied across the whole field; each run is referenced against
// an empty interferometer.
std::vector<OdSweepRow> od_sweep(const ComplexObject& base_object,
                                 const std::vector<double>& od_values,
                                 OdConvention convention,
                                 const InterferometerModel& model,
                                 const CameraSpec& camera,
                                 const FilterConfig& filters,
                                 const std::vector<PixelRect>& regions);

// SNR(filtered)/SNR(raw) with SNR = mean/std over flat_region, averaged
// across frames.
double snr_gain(const FrameStack& raw_stack, const FrameStack& filtered_stack,
                const PixelRect& flat_region);

}  // namespace holo
