#include "holo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "holo/random.hpp"

namespace holo {

namespace {
constexpr double kQuarterPi = std::numbers::pi / 4.0;
constexpr double kRayleighThreshold = 0.142;

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = 0.0;
  for (double x : v) m += x;
  m /= double(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / double(v.size() - 1));
}

double mean_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  return v.empty() ? 0.0 : m / double(v.size());
}

ComplexObject empty_reference(const ComplexObject& object) {
  ComplexObject ref;
  const int w = object.transmission.width();
  const int h = object.transmission.height();
  ref.transmission = ImageGrid(w, h, Unit::Dimensionless, 1.0);
  ref.phase = ImageGrid(w, h, Unit::Radians, 0.0);
  ref.pixel_pitch = object.pixel_pitch;
  return ref;
}

// One simulated experiment: object + reference 12-frame stacks and a
// background recording, already background-filtered per the chain config.
struct SimulatedSet {
  FrameStack object_stack;
  FrameStack reference_stack;
};

SimulatedSet simulate_set(const ComplexObject& object,
                          const InterferometerModel& model, double exposure,
                          const CameraSpec& camera, std::uint64_t base_seed,
                          const FilterConfig& filters, int m_base = 12) {
  CameraSpec cam = camera;
  cam.exposure = exposure;
  const PhaseStepSchedule schedule = PhaseStepSchedule::canonical(m_base);

  cam.seed = substream(base_seed, 1);
  FrameStack obj = simulate_stack(object, model, schedule, cam);
  cam.seed = substream(base_seed, 2);
  FrameStack ref = simulate_stack(empty_reference(object), model, schedule, cam);

  FilterConfig chain = filters;
  if (model.background_rate > 0.0) {
    CameraSpec bg_cam = cam;
    bg_cam.seed = substream(base_seed, 3);
    bg_cam.dark_background = model.background_rate;
    chain.background =
        simulate_background(bg_cam, obj.width(), obj.height());
  }
  return SimulatedSet{filter_stack(obj, chain), filter_stack(ref, chain)};
}

FilterConfig passthrough_filters() {
  FilterConfig f;
  f.enabled = false;
  return f;
}

}  // namespace

PhaseStepEstimate estimate_phase_step(const HologramResult& result,
                                      const PixelRect& region_in,
                                      const PixelRect& region_out) {
  const ImageGrid& phase = result.absolute_phase;
  if (!phase.in_bounds(region_in) || !phase.in_bounds(region_out))
    throw RegionError("phase-step region outside image");
  if (region_in.area() < 25 || region_out.area() < 25)
    throw RegionError("phase-step regions need at least 25 px");
  if (region_in.overlaps(region_out))
    throw RegionError("phase-step regions overlap");

  PhaseStepEstimate est;
  est.region_in = region_in;
  est.region_out = region_out;
  est.mean_step = phase.mean(region_in) - phase.mean(region_out);
  est.std = std::hypot(phase.stddev(region_in), phase.stddev(region_out));
  est.n_sets = 1;
  return est;
}

PhaseStepEstimate aggregate_steps(const std::vector<PhaseStepEstimate>& sets) {
  if (sets.empty()) throw DomainError("no phase-step estimates to aggregate");
  std::vector<double> means;
  means.reserve(sets.size());
  for (const auto& s : sets) means.push_back(s.mean_step);
  PhaseStepEstimate out = sets.front();
  out.mean_step = mean_of(means);
  out.std = sets.size() > 1 ? sample_std(means) : sets.front().std;
  out.n_sets = int(sets.size());
  return out;
}

ContrastValue bar_contrast(const ImageGrid& phase_image,
                           const BarGroupSpec& group, double expected_step) {
  if (expected_step == 0.0)
    throw DomainError("bar_contrast needs a nonzero expected step");
  const PixelRect& r = group.position;
  if (!phase_image.in_bounds(r))
    throw RegionError("bar group rectangle outside image");

  const bool vertical = group.orientation == Orientation::Vertical;
  const double w = group.bar_width_px;
  const double span = 5.0 * w;
  const int len_along = vertical ? r.w : r.h;

  // Average along the bar axis over the central 60% of the bar length.
  const double a_lo = 0.2 * span;
  const double a_hi = 0.8 * span;
  std::vector<double> profile(std::size_t(len_along), 0.0);
  std::vector<int> counts(std::size_t(len_along), 0);
  for (int y = r.y; y < r.y + r.h; ++y)
    for (int x = r.x; x < r.x + r.w; ++x) {
      const double across = (vertical ? y - r.y : x - r.x) + 0.5;
      if (across < a_lo || across > a_hi) continue;
      const int i = vertical ? x - r.x : y - r.y;
      profile[std::size_t(i)] += phase_image.at(x, y) / expected_step;
      counts[std::size_t(i)] += 1;
    }
  for (std::size_t i = 0; i < profile.size(); ++i)
    if (counts[i] > 0) profile[i] /= counts[i];

  // Level at the central 30% of a bar or gap; nearest sample if the window
  // is narrower than a pixel.
  auto level_at = [&](double center, double* out) {
    double acc = 0.0;
    int n = 0;
    for (int i = 0; i < len_along; ++i) {
      const double a = i + 0.5;
      if (a >= center - 0.15 * w && a <= center + 0.15 * w && counts[i] > 0) {
        acc += profile[std::size_t(i)];
        ++n;
      }
    }
    if (n == 0) {
      const int i = int(std::lround(center - 0.5));
      if (i < 0 || i >= len_along || counts[i] == 0) return false;
      acc = profile[std::size_t(i)];
      n = 1;
    }
    *out = acc / n;
    return true;
  };

  std::vector<double> bars, gaps;
  for (int k = 0; k < 3; ++k) {
    double lv;
    if (level_at((2 * k + 0.5) * w, &lv)) bars.push_back(lv);
  }
  for (int j = 0; j < 2; ++j) {
    double lv;
    if (level_at((2 * j + 1.5) * w, &lv)) gaps.push_back(lv);
  }
  if (bars.size() < 3 || gaps.size() < 2)
    throw GeometryError("fewer than 3 bars detected in group rectangle");

  const double b = mean_of(bars);
  const double g = mean_of(gaps);
  const double denom = b + g;
  if (!(denom > 1e-12)) return {0.0, 0.0};

  ContrastValue out;
  out.value = std::max((b - g) / denom, 0.0);
  const double sb = sample_std(bars) / std::sqrt(3.0);
  const double sg = sample_std(gaps) / std::sqrt(2.0);
  const double db = 2.0 * g / (denom * denom);
  const double dg = 2.0 * b / (denom * denom);
  out.uncertainty = std::hypot(db * sb, dg * sg);
  return out;
}

double sine_contrast(double square_contrast) {
  if (square_contrast < 0.0)
    throw DomainError("square contrast must be >= 0");
  return square_contrast * kQuarterPi;
}

bool rayleigh_resolvable(double sine_contrast_value) {
  if (sine_contrast_value < 0.0)
    throw DomainError("sine contrast must be >= 0");
  return sine_contrast_value >= kRayleighThreshold;
}

std::vector<ContrastRow> resolution_table(const ImageGrid& phase_image,
                                          const UsafLayout& layout,
                                          double expected_step) {
  std::vector<ContrastRow> rows;
  for (const auto& g : layout.groups) {
    ContrastRow* row = nullptr;
    for (auto& r : rows)
      if (r.frequency == g.frequency) row = &r;
    if (!row) {
      rows.push_back({});
      row = &rows.back();
      row->frequency = g.frequency;
      row->line_pair_mm = g.line_pair_mm;
    }
    const ContrastValue c = bar_contrast(phase_image, g, expected_step);
    ContrastValue s{sine_contrast(c.value), c.uncertainty * kQuarterPi};
    if (g.orientation == Orientation::Vertical) {
      row->square_v = c;
      row->sine_v = s;
      row->resolvable_v = rayleigh_resolvable(s.value);
    } else {
      row->square_h = c;
      row->sine_h = s;
      row->resolvable_h = rayleigh_resolvable(s.value);
    }
  }
  return rows;
}

std::vector<NoiseReport> noise_sweep(const ComplexObject& object,
                                     const InterferometerModel& model,
                                     const std::vector<double>& exposures,
                                     const std::vector<int>& m_values,
                                     int n_sets, const CameraSpec& camera,
                                     const FilterConfig& filters,
                                     const PixelRect& flat_region) {
  for (int m : m_values)
    if (m != 3 && m != 4 && m != 6 && m != 12)
      throw SubsetError("noise sweep M values must be in {3, 4, 6, 12}");
  for (double e : exposures)
    if (!(e > 0.0)) throw DomainError("exposures must be positive");
  if (n_sets < 1) throw DomainError("need at least one set");
  if (!object.transmission.in_bounds(flat_region))
    throw RegionError("flat region outside grid");

  // noise[e][m] -> per-set spatial stds
  std::vector<std::vector<std::vector<double>>> phase_stds(
      exposures.size(),
      std::vector<std::vector<double>>(m_values.size()));
  auto mod_stds = phase_stds;

  const FilterConfig pass = passthrough_filters();
  for (std::size_t ei = 0; ei < exposures.size(); ++ei) {
    for (int set = 0; set < n_sets; ++set) {
      const std::uint64_t base = substream(camera.seed, ei, std::uint64_t(set));
      const SimulatedSet sim = simulate_set(object, model, exposures[ei],
                                            camera, base, filters);
      for (std::size_t mi = 0; mi < m_values.size(); ++mi) {
        const FrameStack so = subset_frames(sim.object_stack, m_values[mi]);
        const FrameStack sr = subset_frames(sim.reference_stack, m_values[mi]);
        const HologramResult holo = reconstruct_hologram(so, sr, pass);
        phase_stds[ei][mi].push_back(
            holo.absolute_phase.stddev(flat_region));
        mod_stds[ei][mi].push_back(
            holo.reconstruction_object.modulation.stddev(flat_region));
      }
    }
  }

  std::vector<NoiseReport> reports;
  for (std::size_t ei = 0; ei < exposures.size(); ++ei)
    for (std::size_t mi = 0; mi < m_values.size(); ++mi) {
      NoiseReport rep;
      rep.exposure = exposures[ei];
      rep.m_images = m_values[mi];
      rep.phase_noise = mean_of(phase_stds[ei][mi]);
      rep.phase_noise_std = sample_std(phase_stds[ei][mi]);
      rep.modulation_noise = mean_of(mod_stds[ei][mi]);
      rep.modulation_noise_std = sample_std(mod_stds[ei][mi]);
      rep.n_sets = n_sets;
      reports.push_back(rep);
    }
  return reports;
}

PhaseStepEstimate sweep_phase_step(const ComplexObject& object,
                                   const InterferometerModel& model,
                                   double exposure, int m_value, int n_sets,
                                   const CameraSpec& camera,
                                   const FilterConfig& filters,
                                   const PixelRect& region_in,
                                   const PixelRect& region_out) {
  if (!(exposure > 0.0)) throw DomainError("exposure must be positive");
  if (n_sets < 1) throw DomainError("need at least one set");
  const FilterConfig pass = passthrough_filters();
  std::vector<PhaseStepEstimate> estimates;
  for (int set = 0; set < n_sets; ++set) {
    const std::uint64_t base =
        substream(camera.seed, 0x57E9, std::uint64_t(set));
    const SimulatedSet sim =
        simulate_set(object, model, exposure, camera, base, filters);
    const HologramResult holo =
        reconstruct_hologram(subset_frames(sim.object_stack, m_value),
                             subset_frames(sim.reference_stack, m_value), pass);
    estimates.push_back(estimate_phase_step(holo, region_in, region_out));
  }
  return aggregate_steps(estimates);
}

std::vector<OdSweepRow> od_sweep(const ComplexObject& base_object,
                                 const std::vector<double>& od_values,
                                 OdConvention convention,
                                 const InterferometerModel& model,
                                 const CameraSpec& camera,
                                 const FilterConfig& filters,
                                 const std::vector<PixelRect>& regions) {
  if (regions.empty()) throw RegionError("od sweep needs at least one region");
  for (const auto& r : regions)
    if (!base_object.transmission.in_bounds(r))
      throw RegionError("od sweep region outside grid");

  std::vector<OdSweepRow> rows;
  const FilterConfig pass = passthrough_filters();
  for (std::size_t oi = 0; oi < od_values.size(); ++oi) {
    const ComplexObject object =
        apply_od(base_object, od_values[oi], convention, std::nullopt);
    const std::uint64_t base = substream(camera.seed, 0x0D, oi);
    const SimulatedSet sim = simulate_set(object, model, camera.exposure,
                                          camera, base, filters);
    const HologramResult holo = reconstruct_hologram(
        subset_frames(sim.object_stack, 4),
        subset_frames(sim.reference_stack, 4), pass);
    for (std::size_t ri = 0; ri < regions.size(); ++ri) {
      OdSweepRow row;
      row.od = od_values[oi];
      row.region_index = int(ri);
      row.relative_modulation = holo.transmission.mean(regions[ri]);
      row.std = holo.transmission.stddev(regions[ri]);
      rows.push_back(row);
    }
  }
  return rows;
}

double snr_gain(const FrameStack& raw_stack, const FrameStack& filtered_stack,
                const PixelRect& flat_region) {
  require_same_shape(raw_stack.frames.front(), filtered_stack.frames.front(),
                     "snr_gain");
  if (raw_stack.frames.size() != filtered_stack.frames.size())
    throw ShapeError("snr_gain: frame counts differ");
  auto mean_snr = [&](const FrameStack& stack) {
    double acc = 0.0;
    for (const auto& f : stack.frames) {
      const double sd = f.stddev(flat_region);
      if (sd == 0.0)
        throw DegenerateError("snr_gain: zero std in flat region");
      acc += f.mean(flat_region) / sd;
    }
    return acc / double(stack.frames.size());
  };
  return mean_snr(filtered_stack) / mean_snr(raw_stack);
}

}  // namespace holo
