#include "holo/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "holo/analysis.hpp"
#include "holo/io.hpp"
#include "holo/random.hpp"

namespace holo {

namespace fs = std::filesystem;

namespace {

std::string num(double v, const char* format = "%.9g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

PixelRect shrink(const PixelRect& r, double frac) {
  const int dx = int(r.w * frac / 2.0);
  const int dy = int(r.h * frac / 2.0);
  return {r.x + dx, r.y + dy, std::max(1, r.w - 2 * dx),
          std::max(1, r.h - 2 * dy)};
}

ComplexObject empty_reference(const GridSpec& grid) {
  ComplexObject ref;
  ref.transmission =
      ImageGrid(grid.width, grid.height, Unit::Dimensionless, 1.0);
  ref.phase = ImageGrid(grid.width, grid.height, Unit::Radians, 0.0);
  ref.pixel_pitch = grid.pixel_pitch;
  return ref;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory: " + dir.string());
}

struct SimulatedRun {
  FrameStack object_stack;
  FrameStack reference_stack;
  ImageGrid background;
  ComplexObject object;  // after PSF blur: the recoverable ground truth
};

SimulatedRun simulate_run(const RunConfig& cfg) {
  ComplexObject object = blur_object(make_object(cfg.object), cfg.psf_sigma);
  const InterferometerModel model = build_model(cfg);
  const PhaseStepSchedule schedule = PhaseStepSchedule::canonical(cfg.m);
  FrameStack obj = simulate_stack(object, model, schedule,
                                  build_camera(cfg, object_stack_seed(cfg)));
  FrameStack ref =
      simulate_stack(empty_reference(cfg.object.grid), model, schedule,
                     build_camera(cfg, reference_stack_seed(cfg)));
  ImageGrid bg = simulate_background(build_camera(cfg, background_seed(cfg)),
                                     cfg.object.grid.width,
                                     cfg.object.grid.height);
  return SimulatedRun{std::move(obj), std::move(ref), std::move(bg),
                      std::move(object)};
}

}  // namespace

MeasurementRegions derive_regions(const RunConfig& cfg) {
  const int w = cfg.object.grid.width;
  const int h = cfg.object.grid.height;
  const int margin = std::max(6, std::min(w, h) / 25);
  const int box = std::max(6, std::min(w, h) / 5);

  MeasurementRegions regions;
  switch (cfg.object.kind) {
    case ObjectKind::UsafTarget: {
      const UsafLayout layout = usaf_layout(cfg.object.grid);
      regions.region_in = shrink(layout.step_patch, 0.5);
      const PixelRect flat = layout.flat_region.w > 0
                                 ? layout.flat_region
                                 : PixelRect{margin, margin, box, box};
      regions.flat = shrink(flat, 0.2);
      regions.region_out = {regions.flat.x, regions.flat.y, regions.flat.w,
                            std::max(5, regions.flat.h / 2)};
      break;
    }
    case ObjectKind::PhaseDisk: {
      const int side = std::max(6, int(0.30 * std::min(w, h)));
      regions.region_in = {w / 2 - side / 2, h / 2 - side / 2, side, side};
      regions.region_out = {margin, margin, box, box};
      regions.flat = regions.region_out;
      break;
    }
    case ObjectKind::HappyFace: {
      const double r = 0.30 * std::min(w, h);
      const int side = std::max(6, int(0.16 * r));
      const int ex = int(w / 2.0 - 0.40 * r);
      const int ey = int(h / 2.0 - 0.35 * r);
      regions.region_in = {ex - side / 2, ey - side / 2, side, side};
      regions.region_out = {margin, margin, box, box};
      regions.flat = regions.region_out;
      break;
    }
    case ObjectKind::Uniform: {
      const int side = box;
      regions.region_in = {w / 2 - side / 2, h / 2 - side / 2, side, side};
      regions.region_out = {margin, margin, side, side};
      regions.flat = regions.region_out;
      break;
    }
  }

  const PixelRect f = regions.flat;
  const int slice = std::max(4, (f.w - 4) / 3);
  for (int i = 0; i < 3; ++i)
    regions.od_regions.push_back(
        {f.x + i * (slice + 2), f.y, slice, std::max(4, f.h)});

  if (cfg.analysis.region_in) regions.region_in = *cfg.analysis.region_in;
  if (cfg.analysis.region_out) regions.region_out = *cfg.analysis.region_out;
  if (cfg.analysis.flat_region) regions.flat = *cfg.analysis.flat_region;
  if (!cfg.analysis.od_regions.empty())
    regions.od_regions = cfg.analysis.od_regions;
  return regions;
}

void cmd_simulate(const RunConfig& cfg, const fs::path& out_dir) {
  cfg.validate();
  ensure_dir(out_dir);
  const SimulatedRun run = simulate_run(cfg);

  write_text_file(out_dir / "manifest.json", manifest_json(cfg));
  write_stack(out_dir / "object", run.object_stack, object_stack_seed(cfg),
              cfg.noise);
  write_stack(out_dir / "reference", run.reference_stack,
              reference_stack_seed(cfg), cfg.noise);
  if (cfg.noise)
    write_pgm16(out_dir / "background.pgm", run.background);
  else
    write_f32(out_dir / "background.f32", run.background);
  std::ostringstream bg_meta;
  bg_meta << "exposure_s " << num(cfg.exposure, "%.17g") << "\n"
          << "seed " << background_seed(cfg) << "\n"
          << "format " << (cfg.noise ? "pgm16" : "f32") << "\n";
  write_text_file(out_dir / "background.meta", bg_meta.str());

  ensure_dir(out_dir / "truth");
  write_f32(out_dir / "truth" / "phase.f32", run.object.phase);
  write_f32(out_dir / "truth" / "transmission.f32", run.object.transmission);
}

void cmd_reconstruct(const RunConfig& cfg, const fs::path& object_stack_dir,
                     const fs::path& reference_stack_dir,
                     const fs::path& out_dir, std::optional<int> subset_m) {
  cfg.validate();
  FrameStack obj = read_stack(object_stack_dir);
  FrameStack ref = read_stack(reference_stack_dir);
  if (!(obj.schedule == ref.schedule))
    throw ScheduleError("object and reference stacks have different schedules");

  std::vector<int> indices;
  if (subset_m && *subset_m != obj.schedule.size()) {
    const int stride = 12 / *subset_m;
    obj = subset_frames(obj, *subset_m);
    ref = subset_frames(ref, *subset_m);
    for (int k = 0; k < *subset_m; ++k) indices.push_back(k * stride);
  } else {
    for (int k = 0; k < obj.schedule.size(); ++k) indices.push_back(k);
  }

  FilterConfig filters = cfg.filters;
  bool background_subtracted = false;
  const fs::path base = object_stack_dir.parent_path();
  if (fs::exists(base / "background.pgm")) {
    filters.background = read_pgm16(base / "background.pgm");
    background_subtracted = true;
  } else if (fs::exists(base / "background.f32")) {
    filters.background = read_f32(base / "background.f32");
    background_subtracted = true;
  }

  const auto t0 = std::chrono::steady_clock::now();
  const HologramResult holo = reconstruct_hologram(obj, ref, filters);
  const auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();

  ensure_dir(out_dir);
  write_f32(out_dir / "phase.f32", holo.absolute_phase);
  write_f32(out_dir / "transmission.f32", holo.transmission);
  write_mask_pgm(out_dir / "degenerate.pgm",
                 holo.reconstruction_object.degenerate_mask);
  write_mask_pgm(out_dir / "flagged.pgm", holo.transmission_flagged);

  std::ostringstream metrics;
  metrics << "[reconstruct]\n";
  metrics << "m " << obj.schedule.size() << "\n";
  metrics << "subset_indices";
  for (int i : indices) metrics << " " << i;
  metrics << "\n";
  metrics << "background_subtracted " << (background_subtracted ? "yes" : "no")
          << "\n";
  metrics << "residues_object " << holo.residue_count_object << "\n";
  metrics << "residues_reference " << holo.residue_count_reference << "\n";
  metrics << "degenerate_object "
          << holo.reconstruction_object.degenerate_mask.count() << "\n";
  metrics << "degenerate_reference "
          << holo.reconstruction_reference.degenerate_mask.count() << "\n";
  metrics << "overmodulated_object "
          << holo.reconstruction_object.overmodulated_mask.count() << "\n";
  metrics << "transmission_flagged " << holo.transmission_flagged.count()
          << "\n";
  write_text_file(out_dir / "metrics.txt", metrics.str());
  // Wall time lives in its own file so metrics stay byte-reproducible.
  write_text_file(out_dir / "timing.txt",
                  "wall_ms " + std::to_string(wall) + "\n");
}

namespace {

void analyze_phase_step(const RunConfig& cfg, const MeasurementRegions& regions,
                        const fs::path& out_dir, std::ostringstream& summary) {
  const ComplexObject object = blur_object(make_object(cfg.object), cfg.psf_sigma);
  const InterferometerModel model = build_model(cfg);
  CameraSpec camera = build_camera(cfg, substream(cfg.seed, 10));
  const PhaseStepEstimate est = sweep_phase_step(
      object, model, cfg.exposure, cfg.m, cfg.analysis.n_sets, camera,
      cfg.filters, regions.region_in, regions.region_out);

  std::ostringstream rep;
  rep << "[phase-step]\n";
  rep << "design_step_rad " << num(cfg.object.phase_step) << "\n";
  rep << "design_step_pi " << num(cfg.object.phase_step / std::numbers::pi)
      << "\n";
  rep << "exposure_s " << num(cfg.exposure) << "\n";
  rep << "m " << cfg.m << "\n";
  rep << "n_sets " << est.n_sets << "\n";
  rep << "mean_step_rad " << num(est.mean_step) << "\n";
  rep << "mean_step_pi " << num(est.mean_step / std::numbers::pi) << "\n";
  rep << "std_rad " << num(est.std) << "\n";
  write_text_file(out_dir / "phase_step.txt", rep.str());
  summary << "phase_step_mean_rad=" << num(est.mean_step) << "\n";
  summary << "phase_step_std_rad=" << num(est.std) << "\n";
}

void analyze_resolution(const RunConfig& cfg, const fs::path& out_dir,
                        std::ostringstream& summary) {
  if (cfg.object.kind != ObjectKind::UsafTarget)
    throw ConfigError("resolution analysis needs object.kind = usaf_target");
  const UsafLayout layout = usaf_layout(cfg.object.grid);
  const SimulatedRun run = simulate_run(cfg);
  FilterConfig filters = cfg.filters;
  if (cfg.background_rate > 0.0) filters.background = run.background;
  const HologramResult holo =
      reconstruct_hologram(run.object_stack, run.reference_stack, filters);
  const std::vector<ContrastRow> rows =
      resolution_table(holo.absolute_phase, layout, cfg.object.phase_step);

  std::ostringstream rep;
  rep << "[resolution]\n";
  rep << "line_pair_mm frequency_lp_mm square_v square_h sine_v sine_h "
         "resolvable_v resolvable_h\n";
  double last_resolvable = 0.0;
  for (const auto& r : rows) {
    rep << num(r.line_pair_mm, "%.3f") << " " << num(r.frequency, "%.1f") << " "
        << num(r.square_v.value, "%.3f") << "±"
        << num(r.square_v.uncertainty, "%.3f") << " "
        << num(r.square_h.value, "%.3f") << "±"
        << num(r.square_h.uncertainty, "%.3f") << " "
        << num(r.sine_v.value, "%.3f") << "±"
        << num(r.sine_v.uncertainty, "%.3f") << " "
        << num(r.sine_h.value, "%.3f") << "±"
        << num(r.sine_h.uncertainty, "%.3f") << " "
        << (r.resolvable_v ? "yes" : "no") << " "
        << (r.resolvable_h ? "yes" : "no") << "\n";
    if (r.resolvable_v && r.resolvable_h)
      last_resolvable = std::max(last_resolvable, r.frequency);
  }
  write_text_file(out_dir / "resolution.txt", rep.str());
  summary << "resolution_last_resolvable_lp_mm=" << num(last_resolvable, "%.1f")
          << "\n";
}

void analyze_noise(const RunConfig& cfg, const MeasurementRegions& regions,
                   const fs::path& out_dir, std::ostringstream& summary) {
  const ComplexObject object = blur_object(make_object(cfg.object), cfg.psf_sigma);
  const InterferometerModel model = build_model(cfg);
  CameraSpec camera = build_camera(cfg, substream(cfg.seed, 11));
  const std::vector<NoiseReport> reports =
      noise_sweep(object, model, cfg.analysis.exposures, cfg.analysis.m_values,
                  cfg.analysis.n_sets, camera, cfg.filters, regions.flat);

  std::ostringstream rep;
  rep << "[noise]\n";
  rep << "exposure_s m phase_noise_rad phase_noise_std modulation_noise "
         "modulation_noise_std n_sets\n";
  for (const auto& r : reports)
    rep << num(r.exposure) << " " << r.m_images << " "
        << num(r.phase_noise, "%.6f") << " " << num(r.phase_noise_std, "%.6f")
        << " " << num(r.modulation_noise, "%.6f") << " "
        << num(r.modulation_noise_std, "%.6f") << " " << r.n_sets << "\n";
  write_text_file(out_dir / "noise.txt", rep.str());
  for (const auto& r : reports)
    summary << "noise_" << num(r.exposure) << "s_m" << r.m_images
            << "_phase_rad=" << num(r.phase_noise, "%.6f") << "\n";
}

void analyze_od_sweep(const RunConfig& cfg, const MeasurementRegions& regions,
                      const fs::path& out_dir, std::ostringstream& summary) {
  const ComplexObject object = blur_object(make_object(cfg.object), cfg.psf_sigma);
  const InterferometerModel model = build_model(cfg);
  CameraSpec camera = build_camera(cfg, substream(cfg.seed, 12));
  const std::vector<OdSweepRow> rows =
      od_sweep(object, cfg.analysis.od_values, cfg.object.od_convention, model,
               camera, cfg.filters, regions.od_regions);

  std::ostringstream rep;
  rep << "[od-sweep]\n";
  rep << "od region relative_modulation std expected\n";
  for (const auto& r : rows) {
    const double expected =
        cfg.object.base_transmission *
        od_transmission_factor(r.od, cfg.object.od_convention);
    rep << num(r.od) << " " << r.region_index << " "
        << num(r.relative_modulation, "%.6f") << " " << num(r.std, "%.6f")
        << " " << num(expected, "%.6f") << "\n";
    if (r.region_index == 0)
      summary << "od_" << num(r.od)
              << "_modulation=" << num(r.relative_modulation, "%.6f") << "\n";
  }
  write_text_file(out_dir / "od_sweep.txt", rep.str());
}

void analyze_snr(const RunConfig& cfg, const MeasurementRegions& regions,
                 const fs::path& out_dir, std::ostringstream& summary) {
  const SimulatedRun run = simulate_run(cfg);
  FilterConfig filters = cfg.filters;
  if (cfg.background_rate > 0.0) filters.background = run.background;
  const FrameStack filtered = filter_stack(run.object_stack, filters);
  const double gain = snr_gain(run.object_stack, filtered, regions.flat);

  std::ostringstream rep;
  rep << "[snr]\n";
  rep << "flat_region " << regions.flat.x << " " << regions.flat.y << " "
      << regions.flat.w << " " << regions.flat.h << "\n";
  rep << "snr_gain " << num(gain, "%.4f") << "\n";
  write_text_file(out_dir / "snr.txt", rep.str());
  summary << "snr_gain=" << num(gain, "%.4f") << "\n";
}

}  // namespace

void cmd_analyze(const RunConfig& cfg, const std::string& subcommand,
                 const fs::path& out_dir) {
  cfg.validate();
  ensure_dir(out_dir);
  write_text_file(out_dir / "manifest.json", manifest_json(cfg));
  const MeasurementRegions regions = derive_regions(cfg);
  std::ostringstream summary;

  if (subcommand == "phase-step")
    analyze_phase_step(cfg, regions, out_dir, summary);
  else if (subcommand == "resolution")
    analyze_resolution(cfg, out_dir, summary);
  else if (subcommand == "noise")
    analyze_noise(cfg, regions, out_dir, summary);
  else if (subcommand == "od-sweep")
    analyze_od_sweep(cfg, regions, out_dir, summary);
  else if (subcommand == "snr")
    analyze_snr(cfg, regions, out_dir, summary);
  else
    throw ConfigError("unknown analyze subcommand '" + subcommand +
                      "' (use phase-step, resolution, noise, od-sweep, snr)");

  write_text_file(out_dir / "summary.txt", summary.str());
}

}  // namespace holo
