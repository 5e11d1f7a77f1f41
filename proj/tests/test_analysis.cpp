#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "holo/analysis.hpp"
#include "holo/errors.hpp"
#include "holo/objects.hpp"

using namespace holo;

namespace {

constexpr double kPi = std::numbers::pi;

HologramResult with_phase(ImageGrid phase) {
  HologramResult r;
  r.absolute_phase = std::move(phase);
  return r;
}

// Paints a three-bar pattern (bar level `hi`, gaps `lo`) into a fresh image
// and returns the matching group spec.
struct BarFixture {
  ImageGrid image;
  BarGroupSpec group;
};

BarFixture vertical_bars(double hi, double lo, double bar_px) {
  const int w = 120, h = 80;
  BarFixture fx{ImageGrid(w, h, Unit::Radians, lo), {}};
  fx.group.orientation = Orientation::Vertical;
  fx.group.bar_width_px = bar_px;
  const int span = int(std::lround(5.0 * bar_px));
  fx.group.position = PixelRect{20, 20, span, 40};
  for (int y = 20; y < 60; ++y)
    for (int x = 20; x < 20 + span; ++x) {
      const int k = int(std::floor((x - 20 + 0.5) / bar_px));
      if (k % 2 == 0 && k < 5) fx.image.at(x, y) = hi;
    }
  const double pitch_mm = 12.2e-3;  // mm per px, matches the default camera
  fx.group.line_pair_mm = 2.0 * bar_px * pitch_mm;
  fx.group.frequency = 1.0 / fx.group.line_pair_mm;
  return fx;
}

}  // namespace

TEST_SUITE_BEGIN("analysis");

TEST_CASE("phase step estimate is the difference of region means") {
  ImageGrid phase(60, 60, Unit::Radians, 0.0);
  for (int y = 0; y < 60; ++y)
    for (int x = 0; x < 30; ++x) phase.at(x, y) = 2.0;
  const auto res = with_phase(phase);
  const PixelRect in{5, 5, 10, 10}, out{40, 5, 10, 10};
  const auto est = estimate_phase_step(res, in, out);
  CHECK(est.mean_step == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(est.std == doctest::Approx(0.0).epsilon(1e-12));

  // spatial scatter combines in quadrature
  ImageGrid noisy = phase;
  noisy.at(6, 6) += 0.5;   // only inside `in`
  noisy.at(41, 6) -= 0.3;  // only inside `out`
  const auto est2 = estimate_phase_step(with_phase(noisy), in, out);
  const double s_in = noisy.stddev(in), s_out = noisy.stddev(out);
  CHECK(est2.std == doctest::Approx(std::hypot(s_in, s_out)).epsilon(1e-12));
}

TEST_CASE("phase step regions are validated") {
  const auto res = with_phase(ImageGrid(40, 40, Unit::Radians, 0.0));
  CHECK_THROWS_AS(
      estimate_phase_step(res, PixelRect{0, 0, 4, 4}, PixelRect{20, 20, 10, 10}),
      RegionError);  // too small
  CHECK_THROWS_AS(
      estimate_phase_step(res, PixelRect{0, 0, 10, 10}, PixelRect{5, 5, 10, 10}),
      RegionError);  // overlap
  CHECK_THROWS_AS(estimate_phase_step(res, PixelRect{0, 0, 10, 10},
                                      PixelRect{35, 35, 10, 10}),
                  RegionError);  // out of bounds
}

TEST_CASE("aggregate combines per-set estimates") {
  std::vector<PhaseStepEstimate> sets(3);
  sets[0].mean_step = 1.0;
  sets[1].mean_step = 1.2;
  sets[2].mean_step = 1.1;
  const auto agg = aggregate_steps(sets);
  CHECK(agg.mean_step == doctest::Approx(1.1).epsilon(1e-13));
  CHECK(agg.std == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(agg.n_sets == 3);
  CHECK_THROWS_AS(aggregate_steps({}), DomainError);
}

TEST_CASE("square-to-sine contrast correction") {
  CHECK(sine_contrast(0.60) == doctest::Approx(0.471).epsilon(0.005 / 0.471));
  CHECK(sine_contrast(1.0) == doctest::Approx(kPi / 4.0).epsilon(1e-12));
  CHECK(sine_contrast(0.0) == 0.0);
  CHECK_THROWS_AS(sine_contrast(-0.2), DomainError);
}

TEST_CASE("resolvability threshold sits at 14.2 percent") {
  CHECK(rayleigh_resolvable(0.142));
  CHECK(rayleigh_resolvable(0.20));
  CHECK_FALSE(rayleigh_resolvable(0.1419));
  CHECK_FALSE(rayleigh_resolvable(0.0));
  // published sine-contrast pattern: three rows resolve, two do not
  for (double c : {0.47, 0.48, 0.42, 0.35, 0.29, 0.22}) CHECK(rayleigh_resolvable(c));
  for (double c : {0.14, 0.09, 0.06}) CHECK_FALSE(rayleigh_resolvable(c));
}

TEST_CASE("bar contrast of ideal bars is one") {
  const auto fx = vertical_bars(0.82 * kPi, 0.0, 8.0);
  const auto c = bar_contrast(fx.image, fx.group, 0.82 * kPi);
  CHECK(c.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(c.uncertainty == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("bar contrast of half-depth bars") {
  // bars at phase p, gaps at p/3: C = (p - p/3)/(p + p/3) = 0.5
  const double p = 1.2;
  const auto fx = vertical_bars(p, p / 3.0, 9.0);
  const auto c = bar_contrast(fx.image, fx.group, p);
  CHECK(c.value == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("bar contrast never reports negative values") {
  // inverted pattern: gaps brighter than bars
  const auto fx = vertical_bars(0.1, 0.9, 8.0);
  const auto c = bar_contrast(fx.image, fx.group, 1.0);
  CHECK(c.value == 0.0);
}

TEST_CASE("horizontal bars measure across rows") {
  const int w = 80, h = 120;
  ImageGrid img(w, h, Unit::Radians, 0.0);
  const double bar_px = 7.0;
  BarGroupSpec g;
  g.orientation = Orientation::Horizontal;
  g.bar_width_px = bar_px;
  const int span = int(std::lround(5.0 * bar_px));
  g.position = PixelRect{15, 25, 40, span};
  for (int y = 25; y < 25 + span; ++y) {
    const int k = int(std::floor((y - 25 + 0.5) / bar_px));
    if (k % 2 == 0 && k < 5)
      for (int x = 15; x < 55; ++x) img.at(x, y) = 2.0;
  }
  g.line_pair_mm = 2.0 * bar_px * 12.2e-3;
  g.frequency = 1.0 / g.line_pair_mm;
  const auto c = bar_contrast(img, g, 2.0);
  CHECK(c.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("bar contrast needs room for three bars") {
  auto fx = vertical_bars(1.0, 0.0, 8.0);
  fx.group.position.w = 8;  // one bar wide
  CHECK_THROWS_AS(bar_contrast(fx.image, fx.group, 1.0), GeometryError);
  fx = vertical_bars(1.0, 0.0, 8.0);
  fx.group.position = PixelRect{110, 70, 40, 40};  // spills off the image
  CHECK_THROWS_AS(bar_contrast(fx.image, fx.group, 1.0), RegionError);
}

TEST_CASE("resolution table pairs the two orientations per frequency") {
  const GridSpec grid{500, 500, 12.2e-6};
  const UsafLayout layout = usaf_layout(grid);
  ObjectSpec spec;
  spec.kind = ObjectKind::UsafTarget;
  spec.phase_step = 0.82 * kPi;
  spec.base_transmission = 0.94;
  spec.grid = grid;
  const ComplexObject obj = make_object(spec);
  const auto rows = resolution_table(obj.phase, layout, 0.82 * kPi);
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i].frequency > rows[i - 1].frequency);
  for (const auto& r : rows) {
    // unblurred target: full contrast everywhere, everything resolves
    CHECK(r.square_v.value == doctest::Approx(1.0).epsilon(0.02));
    CHECK(r.square_h.value == doctest::Approx(1.0).epsilon(0.02));
    CHECK(r.sine_v.value ==
          doctest::Approx(kPi / 4.0 * r.square_v.value).epsilon(1e-12));
    CHECK(r.resolvable_v);
    CHECK(r.resolvable_h);
    CHECK(r.line_pair_mm == doctest::Approx(1.0 / r.frequency).epsilon(1e-9));
  }
}

TEST_CASE("noise sweep rejects bad arguments") {
  ObjectSpec spec;
  spec.kind = ObjectKind::Uniform;
  spec.grid = GridSpec{32, 32, 12.2e-6};
  const ComplexObject obj = make_object(spec);
  InterferometerModel model{ImageGrid(32, 32, Unit::Radians, 0.0), 0.4, 200.0,
                            0.0, 0.0};
  CameraSpec cam;
  FilterConfig filters;
  const PixelRect flat{8, 8, 12, 12};
  CHECK_THROWS_AS(noise_sweep(obj, model, {0.5}, {5}, 2, cam, filters, flat),
                  SubsetError);
  CHECK_THROWS_AS(noise_sweep(obj, model, {-0.5}, {4}, 2, cam, filters, flat),
                  DomainError);
  CHECK_THROWS_AS(noise_sweep(obj, model, {0.5}, {4}, 0, cam, filters, flat),
                  DomainError);
  CHECK_THROWS_AS(noise_sweep(obj, model, {0.5}, {4}, 2, cam, filters,
                              PixelRect{30, 30, 10, 10}),
                  RegionError);
}

TEST_CASE("noise sweep runs and reports sane numbers on a small grid") {
  ObjectSpec spec;
  spec.kind = ObjectKind::Uniform;
  spec.base_transmission = 0.9;
  spec.grid = GridSpec{48, 48, 12.2e-6};
  const ComplexObject obj = make_object(spec);
  InterferometerModel model{make_nu_map(48, 48), 0.4, 500.0, 10.0, 0.0};
  CameraSpec cam;
  cam.seed = 7;
  FilterConfig filters;  // defaults
  const auto reports = noise_sweep(obj, model, {0.2, 0.8}, {4, 12}, 3, cam,
                                   filters, PixelRect{10, 10, 24, 24});
  REQUIRE(reports.size() == 4);
  for (const auto& r : reports) {
    CHECK(r.phase_noise > 0.0);
    CHECK(r.modulation_noise > 0.0);
    CHECK(r.n_sets == 3);
  }
  // longer exposure means quieter phase at fixed M
  CHECK(reports[2].phase_noise < reports[0].phase_noise);  // 0.8 vs 0.2, M=4
  // more frames means quieter phase at fixed exposure
  CHECK(reports[1].phase_noise < reports[0].phase_noise);  // M=12 vs 4
}

TEST_CASE("od sweep without noise follows the attenuation law exactly") {
  ObjectSpec spec;
  spec.kind = ObjectKind::Uniform;
  spec.base_transmission = 0.94;
  spec.grid = GridSpec{48, 48, 12.2e-6};
  const ComplexObject obj = make_object(spec);
  InterferometerModel model{make_nu_map(48, 48), 0.35, 300.0, 0.0, 0.0};
  CameraSpec cam;
  cam.noise_enabled = false;
  FilterConfig pass;
  pass.enabled = false;
  const std::vector<PixelRect> regions{{6, 6, 10, 10}, {30, 30, 12, 12}};
  const std::vector<double> ods{0.0, 0.1, 0.2, 0.3, 0.4};
  const auto rows =
      od_sweep(obj, ods, OdConvention::Amplitude, model, cam, pass, regions);
  REQUIRE(rows.size() == ods.size() * regions.size());
  for (const auto& row : rows) {
    const double want = 0.94 * std::pow(10.0, -row.od / 2.0);
    CHECK(row.relative_modulation == doctest::Approx(want).epsilon(1e-9));
    CHECK(row.std < 1e-9);
  }
  // intensity convention attenuates twice as fast in density
  const auto rows2 = od_sweep(obj, {0.2}, OdConvention::Intensity, model, cam,
                              pass, regions);
  CHECK(rows2[0].relative_modulation ==
        doctest::Approx(0.94 * std::pow(10.0, -0.2)).epsilon(1e-9));
  CHECK_THROWS_AS(od_sweep(obj, ods, OdConvention::Amplitude, model, cam, pass,
                           {}),
                  RegionError);
}

TEST_CASE("snr gain of the default chain on a flat noisy stack") {
  ObjectSpec spec;
  spec.kind = ObjectKind::Uniform;
  spec.base_transmission = 1.0;
  spec.grid = GridSpec{96, 96, 12.2e-6};
  const ComplexObject obj = make_object(spec);
  InterferometerModel model{ImageGrid(96, 96, Unit::Radians, 0.0), 0.0, 800.0,
                            0.0, 0.0};
  CameraSpec cam;
  cam.seed = 21;
  cam.exposure = 0.5;
  const FrameStack raw =
      simulate_stack(obj, model, PhaseStepSchedule::canonical(4), cam);
  FilterConfig filters;  // default chain
  const FrameStack filtered = filter_stack(raw, filters);
  const double gain = snr_gain(raw, filtered, PixelRect{20, 20, 56, 56});
  CHECK(gain > 1.3);

  // constant frames have no scatter for the ratio to stand on
  cam.noise_enabled = false;
  const FrameStack exact =
      simulate_stack(obj, model, PhaseStepSchedule::canonical(4), cam);
  CHECK_THROWS_AS(snr_gain(exact, filter_stack(exact, filters),
                           PixelRect{20, 20, 56, 56}),
                  DegenerateError);
}

TEST_SUITE_END();
