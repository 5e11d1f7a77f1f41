#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "holo/camera.hpp"
#include "holo/core.hpp"
#include "holo/errors.hpp"
#include "holo/filters.hpp"
#include "holo/objects.hpp"
#include "holo/pipeline.hpp"
#include "holo/unwrap.hpp"
#include "oracles.hpp"

using namespace holo;

namespace {

constexpr double kPi = std::numbers::pi;

ImageGrid wrapped_copy(const ImageGrid& truth) {
  ImageGrid w(truth.width(), truth.height(), Unit::Radians);
  for (std::size_t i = 0; i < truth.size(); ++i) w[i] = wrap_phase(truth[i]);
  return w;
}

// max |a - b - c| with the best global constant c (here: value at pixel 0)
double max_err_up_to_offset(const ImageGrid& a, const ImageGrid& b) {
  const double off = a[0] - b[0];
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::fabs(a[i] - b[i] - off));
  return worst;
}

struct Lcg {
  std::uint64_t s;
  explicit Lcg(std::uint64_t seed) : s(seed) {}
  double uniform() {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    return double(s >> 11) * 0x1.0p-53;
  }
  double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

}  // namespace

TEST_SUITE_BEGIN("recon");

TEST_CASE("background subtraction clamps at zero") {
  ImageGrid frame(3, 2, Unit::Photons, 10.0);
  ImageGrid bg(3, 2, Unit::Photons, 4.0);
  frame.at(1, 0) = 2.0;  // dips under the background
  const ImageGrid out = subtract_background(frame, bg);
  CHECK(out.at(0, 0) == 6.0);
  CHECK(out.at(1, 0) == 0.0);
  ImageGrid wrong(4, 2, Unit::Photons, 1.0);
  CHECK_THROWS_AS(subtract_background(frame, wrong), ShapeError);
}

TEST_CASE("low-pass keeps DC and passband, removes the stopband") {
  const int w = 64, h = 48;
  ImageGrid frame(w, h, Unit::Photons);
  // DC + one passband cosine (k=3 -> f ~ 0.047) + one stopband (k=20 -> 0.31)
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      frame.at(x, y) = 100.0 + 8.0 * std::cos(2.0 * kPi * 3.0 * x / w) +
                       5.0 * std::cos(2.0 * kPi * 20.0 * x / w);
  const ImageGrid out = lowpass_filter(frame, 0.15);
  const auto dc = oracle::dft_bin(out, 0, 0);
  const auto pass = oracle::dft_bin(out, 3, 0);
  const auto stop = oracle::dft_bin(out, 20, 0);
  const double n = double(w) * h;
  CHECK(dc.real() / n == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(2.0 * pass.real() / n == doctest::Approx(8.0).epsilon(1e-9));
  CHECK(std::abs(stop) / n < 1e-10);
  // mean preserved on arbitrary content
  Lcg rng(4);
  for (auto& v : frame.values()) v = rng.range(0.0, 50.0);
  const double before = frame.mean();
  CHECK(lowpass_filter(frame, 0.12).mean() ==
        doctest::Approx(before).epsilon(1e-12));
  CHECK_THROWS_AS(lowpass_filter(frame, 0.0), DomainError);
  CHECK_THROWS_AS(lowpass_filter(frame, 0.51), DomainError);
}

TEST_CASE("gaussian smoothing matches the analytic transfer function") {
  const int w = 128;
  const double sigma = 2.0;
  for (int k : {2, 5, 10}) {
    ImageGrid frame(w, 8, Unit::Photons);
    // cosine centred on the reflection axis so mirrored padding is seamless
    for (int y = 0; y < 8; ++y)
      for (int x = 0; x < w; ++x)
        frame.at(x, y) = 40.0 + 10.0 * std::cos(2.0 * kPi * k * (x + 0.5) / w);
    const ImageGrid out = gaussian_smooth(frame, sigma);
    // recover the cosine amplitude by projection
    double acc = 0.0;
    for (int x = 0; x < w; ++x)
      acc += (out.at(x, 4) - 40.0) * std::cos(2.0 * kPi * k * (x + 0.5) / w);
    const double amp = 2.0 * acc / w;
    const double want = 10.0 * oracle::gaussian_mtf(sigma, double(k) / w);
    CHECK(amp == doctest::Approx(want).epsilon(2e-4));
  }
}

TEST_CASE("gaussian smoothing conserves the image sum exactly") {
  ImageGrid frame(37, 23, Unit::Photons);
  Lcg rng(8);
  for (auto& v : frame.values()) v = rng.range(0.0, 1000.0);
  double before = 0.0, after = 0.0;
  const ImageGrid out = gaussian_smooth(frame, 3.0);
  for (std::size_t i = 0; i < frame.size(); ++i) {
    before += frame[i];
    after += out[i];
  }
  CHECK(after == doctest::Approx(before).epsilon(1e-12));
  // identity at sigma zero
  const ImageGrid same = gaussian_smooth(frame, 0.0);
  for (std::size_t i = 0; i < frame.size(); ++i) CHECK(same[i] == frame[i]);
  // constants are fixed points
  const ImageGrid c = gaussian_smooth(ImageGrid(9, 9, Unit::Photons, 5.5), 1.7);
  for (std::size_t i = 0; i < c.size(); ++i)
    CHECK(c[i] == doctest::Approx(5.5).epsilon(1e-14));
  CHECK_THROWS_AS(gaussian_smooth(frame, -1.0), DomainError);
}

TEST_CASE("filter_frame applies background, low-pass, gaussian in order") {
  ImageGrid frame(32, 32, Unit::Photons);
  Lcg rng(13);
  for (auto& v : frame.values()) v = rng.range(20.0, 400.0);
  ImageGrid bg(32, 32, Unit::Photons, 15.0);

  FilterConfig cfg;
  cfg.lowpass_cutoff = 0.2;
  cfg.gaussian_sigma = 1.1;
  cfg.background = bg;
  const ImageGrid got = filter_frame(frame, cfg);
  const ImageGrid want = gaussian_smooth(
      lowpass_filter(subtract_background(frame, bg), 0.2), 1.1);
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == want[i]);

  // disabled chain still subtracts the background
  cfg.enabled = false;
  const ImageGrid raw = filter_frame(frame, cfg);
  const ImageGrid want_raw = subtract_background(frame, bg);
  for (std::size_t i = 0; i < raw.size(); ++i) CHECK(raw[i] == want_raw[i]);

  cfg = FilterConfig{};
  cfg.lowpass_cutoff = 0.6;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = FilterConfig{};
  cfg.gaussian_sigma = -0.5;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("unwrap recovers Itoh-compliant ramps exactly") {
  const int w = 64, h = 40;
  for (double slope : {0.35, -0.5, 0.29}) {
    ImageGrid truth(w, h, Unit::Radians);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        truth.at(x, y) = slope * x + 0.2 * y;  // spans up to ~6 pi
    const auto res = unwrap_phase(wrapped_copy(truth));
    CHECK(res.residue_count == 0);
    CHECK(res.filled.count() == 0);
    CHECK(max_err_up_to_offset(res.unwrapped, truth) < 1e-9);
    // the offset itself is a whole number of turns
    const double k = (res.unwrapped[0] - truth[0]) / (2.0 * kPi);
    CHECK(std::fabs(k - std::round(k)) < 1e-9);
  }
}

TEST_CASE("unwrap recovers a tall Gaussian bump exactly") {
  const int w = 72, h = 72;
  ImageGrid truth(w, h, Unit::Radians);
  const double amp = 5.0 * kPi, sigma = 9.0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double dx = x - 36.0, dy = y - 36.0;
      truth.at(x, y) = amp * std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
    }
  const auto res = unwrap_phase(wrapped_copy(truth));
  CHECK(res.residue_count == 0);
  CHECK(max_err_up_to_offset(res.unwrapped, truth) < 1e-9);
}

TEST_CASE("unwrap survives additive phase noise") {
  const int w = 72, h = 72;
  ImageGrid truth(w, h, Unit::Radians);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double dx = x - 30.0, dy = y - 40.0;
      truth.at(x, y) = 0.25 * x +
                       3.5 * kPi * std::exp(-(dx * dx + dy * dy) / (2 * 81.0));
    }
  // Box-Muller from the test LCG, sigma = 0.3
  Lcg rng(555);
  ImageGrid noisy(w, h, Unit::Radians);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double u1 = std::max(rng.uniform(), 1e-12), u2 = rng.uniform();
    const double g = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    noisy[i] = wrap_phase(truth[i] + 0.3 * g);
  }
  const auto res = unwrap_phase(noisy);
  // compare to truth after removing the median offset
  std::vector<double> diffs(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i)
    diffs[i] = res.unwrapped[i] - truth[i];
  std::nth_element(diffs.begin(), diffs.begin() + diffs.size() / 2, diffs.end());
  const double off = diffs[diffs.size() / 2];
  double sq = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = res.unwrapped[i] - truth[i] - off;
    sq += d * d;
  }
  CHECK(std::sqrt(sq / double(truth.size())) < 0.5);
}

TEST_CASE("unwrap counts residues of a vortex") {
  const int w = 32, h = 32;
  ImageGrid vortex(w, h, Unit::Radians);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      vortex.at(x, y) = std::atan2(y - 15.5, x - 15.5);
  const auto res = unwrap_phase(vortex);
  CHECK(res.residue_count > 0);
  // a clean field has none
  ImageGrid clean(w, h, Unit::Radians, 0.3);
  CHECK(unwrap_phase(clean).residue_count == 0);
}

TEST_CASE("unwrap fills masked pixels from their surroundings") {
  const int w = 48, h = 48;
  ImageGrid truth(w, h, Unit::Radians);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) truth.at(x, y) = 0.3 * x - 0.1 * y;
  ImageGrid wrapped = wrapped_copy(truth);
  PixelMask mask(w, h);
  for (int y = 20; y < 26; ++y)
    for (int x = 10; x < 18; ++x) {
      mask.at(x, y) = 1;
      wrapped.at(x, y) = 2.9;  // garbage the mask must hide
    }
  const auto res = unwrap_phase(wrapped, &mask);
  CHECK(res.filled.count() == 48);
  for (int y = 20; y < 26; ++y)
    for (int x = 10; x < 18; ++x) CHECK(res.filled.at(x, y) == 1);
  // unmasked pixels unwrap as usual
  ImageGrid sane(w, h, Unit::Radians);
  double worst = 0.0;
  const double off = res.unwrapped.at(0, 0) - truth.at(0, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (!mask.at(x, y))
        worst = std::max(worst,
                         std::fabs(res.unwrapped.at(x, y) - truth.at(x, y) - off));
  CHECK(worst < 1e-9);
  // filled values continue the field instead of keeping the garbage
  CHECK(std::fabs(res.unwrapped.at(12, 22) - truth.at(12, 22) - off) < 2.0);
}

TEST_CASE("unwrap input domain") {
  ImageGrid bad(4, 4, Unit::Radians, 0.0);
  bad.at(2, 2) = 4.0;  // outside (-pi, pi]
  CHECK_THROWS_AS(unwrap_phase(bad), DomainError);
}

TEST_CASE("subset keeps every stride-th frame starting at zero") {
  std::vector<ImageGrid> frames;
  for (int k = 0; k < 12; ++k)
    frames.push_back(ImageGrid(4, 4, Unit::Photons, double(k)));
  FrameStack stack(PhaseStepSchedule::canonical(12), frames, 0.7);

  const FrameStack s4 = subset_frames(stack, 4);
  CHECK(s4.schedule == PhaseStepSchedule::canonical(4));
  CHECK(s4.exposure == 0.7);
  REQUIRE(s4.frames.size() == 4);
  CHECK(s4.frames[0][0] == 0.0);
  CHECK(s4.frames[1][0] == 3.0);
  CHECK(s4.frames[2][0] == 6.0);
  CHECK(s4.frames[3][0] == 9.0);

  const FrameStack s3 = subset_frames(stack, 3);
  CHECK(s3.frames[1][0] == 4.0);
  CHECK(s3.frames[2][0] == 8.0);
  const FrameStack s6 = subset_frames(stack, 6);
  CHECK(s6.frames[5][0] == 10.0);
  const FrameStack s12 = subset_frames(stack, 12);
  CHECK(s12.frames[11][0] == 11.0);

  CHECK_THROWS_AS(subset_frames(stack, 5), SubsetError);
  CHECK_THROWS_AS(subset_frames(stack, 2), SubsetError);
  CHECK_THROWS_AS(subset_frames(s6, 3), ScheduleError);  // input must be M=12
}

TEST_CASE("border median ring") {
  ImageGrid g(10, 10, Unit::Radians, 1.0);
  for (int y = 2; y < 8; ++y)
    for (int x = 0; x < 10; ++x) g.at(x, y) = 100.0;  // 60 of 100 pixels
  // ring of width 2 is majority-1 even where the outlier rows cross it
  CHECK(border_median(g, 2) == 1.0);
  // oversized ring clamps to the whole frame, where the outliers win
  CHECK(border_median(g, 50) == 100.0);
}

TEST_CASE("noiseless hologram inverts the forward model to machine precision") {
  // full-pipeline property at double precision, no filtering, no noise
  const int w = 96, h = 96;
  ObjectSpec spec;
  spec.kind = ObjectKind::PhaseDisk;
  spec.phase_step = 0.82 * kPi;
  spec.base_transmission = 0.94;
  spec.grid = GridSpec{w, h, 12.2e-6};
  const ComplexObject obj = make_object(spec);
  ObjectSpec empty_spec = spec;
  empty_spec.kind = ObjectKind::Uniform;
  empty_spec.base_transmission = 1.0;
  const ComplexObject empty = make_object(empty_spec);

  InterferometerModel model{make_nu_map(w, h), 0.5, 300.0, 0.0, 0.0};
  CameraSpec cam;
  cam.exposure = 0.5;
  cam.noise_enabled = false;

  FilterConfig pass;
  pass.enabled = false;

  for (int m : {3, 4, 6, 12}) {
    const auto sched = PhaseStepSchedule::canonical(m);
    const FrameStack so = simulate_stack(obj, model, sched, cam);
    const FrameStack sr = simulate_stack(empty, model, sched, cam);
    const HologramResult res = reconstruct_hologram(so, sr, pass);
    CHECK(res.residue_count_object == 0);
    CHECK(res.transmission_flagged.count() == 0);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        CHECK(res.absolute_phase.at(x, y) ==
              doctest::Approx(obj.phase.at(x, y)).epsilon(1e-10));
        CHECK(res.transmission.at(x, y) ==
              doctest::Approx(obj.transmission.at(x, y)).epsilon(1e-10));
      }
  }
}

TEST_CASE("absolute phase does not depend on the interferometer texture") {
  const int w = 64, h = 64;
  ObjectSpec spec;
  spec.kind = ObjectKind::PhaseDisk;
  spec.phase_step = 1.9;
  spec.base_transmission = 0.9;
  spec.grid = GridSpec{w, h, 12.2e-6};
  const ComplexObject obj = make_object(spec);
  ObjectSpec flat = spec;
  flat.kind = ObjectKind::Uniform;
  flat.base_transmission = 1.0;
  const ComplexObject empty = make_object(flat);
  CameraSpec cam;
  cam.exposure = 1.0;
  cam.noise_enabled = false;
  FilterConfig pass;
  pass.enabled = false;
  const auto sched = PhaseStepSchedule::canonical(4);

  ImageGrid first;
  bool have_first = false;
  for (double tilt : {0.0, 0.02, -0.015}) {
    InterferometerModel model{
        make_nu_map(w, h, tilt, -tilt / 2, tilt == 0.0 ? 0.0 : 1.3, 0.25), 0.5,
        200.0, 0.0, 0.0};
    const HologramResult res =
        reconstruct_hologram(simulate_stack(obj, model, sched, cam),
                             simulate_stack(empty, model, sched, cam), pass);
    if (!have_first) {
      first = res.absolute_phase;
      have_first = true;
    } else {
      for (std::size_t i = 0; i < first.size(); ++i)
        CHECK(res.absolute_phase[i] == doctest::Approx(first[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("reference degeneracy flags the transmission map") {
  const int w = 32, h = 32;
  std::vector<ImageGrid> of(4, ImageGrid(w, h, Unit::Photons, 500.0));
  std::vector<ImageGrid> rf(4, ImageGrid(w, h, Unit::Photons, 500.0));
  // modulate everything mildly so the pixel of interest stands out
  const auto sched = PhaseStepSchedule::canonical(4);
  for (int m = 0; m < 4; ++m)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        of[std::size_t(m)].at(x, y) =
            500.0 * (1.0 + 0.4 * std::cos(0.9 + sched.step(m)));
        rf[std::size_t(m)].at(x, y) =
            500.0 * (1.0 + 0.4 * std::cos(sched.step(m)));
      }
  for (auto& f : rf) f.at(5, 6) = 0.0;  // dead reference pixel
  FilterConfig pass;
  pass.enabled = false;
  const HologramResult res =
      reconstruct_hologram(FrameStack(sched, of, 1.0),
                           FrameStack(sched, rf, 1.0), pass);
  CHECK(res.transmission_flagged.at(5, 6) == 1);
  CHECK(res.transmission.at(5, 6) == 0.0);
  CHECK(res.transmission_flagged.count() == 1);
  CHECK(res.transmission.at(10, 10) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("explicit recentering region pins its median to zero") {
  const int w = 48, h = 48;
  ObjectSpec spec;
  spec.kind = ObjectKind::Uniform;
  spec.base_transmission = 1.0;
  spec.grid = GridSpec{w, h, 12.2e-6};
  ComplexObject obj = make_object(spec);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) obj.phase.at(x, y) = 0.8 + 0.01 * x;
  ObjectSpec flat = spec;
  const ComplexObject empty = make_object(flat);
  InterferometerModel model{ImageGrid(w, h, Unit::Radians, 0.0), 0.5, 100.0,
                            0.0, 0.0};
  CameraSpec cam;
  cam.noise_enabled = false;
  FilterConfig pass;
  pass.enabled = false;
  const auto sched = PhaseStepSchedule::canonical(4);
  const PixelRect region{4, 4, 10, 10};
  const HologramResult res =
      reconstruct_hologram(simulate_stack(obj, model, sched, cam),
                           simulate_stack(empty, model, sched, cam), pass,
                           region);
  CHECK(res.absolute_phase.median(region) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("schedule mismatch between the arms is rejected") {
  std::vector<ImageGrid> f4(4, ImageGrid(4, 4, Unit::Photons, 10.0));
  std::vector<ImageGrid> f3(3, ImageGrid(4, 4, Unit::Photons, 10.0));
  FrameStack a(PhaseStepSchedule::canonical(4), f4, 1.0);
  FrameStack b(PhaseStepSchedule::canonical(3), f3, 1.0);
  FilterConfig pass;
  pass.enabled = false;
  CHECK_THROWS_AS(reconstruct_hologram(a, b, pass), ScheduleError);
}

TEST_SUITE_END();
