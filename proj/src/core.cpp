#include "holo/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace holo {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTau = 2.0 * std::numbers::pi;
}  // namespace

double wrap_phase(double angle) {
  double w = std::remainder(angle, kTau);  // lands in [-pi, pi]
  if (w <= -kPi) w = kPi;
  return w;
}

ImageGrid classical_interference(const ImageGrid& i_ref, const ImageGrid& i_obj,
                                 const ImageGrid& theta_ref,
                                 const ImageGrid& theta_obj) {
  require_same_shape(i_ref, i_obj, "classical_interference");
  require_same_shape(i_ref, theta_ref, "classical_interference");
  require_same_shape(i_ref, theta_obj, "classical_interference");
  ImageGrid out(i_ref.width(), i_ref.height(), i_ref.unit());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double ir = i_ref[i];
    const double io = i_obj[i];
    if (ir < 0.0 || io < 0.0)
      throw DomainError("classical_interference: negative intensity");
    const double v =
        ir + io + 2.0 * std::sqrt(ir * io) * std::cos(theta_obj[i] - theta_ref[i]);
    out[i] = std::max(v, 0.0);  // AM-GM keeps v >= 0; guard roundoff
  }
  return out;
}

ImageGrid signal_rate(const ComplexObject& object,
                      const InterferometerModel& model, double dphi) {
  require_same_shape(object.transmission, object.phase, "signal_rate");
  require_same_shape(object.transmission, model.nu, "signal_rate");
  if (!std::isfinite(dphi)) throw DomainError("signal_rate: non-finite dphi");
  const ImageGrid& t = object.transmission;
  const ImageGrid& th = object.phase;
  const ImageGrid& nu = model.nu;
  ImageGrid out(t.width(), t.height(), Unit::Photons);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double fringe =
        1.0 + model.visibility * t[i] * std::cos(th[i] - nu[i] + dphi);
    out[i] = model.mean_flux * fringe + model.background_rate;
  }
  return out;
}

namespace {

// Exact sin/cos tables for the canonical schedule 2*pi*m/M. Quarter-turn
// multiples get exact 0/+-1 entries and the upper half mirrors the lower
// (sin antisymmetric, cos symmetric) so symbolic cancellations also hold
// bitwise.
void canonical_trig(int m_count, std::vector<double>& sin_t,
                    std::vector<double>& cos_t) {
  sin_t.assign(std::size_t(m_count), 0.0);
  cos_t.assign(std::size_t(m_count), 0.0);
  for (int m = 0; m <= m_count / 2; ++m) {
    double s, c;
    if ((4 * m) % m_count == 0) {
      switch (((4 * m) / m_count) % 4) {
        case 0: c = 1.0; s = 0.0; break;
        case 1: c = 0.0; s = 1.0; break;
        case 2: c = -1.0; s = 0.0; break;
        default: c = 0.0; s = -1.0; break;
      }
    } else {
      const double a = kTau * m / m_count;
      s = std::sin(a);
      c = std::cos(a);
    }
    sin_t[std::size_t(m)] = s;
    cos_t[std::size_t(m)] = c;
    if (m != 0 && 2 * m != m_count) {
      sin_t[std::size_t(m_count - m)] = -s;
      cos_t[std::size_t(m_count - m)] = c;
    }
  }
}

struct PixelResult {
  double theta;
  double modulation;
  bool degenerate;
};

// Shared finisher so the four-step and general paths produce bitwise
// identical numbers from identical (S, C, D).
PixelResult finish_pixel(double s_sum, double c_sum, double d_sum,
                         double degeneracy_floor) {
  PixelResult r{0.0, 0.0, false};
  if (d_sum <= 0.0 || d_sum < degeneracy_floor) {
    r.degenerate = true;
    return r;
  }
  if (s_sum == 0.0 && c_sum == 0.0) {
    return r;  // zero modulation: theta defined as 0
  }
  double theta = std::atan2(-s_sum, c_sum);
  if (theta <= -kPi) theta = kPi;
  if (theta == 0.0) theta = 0.0;  // collapse -0.0
  r.theta = theta;
  r.modulation = 2.0 * std::sqrt(s_sum * s_sum + c_sum * c_sum) / d_sum;
  return r;
}

double global_frame_mean(const FrameStack& stack) {
  double total = 0.0;
  std::size_t n = 0;
  for (const auto& f : stack.frames) {
    for (double v : f.values()) total += v;
    n += f.size();
  }
  return n ? total / double(n) : 0.0;
}

Reconstruction assemble(const FrameStack& stack,
                        const std::vector<double>& sin_t,
                        const std::vector<double>& cos_t) {
  const int w = stack.width();
  const int h = stack.height();
  const int m_count = stack.schedule.size();
  const double floor = 1e-12 * (m_count * global_frame_mean(stack));

  Reconstruction rec;
  rec.wrapped_phase = ImageGrid(w, h, Unit::Radians);
  rec.modulation = ImageGrid(w, h, Unit::Dimensionless);
  rec.mean_intensity = ImageGrid(w, h, Unit::Photons);
  rec.degenerate_mask = PixelMask(w, h);
  rec.overmodulated_mask = PixelMask(w, h);

  const std::size_t n = rec.wrapped_phase.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s_sum = 0.0, c_sum = 0.0, d_sum = 0.0;
    for (int m = 0; m < m_count; ++m) {
      const double v = stack.frames[std::size_t(m)][i];
      s_sum += v * sin_t[std::size_t(m)];
      c_sum += v * cos_t[std::size_t(m)];
      d_sum += v;
    }
    const PixelResult px = finish_pixel(s_sum, c_sum, d_sum, floor);
    rec.wrapped_phase[i] = px.theta;
    rec.modulation[i] = px.modulation;
    rec.mean_intensity[i] = px.degenerate ? 0.0 : d_sum / m_count;
    if (px.degenerate) rec.degenerate_mask.bits[i] = 1;
    if (px.modulation > 1.5) rec.overmodulated_mask.bits[i] = 1;
  }
  return rec;
}

}  // namespace

Reconstruction reconstruct_general(const FrameStack& stack) {
  if (stack.schedule.size() < 3)
    throw ScheduleError("reconstruct_general needs M >= 3");
  if (!stack.schedule.is_canonical())
    throw ScheduleError("reconstruct_general needs a canonical schedule");
  std::vector<double> sin_t, cos_t;
  canonical_trig(stack.schedule.size(), sin_t, cos_t);
  return assemble(stack, sin_t, cos_t);
}

Reconstruction reconstruct_four(const FrameStack& stack) {
  if (stack.schedule.size() != 4)
    throw ScheduleError("reconstruct_four needs exactly M = 4");
  if (!stack.schedule.is_canonical())
    throw ScheduleError("reconstruct_four needs the (0, pi/2, pi, 3pi/2) schedule");
  // The explicit four-step differences are the M=4 sums with the exact
  // quarter-turn table: S = N1 - N3, C = N0 - N2, so theta = atan2(N3-N1, N0-N2).
  static const std::vector<double> sin4{0.0, 1.0, 0.0, -1.0};
  static const std::vector<double> cos4{1.0, 0.0, -1.0, 0.0};
  return assemble(stack, sin4, cos4);
}

}  // namespace holo
