#pragma once

#include <optional>
#include <vector>

#include "holo/types.hpp"

namespace holo {

enum class ObjectKind { UsafTarget, PhaseDisk, HappyFace, Uniform };
enum class Orientation { Vertical, Horizontal };

// Optical-density attenuation conventions: induced-coherence modulation
// follows amplitude transmission 10^(-od/2); the intensity reading
// 10^(-od) is kept for comparison.
enum class OdConvention { Amplitude, Intensity };

struct GridSpec {
  int width = 500;
  int height = 500;
  double pixel_pitch = 12.2e-6;  // meters per pixel at object plane
};

struct ObjectSpec {
  ObjectKind kind = ObjectKind::Uniform;
  double phase_step = 0.0;  // radians, applied inside features
  double base_transmission = 1.0;
  double od = 0.0;
  std::optional<PixelRect> od_region;  // absent = whole field
  OdConvention od_convention = OdConvention::Amplitude;
  GridSpec grid;
};

// One three-bar element of the resolution target.
struct BarGroupSpec {
  double line_pair_mm = 0.0;  // = 1 / frequency
  double frequency = 0.0;     // line pairs per mm
  Orientation orientation = Orientation::Vertical;
  PixelRect position;         // integer bounding box, bars anchored at its corner
  double bar_width_px = 0.0;  // line_pair/2 converted to pixels (fractional)
};

struct UsafLayout {
  std::vector<BarGroupSpec> groups;  // five frequencies x two orientations
  PixelRect step_patch;              // solid feature for phase-step checks
  PixelRect flat_region;             // feature-free area for noise estimates
};

double od_transmission_factor(double od, OdConvention convention);

// Multiplies transmission by the OD factor inside the region (whole field
// when absent).
ComplexObject apply_od(const ComplexObject& object, double od,
                       OdConvention convention,
                       const std::optional<PixelRect>& region);

// Bar-target geometry for a grid: five groups at 5.0, 5.6, 6.3, 7.1 and
// 8.0 lp/mm, both orientations, plus a solid patch and a flat area.
UsafLayout usaf_layout(const GridSpec& grid);

ComplexObject make_object(const ObjectSpec& spec);

// passes * 2*pi*(n-1)*height / lambda.
double phase_from_height(double height, double refractive_index,
                         double wavelength, int passes = 1);

// Smooth interferometer phase texture: a linear tilt plus a broad Gaussian
// bump, gentle enough that neighbouring pixels never differ by pi.
ImageGrid make_nu_map(int width, int height, double tilt_x = 0.010,
                      double tilt_y = 0.006, double bump_amplitude = 1.0,
                      double bump_sigma_frac = 0.3);

// Gaussian blur of the complex field t*exp(i*theta): real and imaginary
// parts are smoothed separately, then modulus/argument are recomposed.
// psf_sigma is in meters at the object plane; 0 is the identity.
ComplexObject blur_object(const ComplexObject& object, double psf_sigma);

}  // namespace holo
