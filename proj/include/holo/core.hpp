#pragma once

#include "holo/types.hpp"

namespace holo {

// Maps any finite angle into (-pi, pi]; -pi lands on +pi.
double wrap_phase(double angle);

// Two-beam interference: I = I_r + I_o + 2*sqrt(I_r*I_o)*cos(theta_o - theta_r).
ImageGrid classical_interference(const ImageGrid& i_ref, const ImageGrid& i_obj,
                                 const ImageGrid& theta_ref,
                                 const ImageGrid& theta_obj);

// Expected signal photon rate for one global phase step:
//   mean_flux * (1 + visibility * t * cos(theta - nu + dphi)) + background_rate
// in photons / pixel / second.
ImageGrid signal_rate(const ComplexObject& object,
                      const InterferometerModel& model, double dphi);

// Four-step inversion for the exact (0, pi/2, pi, 3pi/2) schedule:
//   theta = atan2(N3 - N1, N0 - N2)
//   t     = 2*sqrt((N3-N1)^2 + (N0-N2)^2) / (N0+N1+N2+N3)
// Bit-identical to reconstruct_general on the same stack.
Reconstruction reconstruct_four(const FrameStack& stack);

// General M >= 3 least-squares inversion on a canonical schedule:
//   S = sum N_m sin(dphi_m), C = sum N_m cos(dphi_m), D = sum N_m
//   theta = atan2(-S, C), t = 2*sqrt(S^2 + C^2)/D, mean_intensity = D/M
// Pixels with D below 1e-12 * (M * global mean frame value), or D <= 0,
// are flagged degenerate with theta = 0 and t = 0. When S = C = 0 at a
// healthy pixel, theta is defined as 0 (not degenerate). Modulation is
// not clamped; values above 1.5 are flagged in overmodulated_mask.
Reconstruction reconstruct_general(const FrameStack& stack);

}  // namespace holo
