#pragma once

#include <cstddef>
#include <vector>

namespace optcap {

enum class Scenario { Lens, FreeSpace, Hole };

const char* to_string(Scenario s);

struct ClampDiagnostics {
  double max_before_clamp = 0.0;  // largest eta before clamping to [0, 1]
  std::size_t clamped = 0;        // number of entries pulled back to 1
};

/// Per-mode transmissivities of a channel, sorted in descending order.
///
/// eta[k] = sigma[k]^2 is the fraction of photons of mode k that reach the
/// receiver. Numerical spectra carry the quadrature orders that produced
/// them; closed-form spectra set `effective_count` to the unrounded mode
/// number (for instance the Fresnel number in the nearfield).
struct ModeSpectrum {
  std::vector<double> eta;
  std::vector<double> sigma;
  double effective_count = 0.0;
  int input_order = 0;
  int output_order = 0;
  int pupil_order = 0;
  int pupil_angular_order = 0;
  bool converged = true;
  ClampDiagnostics clamp;

  /// Number of modes transmitting more than half their photons.
  std::size_t nu_threshold() const;
  /// Sum of all transmissivities.
  double nu_sum() const;
  std::size_t size() const { return eta.size(); }

  /// Builds a spectrum from raw singular values: sorts, squares, and clamps
  /// overshoot up to `clamp_tolerance` above one. Larger overshoot throws
  /// PhysicalityError.
  static ModeSpectrum from_singular_values(std::vector<double> sigma,
                                           double clamp_tolerance = 1e-6);
  /// Builds a spectrum from transmissivities already in [0, 1].
  static ModeSpectrum from_transmissivities(std::vector<double> eta);
};

}  // namespace optcap
