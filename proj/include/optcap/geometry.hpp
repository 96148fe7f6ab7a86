#pragma once

#include <optional>
#include <string>
#include <vector>

#include "optcap/mode_spectrum.hpp"

namespace optcap {

/// Raw user input for a geometry. Besides the wavelength, pupil radius and
/// patch side, any two of (object distance, image distance, focal length,
/// magnification) determine the system; extra values are checked for
/// consistency.
struct GeometryInput {
  double wavelength = 0.0;
  std::optional<double> object_distance;
  std::optional<double> image_distance;
  std::optional<double> focal_length;
  std::optional<double> magnification;
  double pupil_radius = 0.0;
  double patch_side = 0.0;
  double paraxial_ratio = 0.1;
};

/// Thin lens of radius R imaging an object patch of side L, all in SI units.
class OpticalGeometry {
 public:
  static OpticalGeometry make(const GeometryInput& in);
  static OpticalGeometry from_distances(double wavelength, double object_distance,
                                        double image_distance, double pupil_radius,
                                        double patch_side);

  double wavelength() const { return wavelength_; }
  double object_distance() const { return object_distance_; }
  double image_distance() const { return image_distance_; }
  double focal_length() const { return focal_length_; }
  double magnification() const { return magnification_; }
  double pupil_radius() const { return pupil_radius_; }
  double patch_side() const { return patch_side_; }
  /// Object-to-image distance D = D_o + D_i.
  double total_distance() const { return object_distance_ + image_distance_; }

  /// Paraxial sanity warnings collected at construction.
  const std::vector<std::string>& warnings() const { return warnings_; }

  OpticalGeometry scaled(double s) const;

 private:
  OpticalGeometry() = default;
  void validate(double paraxial_ratio);

  double wavelength_ = 0.0;
  double object_distance_ = 0.0;
  double image_distance_ = 0.0;
  double focal_length_ = 0.0;
  double magnification_ = 0.0;
  double pupil_radius_ = 0.0;
  double patch_side_ = 0.0;
  std::vector<std::string> warnings_;
};

enum class Regime { Farfield, Nearfield, Intermediate };

const char* to_string(Regime r);

struct RegimeThresholds {
  double farfield = 0.1;
  double nearfield = 10.0;
};

struct RegimeLabel {
  Regime regime = Regime::Intermediate;
  double fresnel = 0.0;
  RegimeThresholds thresholds;
};

/// F = pi R^2 L^2 / (lambda D_o)^2.
double fresnel_lens(const OpticalGeometry& geom);
/// x_R = lambda D_o / R.
double rayleigh_length(const OpticalGeometry& geom);
/// F_fs = L^4 / (lambda D_o)^2 * (M / (1 + M))^2.
double fresnel_free_space(const OpticalGeometry& geom);

/// Fresnel numbers of the object-to-screen and screen-to-image legs of the
/// pupil-hole scenario. They coincide with fresnel_lens.
double fresnel_object_to_screen(const OpticalGeometry& geom);
double fresnel_screen_to_image(const OpticalGeometry& geom);

/// Fresnel number that governs a scenario's spectrum.
double scenario_fresnel(Scenario s, const OpticalGeometry& geom);

RegimeLabel classify_regime(double fresnel, const RegimeThresholds& t = {});

inline constexpr double kMaxAsymptoticModes = 1e7;

/// Closed-form farfield/nearfield spectrum of the lens or free-space
/// scenario. Throws RegimeError in the intermediate regime, ConfigError
/// for the hole scenario (no closed form) and DomainError when a nearfield
/// spectrum would need more than kMaxAsymptoticModes entries.
ModeSpectrum asymptotic_spectrum(Scenario s, const OpticalGeometry& geom,
                                 const RegimeThresholds& t = {});

/// Ratio of farfield loss factors, eta / eta_fs.
double ratio_r1(const OpticalGeometry& geom);
/// Ratio of nearfield mode numbers, nu / nu_fs.
double ratio_r2(const OpticalGeometry& geom);

struct MixedRegimeCheck {
  bool holds = false;
  double lower_bound = 0.0;  // margin * L^2 M / (D_o (M + 1))
  double upper_bound = 0.0;  // L R / (D_o margin)
  double lower_slack = 0.0;  // lambda / lower_bound, >= 1 when satisfied
  double upper_slack = 0.0;  // upper_bound / lambda, >= 1 when satisfied
};

/// Lens nearfield with free-space farfield:
/// L^2 M / (D_o (M + 1)) << lambda << L R / D_o, with "<<" read as a factor
/// of `margin`.
MixedRegimeCheck mixed_regime_check(const OpticalGeometry& geom, double margin = 10.0);

}  // namespace optcap
