#include "optcap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "optcap/error.hpp"

namespace optcap {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kConsistencyTol = 1e-9;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

void require_positive(const std::optional<double>& v, const char* name) {
  if (v && !positive_finite(*v)) {
    throw ConfigError(std::string("geometry: ") + name + " must be positive and finite");
  }
}

void check_consistent(const std::optional<double>& given, double derived, const char* name) {
  if (!given) return;
  if (std::abs(*given - derived) > kConsistencyTol * std::abs(derived)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "geometry: " << name << " = " << *given
        << " contradicts the thin-lens relation (expected " << derived << ")";
    throw ConfigError(msg.str());
  }
}

}  // namespace

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Farfield: return "Farfield";
    case Regime::Nearfield: return "Nearfield";
    case Regime::Intermediate: return "Intermediate";
  }
  return "?";
}

OpticalGeometry OpticalGeometry::make(const GeometryInput& in) {
  if (!positive_finite(in.wavelength)) throw ConfigError("geometry: wavelength must be positive and finite");
  if (!positive_finite(in.pupil_radius)) throw ConfigError("geometry: pupil_radius must be positive and finite");
  if (!positive_finite(in.patch_side)) throw ConfigError("geometry: patch_side must be positive and finite");
  require_positive(in.object_distance, "object_distance");
  require_positive(in.image_distance, "image_distance");
  require_positive(in.focal_length, "focal_length");
  require_positive(in.magnification, "magnification");

  const auto& d_o = in.object_distance;
  const auto& d_i = in.image_distance;
  const auto& f = in.focal_length;
  const auto& m = in.magnification;

  double obj = 0.0;
  double img = 0.0;
  if (d_o && d_i) {
    obj = *d_o;
    img = *d_i;
  } else if (d_o && f) {
    if (!(*f < *d_o)) throw ConfigError("geometry: focal_length must be shorter than object_distance");
    obj = *d_o;
    img = 1.0 / (1.0 / *f - 1.0 / *d_o);
  } else if (d_i && f) {
    if (!(*f < *d_i)) throw ConfigError("geometry: focal_length must be shorter than image_distance");
    img = *d_i;
    obj = 1.0 / (1.0 / *f - 1.0 / *d_i);
  } else if (d_o && m) {
    obj = *d_o;
    img = *m * *d_o;
  } else if (d_i && m) {
    img = *d_i;
    obj = *d_i / *m;
  } else if (f && m) {
    obj = *f * (1.0 + *m) / *m;
    img = *f * (1.0 + *m);
  } else {
    throw ConfigError(
        "geometry: need two of object_distance, image_distance, focal_length, magnification");
  }

  OpticalGeometry g;
  g.wavelength_ = in.wavelength;
  g.object_distance_ = obj;
  g.image_distance_ = img;
  g.focal_length_ = obj * img / (obj + img);
  g.magnification_ = img / obj;
  g.pupil_radius_ = in.pupil_radius;
  g.patch_side_ = in.patch_side;

  check_consistent(d_o, g.object_distance_, "object_distance");
  check_consistent(d_i, g.image_distance_, "image_distance");
  check_consistent(f, g.focal_length_, "focal_length");
  check_consistent(m, g.magnification_, "magnification");
  g.validate(in.paraxial_ratio);
  return g;
}

OpticalGeometry OpticalGeometry::from_distances(double wavelength, double object_distance,
                                                double image_distance, double pupil_radius,
                                                double patch_side) {
  GeometryInput in;
  in.wavelength = wavelength;
  in.object_distance = object_distance;
  in.image_distance = image_distance;
  in.pupil_radius = pupil_radius;
  in.patch_side = patch_side;
  return make(in);
}

OpticalGeometry OpticalGeometry::scaled(double s) const {
  if (!positive_finite(s)) throw DomainError("geometry scale must be positive");
  OpticalGeometry g = *this;
  g.wavelength_ *= s;
  g.object_distance_ *= s;
  g.image_distance_ *= s;
  g.focal_length_ *= s;
  g.pupil_radius_ *= s;
  g.patch_side_ *= s;
  return g;
}

void OpticalGeometry::validate(double paraxial_ratio) {
  for (double v : {wavelength_, object_distance_, image_distance_, focal_length_,
                   magnification_, pupil_radius_, patch_side_}) {
    if (!positive_finite(v)) throw ConfigError("geometry: derived parameter is not positive and finite");
  }
  if (!(paraxial_ratio > 0.0)) throw ConfigError("geometry: paraxial_ratio must be positive");
  auto warn = [&](double size, const char* what) {
    if (size > paraxial_ratio * object_distance_) {
      std::ostringstream msg;
      msg << what << " is not small against the object distance (ratio "
          << size / object_distance_ << " > " << paraxial_ratio << "); paraxial formulas may be inaccurate";
      warnings_.push_back(msg.str());
    }
  };
  warn(patch_side_, "patch side L");
  warn(pupil_radius_, "pupil radius R");
}

double fresnel_lens(const OpticalGeometry& geom) {
  const double a = geom.pupil_radius() * geom.patch_side() /
                   (geom.wavelength() * geom.object_distance());
  return kPi * a * a;
}

double rayleigh_length(const OpticalGeometry& geom) {
  return geom.wavelength() * geom.object_distance() / geom.pupil_radius();
}

double fresnel_free_space(const OpticalGeometry& geom) {
  const double l2 = geom.patch_side() * geom.patch_side();
  const double m = geom.magnification();
  const double a = l2 / (geom.wavelength() * geom.object_distance()) * (m / (1.0 + m));
  return a * a;
}

double fresnel_object_to_screen(const OpticalGeometry& geom) {
  const double area_patch = geom.patch_side() * geom.patch_side();
  const double area_pupil = kPi * geom.pupil_radius() * geom.pupil_radius();
  const double ld = geom.wavelength() * geom.object_distance();
  return area_patch * area_pupil / (ld * ld);
}

double fresnel_screen_to_image(const OpticalGeometry& geom) {
  const double side = geom.magnification() * geom.patch_side();
  const double area_pupil = kPi * geom.pupil_radius() * geom.pupil_radius();
  const double ld = geom.wavelength() * geom.image_distance();
  return side * side * area_pupil / (ld * ld);
}

double scenario_fresnel(Scenario s, const OpticalGeometry& geom) {
  switch (s) {
    case Scenario::Lens: return fresnel_lens(geom);
    case Scenario::FreeSpace: return fresnel_free_space(geom);
    case Scenario::Hole:
      return std::max(fresnel_object_to_screen(geom), fresnel_screen_to_image(geom));
  }
  return 0.0;
}

RegimeLabel classify_regime(double fresnel, const RegimeThresholds& t) {
  if (!(t.farfield > 0.0) || !(t.farfield < t.nearfield)) {
    throw ConfigError("regime thresholds must satisfy 0 < farfield < nearfield");
  }
  if (!(fresnel > 0.0) || !std::isfinite(fresnel)) {
    throw DomainError("Fresnel number must be positive and finite");
  }
  RegimeLabel label;
  label.fresnel = fresnel;
  label.thresholds = t;
  if (fresnel < t.farfield) {
    label.regime = Regime::Farfield;
  } else if (fresnel > t.nearfield) {
    label.regime = Regime::Nearfield;
  } else {
    label.regime = Regime::Intermediate;
  }
  return label;
}

ModeSpectrum asymptotic_spectrum(Scenario s, const OpticalGeometry& geom,
                                 const RegimeThresholds& t) {
  if (s == Scenario::Hole) {
    throw ConfigError("no closed-form spectrum for the hole scenario; use the numerical path");
  }
  const double fresnel = scenario_fresnel(s, geom);
  const RegimeLabel label = classify_regime(fresnel, t);
  ModeSpectrum out;
  switch (label.regime) {
    case Regime::Farfield: {
      const double eta = s == Scenario::Lens ? fresnel * fresnel : fresnel;
      out = ModeSpectrum::from_transmissivities({eta});
      out.effective_count = 1.0;
      break;
    }
    case Regime::Nearfield: {
      if (fresnel > kMaxAsymptoticModes) {
        std::ostringstream msg;
        msg << "nearfield spectrum with F = " << fresnel << " exceeds " << kMaxAsymptoticModes
            << " explicit modes";
        throw DomainError(msg.str());
      }
      const auto count = static_cast<std::size_t>(std::ceil(fresnel));
      out = ModeSpectrum::from_transmissivities(std::vector<double>(count, 1.0));
      out.effective_count = fresnel;
      break;
    }
    case Regime::Intermediate: {
      std::ostringstream msg;
      msg << to_string(s) << " Fresnel number " << fresnel
          << " is intermediate; no closed form, use the numerical spectrum";
      throw RegimeError(msg.str());
    }
  }
  return out;
}

double ratio_r1(const OpticalGeometry& geom) {
  const double a = kPi * geom.pupil_radius() * geom.pupil_radius() /
                   (geom.wavelength() * geom.object_distance());
  const double m = geom.magnification();
  const double b = (1.0 + m) / m;
  return a * a * b * b;
}

double ratio_r2(const OpticalGeometry& geom) {
  const double a = geom.pupil_radius() / geom.patch_side();
  const double m = geom.magnification();
  const double b = (1.0 + m) / m;
  return kPi * a * a * b * b;
}

MixedRegimeCheck mixed_regime_check(const OpticalGeometry& geom, double margin) {
  if (!(margin >= 1.0)) throw ConfigError("mixed_regime_check: margin must be >= 1");
  const double l = geom.patch_side();
  const double m = geom.magnification();
  const double d_o = geom.object_distance();
  MixedRegimeCheck out;
  out.lower_bound = margin * l * l * m / (d_o * (m + 1.0));
  out.upper_bound = l * geom.pupil_radius() / d_o / margin;
  out.lower_slack = geom.wavelength() / out.lower_bound;
  out.upper_slack = out.upper_bound / geom.wavelength();
  out.holds = geom.wavelength() >= out.lower_bound && geom.wavelength() <= out.upper_bound;
  return out;
}

}  // namespace optcap
