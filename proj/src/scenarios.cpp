#include "optcap/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "optcap/capacity.hpp"
#include "optcap/error.hpp"
#include "optcap/mathfn.hpp"

namespace optcap {
namespace {

void check_photons(double n) {
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw DomainError("gain: photon budget must be positive and finite");
  }
}

[[noreturn]] void regime_violation(const char* gain, const char* need, const char* which,
                                   double fresnel, Regime got) {
  std::ostringstream msg;
  msg << gain << " needs " << need << "; " << which << " Fresnel number " << fresnel << " is "
      << to_string(got);
  throw RegimeError(msg.str());
}

void require(const char* gain, Regime want, const char* need, const OpticalGeometry& geom,
             const GainOptions& options) {
  if (options.force) return;
  const RegimeLabel lens = classify_regime(fresnel_lens(geom), options.thresholds);
  if (lens.regime != want) regime_violation(gain, need, "lens", lens.fresnel, lens.regime);
}

void require_free_space(const char* gain, Regime want, const char* need,
                        const OpticalGeometry& geom, const GainOptions& options) {
  if (options.force) return;
  const RegimeLabel fs = classify_regime(fresnel_free_space(geom), options.thresholds);
  if (fs.regime != want) regime_violation(gain, need, "free-space", fs.fresnel, fs.regime);
}

bool much_greater(double a, double b, double margin) { return a >= margin * b; }

}  // namespace

const char* to_string(GainKind k) {
  switch (k) {
    case GainKind::G1: return "G1";
    case GainKind::G2: return "G2";
    case GainKind::G3: return "G3";
  }
  return "?";
}

const char* to_string(ThermalOrdering o) {
  switch (o) {
    case ThermalOrdering::StrongNoise: return "N_th >> max(1, eta N / nu)";
    case ThermalOrdering::WeakNoise: return "1 >> N_th >> eta N / nu";
    case ThermalOrdering::Neither: return "no asymptotic ordering";
  }
  return "?";
}

double gain_g1_closed(double r1, double eta_fs, double photons) {
  check_photons(photons);
  return g(r1 * eta_fs * photons) / g(eta_fs * photons);
}

double gain_g2_closed(double r2, double nu, double photons) {
  check_photons(photons);
  return r2 * g(photons / nu) / g(r2 * photons / nu);
}

double gain_g3_closed(double nu, double eta_fs, double photons) {
  check_photons(photons);
  return nu * g(photons / nu) / g(eta_fs * photons);
}

std::optional<GainKind> applicable_gain(const OpticalGeometry& geom, const GainOptions& options) {
  const Regime lens = classify_regime(fresnel_lens(geom), options.thresholds).regime;
  const Regime fs = classify_regime(fresnel_free_space(geom), options.thresholds).regime;
  if (lens == Regime::Farfield && fs == Regime::Farfield) return GainKind::G1;
  if (lens == Regime::Nearfield && fs == Regime::Nearfield) return GainKind::G2;
  if (lens == Regime::Nearfield && fs == Regime::Farfield &&
      mixed_regime_check(geom, options.mixed_margin).holds) {
    return GainKind::G3;
  }
  return std::nullopt;
}

double gain_g1(const OpticalGeometry& geom, double photons, const GainOptions& options) {
  require("G1", Regime::Farfield, "both scenarios in the farfield", geom, options);
  require_free_space("G1", Regime::Farfield, "both scenarios in the farfield", geom, options);
  return gain_g1_closed(ratio_r1(geom), fresnel_free_space(geom), photons);
}

double gain_g2(const OpticalGeometry& geom, double photons, const GainOptions& options) {
  require("G2", Regime::Nearfield, "both scenarios in the nearfield", geom, options);
  require_free_space("G2", Regime::Nearfield, "both scenarios in the nearfield", geom, options);
  return gain_g2_closed(ratio_r2(geom), fresnel_lens(geom), photons);
}

double gain_g3(const OpticalGeometry& geom, double photons, const GainOptions& options) {
  if (!options.force) {
    const MixedRegimeCheck mixed = mixed_regime_check(geom, options.mixed_margin);
    if (!mixed.holds) {
      std::ostringstream msg;
      msg << "G3 needs L^2 M / (D_o (M + 1)) << lambda << L R / D_o; slack factors "
          << mixed.lower_slack << " and " << mixed.upper_slack << " (lens Fresnel number "
          << fresnel_lens(geom) << ", free-space " << fresnel_free_space(geom) << ")";
      throw RegimeError(msg.str());
    }
  }
  return gain_g3_closed(fresnel_lens(geom), fresnel_free_space(geom), photons);
}

double gain(GainKind kind, const OpticalGeometry& geom, double photons,
            const GainOptions& options) {
  switch (kind) {
    case GainKind::G1: return gain_g1(geom, photons, options);
    case GainKind::G2: return gain_g2(geom, photons, options);
    case GainKind::G3: return gain_g3(geom, photons, options);
  }
  throw ConfigError("unknown gain");
}

ClosedFormCapacities closed_form_capacities(GainKind kind, const OpticalGeometry& geom,
                                            double photons, double thermal_photons) {
  const double f = fresnel_lens(geom);
  const double f_fs = fresnel_free_space(geom);
  auto rate = [&](double eta, double nu) {
    return nu * g_increment(thermal_photons, eta * photons / nu);
  };
  switch (kind) {
    case GainKind::G1: return {rate(f * f, 1.0), rate(f_fs, 1.0)};
    case GainKind::G2: return {rate(1.0, f), rate(1.0, f_fs)};
    case GainKind::G3: return {rate(1.0, f), rate(f_fs, 1.0)};
  }
  throw ConfigError("unknown gain");
}

ThermalGainReport thermal_gain_limits(const OpticalGeometry& geom, double photons,
                                      double thermal_photons, const GainOptions& options,
                                      double limit_margin) {
  check_photons(photons);
  if (!std::isfinite(thermal_photons) || thermal_photons < 0.0) {
    throw DomainError("thermal photon number must be finite and nonnegative");
  }
  std::optional<GainKind> kind = applicable_gain(geom, options);
  if (!kind) {
    if (!options.force) {
      std::ostringstream msg;
      msg << "no gain formula applies: lens Fresnel number " << fresnel_lens(geom)
          << ", free-space " << fresnel_free_space(geom) << " (" << regime_pair(geom, options.thresholds) << ")";
      throw RegimeError(msg.str());
    }
    kind = fresnel_lens(geom) < options.thresholds.farfield ? GainKind::G1 : GainKind::G2;
  }

  const double f = fresnel_lens(geom);
  const double f_fs = fresnel_free_space(geom);
  const double nth = thermal_photons;
  ThermalGainReport out;
  out.kind = *kind;
  double predicted_strong = 0.0;
  double predicted_weak = 0.0;
  switch (*kind) {
    case GainKind::G1: {
      const double r1 = ratio_r1(geom);
      out.gain = g_increment(nth, r1 * f_fs * photons) / g_increment(nth, f_fs * photons);
      out.signal_per_mode = f * f * photons;
      predicted_strong = r1;
      break;
    }
    case GainKind::G2: {
      const double r2 = ratio_r2(geom);
      out.gain = r2 * g_increment(nth, photons / f) / g_increment(nth, r2 * photons / f);
      out.signal_per_mode = photons / f;
      predicted_weak = r2;
      break;
    }
    case GainKind::G3: {
      out.gain = f * g_increment(nth, photons / f) / g_increment(nth, f_fs * photons);
      out.signal_per_mode = photons / f;
      predicted_strong = 1.0 / f_fs;
      predicted_weak = f;
      break;
    }
  }
  const double s = out.signal_per_mode;
  if (much_greater(nth, std::max(1.0, s), limit_margin)) {
    out.ordering = ThermalOrdering::StrongNoise;
    if (predicted_strong > 0.0) out.predicted = predicted_strong;
  } else if (much_greater(1.0, nth, limit_margin) && much_greater(nth, s, limit_margin)) {
    out.ordering = ThermalOrdering::WeakNoise;
    if (predicted_weak > 0.0) out.predicted = predicted_weak;
  }
  return out;
}

KernelSpec make_kernel_spec(Scenario s, const OpticalGeometry& geom, const GridConfig& grid) {
  KernelSpec spec{s, geom};
  spec.with_phase = grid.with_phase;
  spec.pupil_order = grid.pupil_order;
  spec.pupil_angular_order = grid.pupil_angular_order;
  return spec;
}

std::string regime_pair(const OpticalGeometry& geom, const RegimeThresholds& t) {
  return std::string(to_string(classify_regime(fresnel_lens(geom), t).regime)) + "/" +
         to_string(classify_regime(fresnel_free_space(geom), t).regime);
}

GainCurve compare_spectra(const ModeSpectrum& subject, const ModeSpectrum& reference,
                          std::span<const double> photons, double thermal_photons) {
  GainCurve curve;
  curve.points.resize(photons.size());
  const bool converged = subject.converged && reference.converged;
  const auto count = static_cast<long>(photons.size());
  // Points are independent; results land at their own index.
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const PhotonBudget budget{photons[k], thermal_photons};
    GainPoint& p = curve.points[k];
    p.photons = photons[k];
    p.subject = optimal_capacity(subject, budget).total;
    p.reference = optimal_capacity(reference, budget).total;
    if (p.reference > 0.0) p.gain = p.subject / p.reference;
    p.converged = converged;
  }
  return curve;
}

GainCurve compare_numerical(const OpticalGeometry& geom, std::span<const double> photons,
                            const GridConfig& grid, double thermal_photons, Scenario subject,
                            Scenario reference, const GainOptions& options) {
  const ModeSpectrum a = converge_spectrum(Kernel(make_kernel_spec(subject, geom, grid)), grid.convergence);
  const ModeSpectrum b = subject == reference
                             ? a
                             : converge_spectrum(Kernel(make_kernel_spec(reference, geom, grid)),
                                                 grid.convergence);
  GainCurve curve = compare_spectra(a, b, photons, thermal_photons);
  curve.subject = subject;
  curve.reference = reference;
  curve.regime_pair = regime_pair(geom, options.thresholds);
  if (subject == Scenario::Lens && reference == Scenario::FreeSpace) {
    curve.closed_form = applicable_gain(geom, options);
    if (curve.closed_form) {
      for (GainPoint& p : curve.points) {
        const ClosedFormCapacities c =
            closed_form_capacities(*curve.closed_form, geom, p.photons, thermal_photons);
        p.closed_form_gain = c.lens / c.free_space;
      }
    }
  }
  return curve;
}

GainCurve closed_form_curve(const OpticalGeometry& geom, GainKind kind,
                            std::span<const double> photons, double thermal_photons) {
  GainCurve curve;
  curve.closed_form = kind;
  curve.regime_pair = regime_pair(geom);
  for (double n : photons) {
    const ClosedFormCapacities c = closed_form_capacities(kind, geom, n, thermal_photons);
    GainPoint p;
    p.photons = n;
    p.subject = c.lens;
    p.reference = c.free_space;
    if (c.free_space > 0.0) p.gain = c.lens / c.free_space;
    p.closed_form_gain = p.gain;
    curve.points.push_back(p);
  }
  return curve;
}

ScreenReport screen_negligibility(const OpticalGeometry& geom, const GridConfig& grid,
                                  const RegimeThresholds& t) {
  ScreenReport out;
  out.fresnel = fresnel_lens(geom);
  out.fresnel_free_space = fresnel_free_space(geom);
  out.lens_regime = classify_regime(out.fresnel, t).regime;
  if (out.lens_regime == Regime::Intermediate) {
    std::ostringstream msg;
    msg << "screen analysis needs a farfield or nearfield lens; Fresnel number " << out.fresnel
        << " is Intermediate";
    throw RegimeError(msg.str());
  }
  out.r1 = ratio_r1(geom);
  out.r2 = ratio_r2(geom);
  out.eta_lens = out.fresnel * out.fresnel;
  out.nu_leg_bound = std::min(fresnel_object_to_screen(geom), fresnel_screen_to_image(geom));

  const Kernel hole(make_kernel_spec(Scenario::Hole, geom, grid));
  const ModeSpectrum hole_spectrum = converge_spectrum(hole, grid.convergence);
  const ModeSpectrum fs_spectrum =
      converge_spectrum(Kernel(make_kernel_spec(Scenario::FreeSpace, geom, grid)), grid.convergence);
  out.converged = hole_spectrum.converged && fs_spectrum.converged;
  out.eta_hole = hole_spectrum.eta.empty() ? 0.0 : hole_spectrum.eta.front();
  out.eta_free_space = fs_spectrum.eta.empty() ? 0.0 : fs_spectrum.eta.front();
  out.nu_hole = hole_spectrum.nu_threshold();
  out.nu_free_space = fs_spectrum.nu_threshold();

  // Leg spectra on the grids that produced the hole spectrum.
  const QuadratureGrid in = build_grid(Domain::square(geom.patch_side()), hole_spectrum.input_order);
  const QuadratureGrid pupil = build_grid(Domain::disk(geom.pupil_radius()),
                                          hole_spectrum.pupil_order,
                                          hole_spectrum.pupil_angular_order);
  const QuadratureGrid img = build_grid(
      Domain::square(geom.magnification() * geom.patch_side()), hole_spectrum.output_order);
  const HoleStages legs = hole_stages(geom, in, pupil, img);
  const double s1 = singular_spectrum(legs.to_screen).eta.front();
  const double s2 = singular_spectrum(legs.to_image).eta.front();
  out.stage_product = s1 * s2;
  out.stage_bound_holds = out.eta_hole <= out.stage_product * (1.0 + 1e-9);

  if (out.lens_regime == Regime::Farfield) {
    out.bound_holds = out.eta_hole <= out.eta_lens * 1.05;
  } else {
    out.bound_holds = static_cast<double>(out.nu_hole) <= out.nu_leg_bound * 1.15;
  }

  out.multimode = out.nu_free_space > 0;
  if (out.multimode) {
    out.hole_to_free_space =
        static_cast<double>(out.nu_hole) / static_cast<double>(out.nu_free_space);
    out.predicted_ratio_at_least_one = out.r2 >= 1.0;
  } else {
    out.hole_to_free_space = out.eta_free_space > 0.0 ? out.eta_hole / out.eta_free_space : 0.0;
    out.predicted_ratio_at_least_one = out.r1 >= 1.0;
  }
  out.screen_negligible = out.hole_to_free_space >= kNegligibleRatio;
  out.consistent = !out.screen_negligible || out.predicted_ratio_at_least_one;
  return out;
}

}  // namespace optcap
