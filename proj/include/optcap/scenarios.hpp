#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optcap/geometry.hpp"
#include "optcap/spectra.hpp"

namespace optcap {

// Closed-form gains on raw parameters, without regime checks.

/// g(r1 eta_fs N) / g(eta_fs N).
double gain_g1_closed(double r1, double eta_fs, double photons);
/// r2 g(N / nu) / g(r2 N / nu).
double gain_g2_closed(double r2, double nu, double photons);
/// nu g(N / nu) / g(eta_fs N).
double gain_g3_closed(double nu, double eta_fs, double photons);

enum class GainKind { G1, G2, G3 };

const char* to_string(GainKind k);

struct GainOptions {
  RegimeThresholds thresholds;
  double mixed_margin = 10.0;
  // Evaluate a closed form even when its regime preconditions fail.
  bool force = false;
};

/// Closed form whose preconditions hold for this geometry: G1 when both
/// scenarios are farfield, G2 when both are nearfield, G3 when the mixed
/// regime check passes.
std::optional<GainKind> applicable_gain(const OpticalGeometry& geom, const GainOptions& options = {});

/// Gains of the lens over free space. Each throws RegimeError, naming the
/// offending Fresnel number, unless its regime holds or options.force is set.
double gain_g1(const OpticalGeometry& geom, double photons, const GainOptions& options = {});
double gain_g2(const OpticalGeometry& geom, double photons, const GainOptions& options = {});
double gain_g3(const OpticalGeometry& geom, double photons, const GainOptions& options = {});
double gain(GainKind kind, const OpticalGeometry& geom, double photons,
            const GainOptions& options = {});

/// Lens and free-space capacities behind a closed-form gain, with thermal
/// noise when thermal_photons > 0.
struct ClosedFormCapacities {
  double lens = 0.0;
  double free_space = 0.0;
};
ClosedFormCapacities closed_form_capacities(GainKind kind, const OpticalGeometry& geom,
                                            double photons, double thermal_photons = 0.0);

enum class ThermalOrdering {
  StrongNoise,    // N_th >> max(1, eta N / nu)
  WeakNoise,      // 1 >> N_th >> eta N / nu
  Neither,
};

const char* to_string(ThermalOrdering o);

struct ThermalGainReport {
  GainKind kind = GainKind::G1;
  double gain = 0.0;
  double signal_per_mode = 0.0;  // eta N / nu of the lens scenario
  ThermalOrdering ordering = ThermalOrdering::Neither;
  // Asymptote quoted for this gain and ordering, if any.
  std::optional<double> predicted;
};

/// Gain with thermal noise in both scenarios. `limit_margin` is the factor
/// read into each "much greater than" when classifying the ordering.
ThermalGainReport thermal_gain_limits(const OpticalGeometry& geom, double photons,
                                      double thermal_photons, const GainOptions& options = {},
                                      double limit_margin = 10.0);

struct GridConfig {
  ConvergenceOptions convergence;
  int pupil_order = 16;
  int pupil_angular_order = 0;
  bool with_phase = false;
};

KernelSpec make_kernel_spec(Scenario s, const OpticalGeometry& geom, const GridConfig& grid);

struct GainPoint {
  double photons = 0.0;
  double subject = 0.0;    // nats
  double reference = 0.0;  // nats
  std::optional<double> gain;  // undefined when the reference capacity is zero
  std::optional<double> closed_form_gain;
  bool converged = true;
};

struct GainCurve {
  std::vector<GainPoint> points;
  Scenario subject = Scenario::Lens;
  Scenario reference = Scenario::FreeSpace;
  std::string regime_pair;  // e.g. "Farfield/Farfield"
  std::optional<GainKind> closed_form;
};

std::string regime_pair(const OpticalGeometry& geom, const RegimeThresholds& t = {});

/// Water-filled capacities from converged numerical spectra of two
/// scenarios, one point per budget. Unconverged spectra flag the points.
GainCurve compare_numerical(const OpticalGeometry& geom, std::span<const double> photons,
                            const GridConfig& grid, double thermal_photons = 0.0,
                            Scenario subject = Scenario::Lens,
                            Scenario reference = Scenario::FreeSpace,
                            const GainOptions& options = {});

/// Same capacities from precomputed spectra.
GainCurve compare_spectra(const ModeSpectrum& subject, const ModeSpectrum& reference,
                          std::span<const double> photons, double thermal_photons = 0.0);

/// Closed-form curve for the applicable (or forced) gain.
GainCurve closed_form_curve(const OpticalGeometry& geom, GainKind kind,
                            std::span<const double> photons, double thermal_photons = 0.0);

/// Hole scenario against the lens and free-space predictions.
struct ScreenReport {
  Regime lens_regime = Regime::Intermediate;
  double fresnel = 0.0;             // F, equal to both leg Fresnel numbers
  double fresnel_free_space = 0.0;  // F_fs
  double r1 = 0.0;
  double r2 = 0.0;

  double eta_hole = 0.0;        // leading hole transmissivity
  double eta_free_space = 0.0;  // leading free-space transmissivity (numerical)
  double eta_lens = 0.0;        // F^2
  double stage_product = 0.0;   // eta_1 of leg 1 times eta_1 of leg 2
  std::size_t nu_hole = 0;      // threshold counts
  std::size_t nu_free_space = 0;
  double nu_leg_bound = 0.0;    // min of the leg Fresnel numbers

  bool bound_holds = false;          // regime bound with its tolerance
  bool stage_bound_holds = false;    // eta_hole <= stage product
  bool multimode = false;            // compared by mode count rather than eta_1
  double hole_to_free_space = 0.0;   // eta or nu ratio used for negligibility
  bool screen_negligible = false;    // ratio >= negligible_ratio
  bool predicted_ratio_at_least_one = false;  // r1 (single mode) or r2 (multimode)
  bool consistent = false;           // negligible screen implies r >= 1
  bool converged = false;
};

inline constexpr double kNegligibleRatio = 0.9;

/// Throws RegimeError for an intermediate lens regime.
ScreenReport screen_negligibility(const OpticalGeometry& geom, const GridConfig& grid,
                                  const RegimeThresholds& t = {});

}  // namespace optcap
