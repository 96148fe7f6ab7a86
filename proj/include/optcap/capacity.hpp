#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "optcap/mode_spectrum.hpp"

namespace optcap {

struct PhotonBudget {
  double total = 0.0;    // N, mean photons summed over all modes
  double thermal = 0.0;  // N_th, thermal photons per mode
};

/// Split of a photon budget across modes at the water-filling optimum.
struct Allocation {
  std::vector<double> photons;  // n_k, aligned with the spectrum
  double multiplier = 0.0;      // mu, nats per photon
  std::size_t active = 0;
  double truncation_error = 0.0;  // bound on the capacity of excluded modes
};

enum class AllocationRule { Equal, Waterfill };
enum class NoiseModel { PureLoss, Thermal };

struct FormulaTag {
  AllocationRule rule = AllocationRule::Waterfill;
  NoiseModel noise = NoiseModel::PureLoss;
  std::string str() const;
};

struct CapacityReport {
  double total = 0.0;  // nats
  std::vector<double> contributions;
  Allocation allocation;
  std::vector<double> eta;
  FormulaTag formula;
};

/// nu g(eta N / nu): nu parallel modes of transmissivity eta sharing N photons.
double capacity_equal(double eta, double nu, double total_photons);

/// nu (g(eta N / nu + N_th) - g(N_th)), the coherent-state rate with thermal
/// noise, summed over nu equal modes.
double capacity_thermal(double eta, double nu, double total_photons, double thermal_photons);

/// Optimal split of the budget across modes: eta_k g'(eta_k n_k + N_th) = mu
/// on active modes, found by bisection on mu. Modes with eta_k < 1e-30 are
/// excluded and accounted for in `truncation_error`.
Allocation water_fill(std::span<const double> eta, const PhotonBudget& budget);
Allocation water_fill(const ModeSpectrum& spectrum, const PhotonBudget& budget);

/// Sums g(eta_k n_k + N_th) - g(N_th) over modes.
CapacityReport capacity_of(const Allocation& allocation, std::span<const double> eta,
                           double thermal_photons, AllocationRule rule = AllocationRule::Waterfill);
CapacityReport capacity_of(const Allocation& allocation, const ModeSpectrum& spectrum,
                           double thermal_photons);

/// water_fill followed by capacity_of.
CapacityReport optimal_capacity(const ModeSpectrum& spectrum, const PhotonBudget& budget);

/// Uniform split of N over the first `modes` entries (all when 0).
Allocation uniform_allocation(std::size_t size, double total_photons, std::size_t modes = 0);

inline constexpr double kNatsPerBit = 0.69314718055994530942;
inline double nats_to_bits(double nats) { return nats / kNatsPerBit; }

}  // namespace optcap
