#include "optcap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "optcap/error.hpp"
#include "optcap/mathfn.hpp"

namespace optcap {
namespace {

constexpr double kExcludedEta = 1e-30;

void check_eta(double eta) {
  if (!std::isfinite(eta) || eta < 0.0 || eta > 1.0) {
    throw DomainError("transmissivity must lie in [0, 1]");
  }
}

void check_budget(const PhotonBudget& b) {
  if (!std::isfinite(b.total) || b.total < 0.0) {
    throw DomainError("photon budget N must be finite and nonnegative");
  }
  if (!std::isfinite(b.thermal) || b.thermal < 0.0) {
    throw DomainError("thermal photon number must be finite and nonnegative");
  }
}

// Photons a mode takes at multiplier mu (zero below its activation level).
double mode_photons(double eta, double mu, double thermal) {
  const double occupation = 1.0 / std::expm1(mu / eta);  // eta n + N_th at the optimum
  return std::max(0.0, (occupation - thermal) / eta);
}

}  // namespace

std::string FormulaTag::str() const {
  std::string s = rule == AllocationRule::Equal ? "equal" : "waterfill";
  s += noise == NoiseModel::PureLoss ? "/pure-loss" : "/thermal";
  return s;
}

double capacity_equal(double eta, double nu, double total_photons) {
  check_eta(eta);
  if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("mode number must be positive");
  if (!std::isfinite(total_photons) || total_photons < 0.0) {
    throw DomainError("photon budget N must be finite and nonnegative");
  }
  return nu * g(eta * total_photons / nu);
}

double capacity_thermal(double eta, double nu, double total_photons, double thermal_photons) {
  check_eta(eta);
  if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("mode number must be positive");
  check_budget({total_photons, thermal_photons});
  return nu * g_increment(thermal_photons, eta * total_photons / nu);
}

Allocation water_fill(std::span<const double> eta, const PhotonBudget& budget) {
  check_budget(budget);
  for (double e : eta) check_eta(e);

  Allocation out;
  out.photons.assign(eta.size(), 0.0);
  double eta_max = 0.0;
  for (double e : eta) eta_max = std::max(eta_max, e);
  if (!(eta_max >= kExcludedEta)) {
    throw DomainError("no channel: every transmissivity vanishes");
  }
  const double n_total = budget.total;
  const double thermal = budget.thermal;
  for (double e : eta) {
    if (e > 0.0 && e < kExcludedEta) out.truncation_error += g(e * n_total);
  }
  if (n_total == 0.0) {
    out.multiplier = std::numeric_limits<double>::infinity();
    return out;
  }

  // With thermal noise a mode switches on below mu = t_k = eta_k log1p(1/N_th).
  // Allocations just above threshold are resolved through the gap d = t_k - mu,
  // never through the cancelling difference 1/expm1(mu/eta) - N_th.
  std::vector<double> threshold(eta.size(), std::numeric_limits<double>::infinity());
  double t_max = std::numeric_limits<double>::infinity();
  if (thermal > 0.0) {
    const double base = std::log1p(1.0 / thermal);
    t_max = 0.0;
    for (std::size_t k = 0; k < eta.size(); ++k) {
      threshold[k] = eta[k] * base;
      t_max = std::max(t_max, threshold[k]);
    }
  }
  auto photons_of = [&](std::size_t k, double mu, double gap) {
    const double e = eta[k];
    if (e < kExcludedEta) return 0.0;
    if (thermal == 0.0) return mode_photons(e, mu, 0.0);
    if (!(gap > 0.0)) return 0.0;
    return thermal * std::expm1(gap / e) / (-std::expm1(-mu / e)) / e;
  };
  // Mode k gap for multiplier mu, or for mu = t_max - delta when `from_top`.
  auto gap_of = [&](std::size_t k, double x, bool from_top) {
    return from_top ? (threshold[k] - t_max) + x : threshold[k] - x;
  };
  auto total_at = [&](double x, bool from_top) {
    const double mu = from_top ? t_max - x : x;
    double sum = 0.0;
    for (std::size_t k = 0; k < eta.size(); ++k) sum += photons_of(k, mu, gap_of(k, x, from_top));
    return sum;
  };

  // Solve for x in the variable where it is well resolved: delta = t_max - mu
  // near the thermal threshold, mu itself otherwise. The total is decreasing
  // in mu and increasing in delta.
  const bool from_top = thermal > 0.0 && total_at(0.5 * t_max, false) > n_total;
  double lo;
  double hi;
  if (from_top) {
    hi = 0.5 * t_max;
    lo = hi * 1e-3;
    for (int i = 0; total_at(lo, true) > n_total; ++i) {
      if (i > 400) throw NumericalError("water_fill: cannot bracket the threshold gap");
      lo *= 1e-1;
    }
  } else {
    const double mu0 = eta_max * std::log1p(1.0 / (eta_max * n_total));
    lo = mu0 * 1e-3;
    hi = std::min(mu0 * 1e3, 0.5 * t_max);
    for (int i = 0; total_at(lo, false) < n_total; ++i) {
      if (i > 400) throw NumericalError("water_fill: cannot bracket the multiplier from below");
      lo *= 1e-1;
    }
    for (int i = 0; total_at(hi, false) > n_total; ++i) {
      if (i > 400) throw NumericalError("water_fill: cannot bracket the multiplier from above");
      hi *= 10.0;
    }
  }
  // Geometric bisection; `lo` keeps total above N for mu, below N for delta.
  for (int iter = 0; iter < 400 && hi / lo - 1.0 > 4e-16; ++iter) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    const bool above = total_at(mid, from_top) > n_total;
    if (above != from_top) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double x = std::sqrt(lo * hi);
  const double mu = from_top ? t_max - x : x;
  double sum = 0.0;
  for (std::size_t k = 0; k < eta.size(); ++k) {
    out.photons[k] = photons_of(k, mu, gap_of(k, x, from_top));
    sum += out.photons[k];
  }
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    std::ostringstream msg;
    msg << "water_fill: bisection failed (bracket [" << lo << ", " << hi << "], allocated "
        << sum << " of " << n_total << ")";
    throw NumericalError(msg.str());
  }
  // Remove the last few ulps of budget mismatch.
  const double scale = n_total / sum;
  for (double& n : out.photons) {
    n *= scale;
    if (n > 0.0) ++out.active;
  }
  out.multiplier = mu;
  return out;
}

Allocation water_fill(const ModeSpectrum& spectrum, const PhotonBudget& budget) {
  return water_fill(std::span<const double>(spectrum.eta), budget);
}

CapacityReport capacity_of(const Allocation& allocation, std::span<const double> eta,
                           double thermal_photons, AllocationRule rule) {
  if (allocation.photons.size() != eta.size()) {
    throw ConfigError("allocation and spectrum have different lengths");
  }
  if (!std::isfinite(thermal_photons) || thermal_photons < 0.0) {
    throw DomainError("thermal photon number must be finite and nonnegative");
  }
  CapacityReport report;
  report.allocation = allocation;
  report.eta.assign(eta.begin(), eta.end());
  report.formula = {rule, thermal_photons > 0.0 ? NoiseModel::Thermal : NoiseModel::PureLoss};
  report.contributions.reserve(eta.size());
  for (std::size_t k = 0; k < eta.size(); ++k) {
    check_eta(eta[k]);
    const double n = allocation.photons[k];
    if (!std::isfinite(n) || n < 0.0) throw DomainError("allocation has a negative entry");
    const double c = g_increment(thermal_photons, eta[k] * n);
    report.contributions.push_back(c);
    report.total += c;
  }
  return report;
}

CapacityReport capacity_of(const Allocation& allocation, const ModeSpectrum& spectrum,
                           double thermal_photons) {
  return capacity_of(allocation, std::span<const double>(spectrum.eta), thermal_photons);
}

CapacityReport optimal_capacity(const ModeSpectrum& spectrum, const PhotonBudget& budget) {
  return capacity_of(water_fill(spectrum, budget), spectrum, budget.thermal);
}

Allocation uniform_allocation(std::size_t size, double total_photons, std::size_t modes) {
  if (modes == 0 || modes > size) modes = size;
  Allocation out;
  out.photons.assign(size, 0.0);
  if (modes == 0) return out;
  const double share = total_photons / static_cast<double>(modes);
  for (std::size_t k = 0; k < modes; ++k) out.photons[k] = share;
  out.active = total_photons > 0.0 ? modes : 0;
  return out;
}

}  // namespace optcap
