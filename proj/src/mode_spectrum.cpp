#include "optcap/mode_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "optcap/error.hpp"

namespace optcap {

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::Lens: return "lens";
    case Scenario::FreeSpace: return "free_space";
    case Scenario::Hole: return "hole";
  }
  return "?";
}

std::size_t ModeSpectrum::nu_threshold() const {
  return static_cast<std::size_t>(
      std::count_if(eta.begin(), eta.end(), [](double e) { return e > 0.5; }));
}

double ModeSpectrum::nu_sum() const { return std::accumulate(eta.begin(), eta.end(), 0.0); }

ModeSpectrum ModeSpectrum::from_singular_values(std::vector<double> sigma,
                                                double clamp_tolerance) {
  std::stable_sort(sigma.begin(), sigma.end(), std::greater<>());
  ModeSpectrum out;
  out.eta.reserve(sigma.size());
  for (double& s : sigma) {
    if (!std::isfinite(s) || s < 0.0) throw NumericalError("singular value is not finite");
    const double e = s * s;
    out.clamp.max_before_clamp = std::max(out.clamp.max_before_clamp, e);
    if (e > 1.0 + clamp_tolerance) {
      std::ostringstream msg;
      msg << "transmissivity " << e << " exceeds one by more than " << clamp_tolerance
          << "; the discretization is inconsistent";
      throw PhysicalityError(msg.str());
    }
    if (e > 1.0) {
      ++out.clamp.clamped;
      out.eta.push_back(1.0);
      s = 1.0;
    } else {
      out.eta.push_back(e);
    }
  }
  out.sigma = std::move(sigma);
  out.effective_count = out.nu_sum();
  return out;
}

ModeSpectrum ModeSpectrum::from_transmissivities(std::vector<double> eta) {
  std::vector<double> sigma;
  sigma.reserve(eta.size());
  for (double e : eta) {
    if (!std::isfinite(e) || e < 0.0 || e > 1.0) {
      throw DomainError("transmissivity outside [0, 1]");
    }
    sigma.push_back(std::sqrt(e));
  }
  ModeSpectrum out = from_singular_values(std::move(sigma), 0.0);
  // Keep the caller's values exactly rather than sqrt-then-square.
  std::stable_sort(eta.begin(), eta.end(), std::greater<>());
  out.eta = std::move(eta);
  out.effective_count = out.nu_sum();
  return out;
}

}  // namespace optcap
