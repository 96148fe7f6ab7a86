#pragma once

namespace optcap {

/// Entropy of a thermal bosonic state with mean photon number x, in nats:
/// g(x) = (x+1) ln(x+1) - x ln x, with g(0) = 0.
/// Throws DomainError for negative or non-finite x.
double g(double x);

/// Derivative g'(x) = ln(1 + 1/x). Requires x > 0.
double g_marginal(double x);

/// g(base + delta) - g(base) without cancellation when delta << base.
/// Equals g(delta) exactly for base = 0. Requires base, delta >= 0.
double g_increment(double base, double delta);

/// Bessel function of the first kind, order one. Odd in x.
double bessel_j1(double x);

/// Radial factor of the circular-pupil PSF, J1(2*pi*u)/u, with the
/// removable singularity filled in (value pi at u = 0). Requires u >= 0.
double jinc_psf(double u);

namespace detail {

// Below this argument g is evaluated from its series about zero.
inline constexpr double kGSeriesThreshold = 1e-3;

double g_series(double x);
double g_direct(double x);

}  // namespace detail
}  // namespace optcap
