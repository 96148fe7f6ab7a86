#include "optcap/mathfn.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "optcap/error.hpp"
#include "optcap/quadrature.hpp"

namespace optcap {
namespace {

constexpr double kPi = std::numbers::pi;

// Ascending power series; used where the alternating terms stay small.
double j1_series(double x) {
  const double half = 0.5 * x;
  const double q = -half * half;
  double term = half;
  double sum = term;
  for (int k = 1; k < 60; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + 1));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Miller's backward recurrence normalized by J0 + 2 sum J_2k = 1.
double j1_miller(double x) {
  int start = static_cast<int>(x) + 40;
  if (start % 2 != 0) ++start;
  double next = 0.0;    // J_{n+1}
  double current = 1e-30;  // J_n
  double norm = 0.0;
  double j1 = 0.0;
  for (int n = start; n > 0; --n) {
    const double prev = 2.0 * n / x * current - next;  // J_{n-1}
    next = current;
    current = prev;
    if (n - 1 == 1) j1 = current;
    if ((n - 1) % 2 == 0 && n - 1 > 0) norm += 2.0 * current;
    if (std::abs(current) > 1e200) {
      current *= 1e-200;
      next *= 1e-200;
      norm *= 1e-200;
      j1 *= 1e-200;
    }
  }
  norm += current;  // J_0
  return j1 / norm;
}

// Hankel asymptotic expansion, summed until the terms stop decreasing.
double j1_asymptotic(double x) {
  constexpr double mu = 4.0;  // 4 nu^2 with nu = 1
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = 1.0;
  const double inv8x = 1.0 / (8.0 * x);
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) * inv8x / k;
    const double mag = std::abs(term);
    if (mag > last || mag < 1e-18) break;
    last = mag;
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      default: p += term; break;
    }
  }
  // cos(x - 3pi/4) and sin(x - 3pi/4) without reducing a shifted argument.
  const double s = std::sin(x);
  const double c = std::cos(x);
  const double cos_chi = (s - c) * std::numbers::sqrt2 / 2.0;
  const double sin_chi = -(s + c) * std::numbers::sqrt2 / 2.0;
  return std::sqrt(2.0 / (kPi * x)) * (p * cos_chi - q * sin_chi);
}

}  // namespace

namespace detail {

double g_series(double x) {
  if (x == 0.0) return 0.0;
  const double x2 = x * x;
  return x * (1.0 - std::log(x)) + x2 / 2.0 - x2 * x / 6.0 + x2 * x2 / 12.0;
}

double g_direct(double x) { return std::log1p(x) + x * std::log1p(1.0 / x); }

}  // namespace detail

double g(double x) {
  if (!std::isfinite(x) || x < 0.0) {
    throw DomainError("g: argument must be finite and nonnegative, got " + std::to_string(x));
  }
  if (x < detail::kGSeriesThreshold) return detail::g_series(x);
  return detail::g_direct(x);
}

double g_marginal(double x) {
  if (!(x > 0.0)) {
    throw DomainError("g_marginal: argument must be positive, got " + std::to_string(x));
  }
  return std::log1p(1.0 / x);
}

double g_increment(double base, double delta) {
  if (!std::isfinite(base) || base < 0.0) throw DomainError("g_increment: base must be finite and nonnegative");
  if (!std::isfinite(delta) || delta < 0.0) throw DomainError("g_increment: delta must be finite and nonnegative");
  if (base == 0.0) return g(delta);
  if (delta == 0.0) return 0.0;
  if (delta > 0.1 * base) return g(base + delta) - g(base);
  // Short step: integrate g' = log1p(1/x) over [base, base + delta]. The nearest
  // singularity (x = 0) sits at least 20 half-widths away, so 16 nodes are exact
  // to roundoff.
  static const GaussLegendreRule rule = gauss_legendre(16);
  const double half = 0.5 * delta;
  const double mid = base + half;
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    sum += rule.weights[k] * std::log1p(1.0 / (mid + half * rule.nodes[k]));
  }
  return half * sum;
}

double bessel_j1(double x) {
  if (!std::isfinite(x)) throw DomainError("bessel_j1: non-finite argument");
  const double ax = std::abs(x);
  double value;
  if (ax <= 8.0) {
    value = j1_series(ax);
  } else if (ax < 25.0) {
    value = j1_miller(ax);
  } else {
    value = j1_asymptotic(ax);
  }
  return x < 0.0 ? -value : value;
}

double jinc_psf(double u) {
  if (!(u >= 0.0)) throw DomainError("jinc_psf: argument must be nonnegative");
  if (u == 0.0) return kPi;
  return bessel_j1(2.0 * kPi * u) / u;
}

}  // namespace optcap
