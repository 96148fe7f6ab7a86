#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "optcap/geometry.hpp"

namespace optcap::test {

inline double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Fixed-seed generator so every property test sees the same samples.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0x5eed1234u) : engine_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  std::vector<double> dirichlet(std::size_t n) {
    std::gamma_distribution<double> gamma(1.0, 1.0);
    std::vector<double> out(n);
    double sum = 0.0;
    for (double& v : out) sum += (v = gamma(engine_));
    for (double& v : out) v /= sum;
    return out;
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt. The integrand is smooth and
// periodic, so the trapezoid rule converges geometrically once samples >> x.
inline double bessel_jn_integral(int n, double x, int samples = 2048) {
  const double h = std::numbers::pi / samples;
  double sum = 0.5 * (1.0 + std::cos(n * std::numbers::pi - x * std::sin(std::numbers::pi)));
  for (int k = 1; k < samples; ++k) {
    const double t = k * h;
    sum += std::cos(n * t - x * std::sin(t));
  }
  return sum * h / std::numbers::pi;
}

// Random geometry with log-uniform parameters.
inline OpticalGeometry random_geometry(Rng& rng) {
  const double lambda = rng.log_uniform(4e-7, 2e-6);
  const double d_o = rng.log_uniform(1.0, 1e4);
  const double m = rng.log_uniform(0.2, 5.0);
  const double r = rng.log_uniform(1e-3, 1e-1) * d_o * 0.05;
  const double l = rng.log_uniform(1e-3, 1e-1) * d_o * 0.05;
  return OpticalGeometry::from_distances(lambda, d_o, m * d_o, r, l);
}

// Largest singular value by power iteration on A^H A.
inline double power_sigma_max(const Eigen::MatrixXcd& a, int iterations = 5000, double tol = 1e-15) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(a.cols()) / std::sqrt(double(a.cols()));
  for (Eigen::Index i = 0; i < a.cols(); ++i) v(i) *= 1.0 + 0.01 * double(i % 7);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Eigen::VectorXcd w = a.adjoint() * (a * v);
    const double next = w.norm();
    v = w / next;
    if (std::abs(next - lambda) <= tol * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(lambda);
}

}  // namespace optcap::test
