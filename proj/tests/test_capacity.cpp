#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "optcap/capacity.hpp"
#include "optcap/error.hpp"
#include "optcap/mathfn.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace optcap;
using optcap::test::rel_err;

namespace {

double kkt_residual(std::span<const double> eta, const Allocation& a, double thermal) {
  double worst = 0.0;
  for (std::size_t k = 0; k < eta.size(); ++k) {
    if (a.photons[k] <= 0.0) continue;
    const double marginal = eta[k] * std::log1p(1.0 / (eta[k] * a.photons[k] + thermal));
    worst = std::max(worst, std::abs(marginal - a.multiplier));
  }
  return worst / a.multiplier;
}

std::vector<double> random_spectrum(test::Rng& rng, std::size_t n) {
  std::vector<double> eta(n);
  for (double& e : eta) e = rng.log_uniform(1e-6, 1.0);
  std::sort(eta.begin(), eta.end(), std::greater<>());
  return eta;
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

TEST_SUITE("capacity") {

TEST_CASE("capacity_equal reference values") {
  CHECK(rel_err(capacity_equal(1.0, 1.0, 1.0), 2.0 * std::numbers::ln2) < 1e-15);
  CHECK(capacity_equal(0.0, 3.0, 17.0) == 0.0);
  CHECK(rel_err(capacity_equal(0.5, 2.0, 4.0), 4.0 * std::numbers::ln2) < 1e-15);
  CHECK_THROWS_AS(capacity_equal(1.5, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(capacity_equal(0.5, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(capacity_equal(0.5, 1.0, -1.0), DomainError);
}

TEST_CASE("capacity_thermal reference values") {
  CHECK(capacity_thermal(0.7, 3.0, 0.0, 2.0) == 0.0);
  CHECK(rel_err(capacity_thermal(1.0, 1.0, 1.0, 1.0), 0.52324814376454784) < 1e-14);
  test::Rng rng(41);
  for (int i = 0; i < 500; ++i) {
    const double eta = rng.uniform(0.0, 1.0);
    const double nu = rng.log_uniform(0.1, 1e4);
    const double n = rng.log_uniform(1e-20, 1e8);
    CHECK(capacity_thermal(eta, nu, n, 0.0) == capacity_equal(eta, nu, n));
  }
}

TEST_CASE("capacity_thermal is nonincreasing in the thermal occupation") {
  test::Rng rng(42);
  for (int i = 0; i < 300; ++i) {
    const double eta = rng.uniform(0.01, 1.0);
    const double nu = rng.log_uniform(1.0, 100.0);
    const double n = rng.log_uniform(1e-6, 1e4);
    double prev = capacity_thermal(eta, nu, n, 0.0);
    for (double th = 1e-6; th < 1e6; th *= 7.0) {
      const double c = capacity_thermal(eta, nu, n, th);
      CHECK(c <= prev * (1.0 + 1e-12));
      prev = c;
    }
  }
}

TEST_CASE("water_fill on equal spectra is uniform") {
  for (std::size_t nu : {1u, 2u, 7u, 40u}) {
    for (double n : {1e-20, 1e-3, 1.0, 50.0, 1e8}) {
      const std::vector<double> eta(nu, 0.37);
      const Allocation a = water_fill(eta, {n, 0.0});
      for (double x : a.photons) CHECK(rel_err(x, n / double(nu)) < 1e-12);
      const double c = capacity_of(a, eta, 0.0).total;
      const double u = capacity_of(uniform_allocation(nu, n), eta, 0.0).total;
      CHECK(std::abs(c - u) <= 1e-12 * std::max(1.0, u));
      CHECK(rel_err(u, capacity_equal(0.37, double(nu), n)) < 1e-12);
    }
  }
}

TEST_CASE("single mode takes the whole budget") {
  const std::vector<double> eta{0.25};
  const Allocation a = water_fill(eta, {3.5, 0.0});
  CHECK(a.photons[0] == 3.5);
  CHECK(a.active == 1);
}

TEST_CASE("three-mode spectrum matches the simplex search") {
  const std::array<double, 3> eta{0.9, 0.5, 0.1};
  const test::SimplexOptimum oracle = test::simplex_search(eta, 3.0);
  const Allocation a = water_fill(eta, {3.0, 0.0});
  const CapacityReport r = capacity_of(a, eta, 0.0);
  CHECK(std::abs(r.total - oracle.capacity) <= 1e-6);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(a.photons[k] - oracle.photons[k]) <= 1e-3);
  CHECK(kkt_residual(eta, a, 0.0) <= 1e-8);
  CHECK(r.total >= capacity_of(uniform_allocation(3, 3.0), eta, 0.0).total);
}

TEST_CASE("water-filled capacity beats random feasible allocations") {
  test::Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const std::vector<double> eta = random_spectrum(rng, std::size_t(rng.integer(1, 8)));
    for (double n : {0.01, 1.0, 100.0}) {
      const Allocation a = water_fill(eta, {n, 0.0});
      const double best = capacity_of(a, eta, 0.0).total;
      for (int s = 0; s < 100; ++s) {
        Allocation r;
        r.photons = rng.dirichlet(eta.size());
        for (double& x : r.photons) x *= n;
        CHECK(capacity_of(r, eta, 0.0).total <= best * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("KKT residual and budget conservation") {
  test::Rng rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<double> eta = random_spectrum(rng, std::size_t(rng.integer(1, 30)));
    const double n = rng.log_uniform(1e-20, 1e8);
    const double th = trial % 2 ? 0.0 : rng.log_uniform(1e-6, 1e3);
    const Allocation a = water_fill(eta, {n, th});
    CHECK(kkt_residual(eta, a, th) <= 1e-8);
    CHECK(rel_err(sum(a.photons), n) <= 1e-12);
    // Inactive modes sit below the water line. Without thermal noise the
    // marginal at n = 0 is infinite; zeros there are exp(-mu/eta) underflow.
    for (std::size_t k = 0; k < eta.size() && th > 0.0; ++k) {
      if (a.photons[k] == 0.0) CHECK(eta[k] * std::log1p(1.0 / th) <= a.multiplier * (1.0 + 1e-8));
    }
  }
}

TEST_CASE("thermal water-filling resolves budgets far below the noise floor") {
  for (double n : {1e-18, 1e-12, 1e-6}) {
    const std::vector<double> eta{0.9, 0.5};
    const Allocation a = water_fill(eta, {n, 1e-2});
    CHECK(a.photons[0] == n);
    const double c = capacity_of(a, eta, 1e-2).total;
    CHECK(rel_err(c, 0.9 * n * std::log1p(100.0)) < 1e-5);
    const std::vector<double> twin{0.5, 0.5};
    const Allocation b = water_fill(twin, {n, 1e-2});
    CHECK(rel_err(b.photons[0], n / 2) < 1e-9);
    CHECK(rel_err(b.photons[1], n / 2) < 1e-9);
  }
}

TEST_CASE("capacity is monotone in N and in the spectrum") {
  test::Rng rng(45);
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<double> eta = random_spectrum(rng, std::size_t(rng.integer(1, 8)));
    const double n1 = rng.log_uniform(1e-6, 1e4);
    const double n2 = n1 * rng.uniform(1.0, 10.0);
    const ModeSpectrum s = ModeSpectrum::from_transmissivities(eta);
    CHECK(optimal_capacity(s, {n1, 0.0}).total <= optimal_capacity(s, {n2, 0.0}).total * (1.0 + 1e-12));
    std::vector<double> better = eta;
    for (double& e : better) e = std::min(1.0, e * rng.uniform(1.0, 2.0));
    const ModeSpectrum t = ModeSpectrum::from_transmissivities(better);
    CHECK(optimal_capacity(s, {n1, 0.0}).total <= optimal_capacity(t, {n1, 0.0}).total * (1.0 + 1e-12));
  }
}

TEST_CASE("zero budget and zero allocation") {
  const std::vector<double> eta{0.9, 0.5};
  const Allocation a = water_fill(eta, {0.0, 0.0});
  CHECK(a.photons == std::vector<double>{0.0, 0.0});
  CHECK(std::isinf(a.multiplier));
  CHECK(capacity_of(a, eta, 0.0).total == 0.0);
  CHECK(capacity_of(uniform_allocation(2, 0.0), eta, 1.0).total == 0.0);
}

TEST_CASE("vanishing modes are excluded and reported") {
  const std::vector<double> eta{0.5, 1e-31, 0.0};
  const Allocation a = water_fill(eta, {10.0, 0.0});
  CHECK(a.photons[1] == 0.0);
  CHECK(a.photons[2] == 0.0);
  CHECK(a.photons[0] == 10.0);
  CHECK(a.truncation_error > 0.0);
  CHECK(a.truncation_error < 1e-28);
  CHECK_THROWS_AS(water_fill(std::vector<double>{0.0, 1e-40}, {1.0, 0.0}), DomainError);
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(water_fill(std::vector<double>{1.2}, {1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(water_fill(std::vector<double>{0.5}, {-1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(water_fill(std::vector<double>{0.5}, {1.0, -1.0}), DomainError);
  Allocation bad;
  bad.photons = {1.0};
  CHECK_THROWS_AS(capacity_of(bad, std::vector<double>{0.5, 0.4}, 0.0), ConfigError);
}

TEST_CASE("formula tags") {
  CHECK(FormulaTag{AllocationRule::Waterfill, NoiseModel::PureLoss}.str() == "waterfill/pure-loss");
  CHECK(FormulaTag{AllocationRule::Equal, NoiseModel::Thermal}.str() == "equal/thermal");
  CHECK(rel_err(nats_to_bits(std::numbers::ln2), 1.0) < 1e-15);
}

}
