#include <doctest.h>

#include <cmath>
#include <numbers>

#include "optcap/mathfn.hpp"
#include "support.hpp"

using namespace optcap;
using optcap::test::rel_err;

TEST_SUITE("mathfn") {

TEST_CASE("g reference values") {
  CHECK(g(0.0) == 0.0);
  CHECK(rel_err(g(1.0), 2.0 * std::numbers::ln2) < 1e-15);
  // 11 ln 11 - 10 ln 10, 30-digit evaluation.
  CHECK(rel_err(g(10.0), 3.35099707084161914) < 1e-15);
  CHECK(rel_err(g(2.0) - g(1.0), 0.52324814376454784) < 1e-14);
}

TEST_CASE("g_marginal reference values") {
  CHECK(rel_err(g_marginal(1.0), std::numbers::ln2) < 1e-15);
  CHECK(rel_err(g_marginal(0.1), 2.39789527279837054) < 1e-15);
  const double big = g_marginal(1e8);
  CHECK(big > 0.99e-8);
  CHECK(big < 1.01e-8);
}

TEST_CASE("g is increasing and concave on random triples") {
  test::Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    double v[3] = {rng.log_uniform(1e-12, 1e8), rng.log_uniform(1e-12, 1e8), rng.log_uniform(1e-12, 1e8)};
    std::sort(v, v + 3);
    if (v[0] == v[1] || v[1] == v[2]) continue;
    CHECK(g(v[0]) < g(v[1]));
    CHECK(g(v[1]) < g(v[2]));
    const double mid = 0.5 * (v[0] + v[2]);
    CHECK(g(mid) >= 0.5 * (g(v[0]) + g(v[2])) - 1e-12 * g(mid));
  }
}

TEST_CASE("g matches the naive formula and both branches overlap") {
  test::Rng rng(12);
  for (int i = 0; i < 500; ++i) {
    const double x = rng.log_uniform(1e-3, 1e6);
    const double naive = (x + 1.0) * std::log(x + 1.0) - x * std::log(x);
    // The naive form cancels catastrophically for large x; give it its own rounding room.
    const double tol = std::max(1e-12, 4e-16 * (x + 1.0) * std::log(x + 1.0) / naive);
    CHECK(rel_err(g(x), naive) < tol);
  }
  for (int i = 0; i < 500; ++i) {
    const double x = rng.log_uniform(1e-4, 1e-2);
    CHECK(rel_err(detail::g_series(x), detail::g_direct(x)) < 1e-10);
  }
}

TEST_CASE("g_marginal matches a central difference") {
  test::Rng rng(13);
  for (int i = 0; i < 500; ++i) {
    const double x = rng.log_uniform(1e-3, 1e3);
    const double h = 1e-6 * x;
    const double fd = (g(x + h) - g(x - h)) / (2.0 * h);
    CHECK(rel_err(g_marginal(x), fd) < 1e-5);
  }
}

// Extended-precision oracle for differences of g.
long double g_long(long double x) { return x == 0.0L ? 0.0L : std::log1p(x) + x * std::log1p(1.0L / x); }

TEST_CASE("g_increment is a stable difference") {
  test::Rng rng(14);
  for (int i = 0; i < 500; ++i) {
    const double a = rng.log_uniform(1e-6, 1e6);
    const double d = rng.log_uniform(1e-3, 1e3) * a;
    CHECK(rel_err(g_increment(a, d), double(g_long(a + d) - g_long(a))) < 1e-11);
  }
  CHECK(g_increment(0.0, 3.0) == g(3.0));
  // Tiny increments: first-order Taylor term dominates.
  CHECK(rel_err(g_increment(1.0, 1e-15), 1e-15 * g_marginal(1.0)) < 1e-9);
  CHECK(rel_err(g_increment(1e6, 1e-20), 1e-20 * g_marginal(1e6)) < 1e-9);
}

TEST_CASE("bessel_j1 reference values") {
  CHECK(bessel_j1(0.0) == 0.0);
  CHECK(std::abs(bessel_j1(3.8317060)) < 1e-6);
  CHECK(rel_err(bessel_j1(1.0), 0.44005058574493352) < 1e-14);
  CHECK(bessel_j1(-1.0) == -bessel_j1(1.0));
}

TEST_CASE("bessel_j1 agrees with the integral representation") {
  test::Rng rng(15);
  for (int i = 0; i < 300; ++i) {
    const double x = rng.uniform(0.0, 120.0);
    CHECK(std::abs(bessel_j1(x) - test::bessel_jn_integral(1, x)) < 1e-12);
  }
  for (double x : {7.99, 8.0, 8.01, 24.99, 25.0, 25.01}) {
    CHECK(std::abs(bessel_j1(x) - std::cyl_bessel_j(1.0, x)) < 1e-13);
  }
}

TEST_CASE("J0 + J2 = 2 J1 / x") {
  for (double x = 0.1; x <= 100.0; x += 0.37) {
    const double lhs = test::bessel_jn_integral(0, x) + test::bessel_jn_integral(2, x);
    CHECK(std::abs(lhs - 2.0 * bessel_j1(x) / x) < 1e-9);
  }
}

TEST_CASE("jinc_psf") {
  CHECK(jinc_psf(0.0) == std::numbers::pi);
  // 0.6098 is the rounded zero; tolerance is relative to the peak value pi.
  CHECK(std::abs(jinc_psf(0.6098)) < 1e-4 * jinc_psf(0.0));
  CHECK(std::abs(jinc_psf(1e-8) - std::numbers::pi) < 1e-12);
  CHECK(std::abs(jinc_psf(3.8317059702075123 / (2.0 * std::numbers::pi))) < 1e-13);
}

}
