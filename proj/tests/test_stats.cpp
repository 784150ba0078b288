#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "hierfdr/stats.hpp"
#include "oracles.hpp"

using namespace hfdr;

namespace {

bool rel_close(double a, double b, double tol) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= tol * std::max(scale, 1e-300);
}

} // namespace

TEST_SUITE("stats") {

TEST_CASE("normal cdf and survival match the quadrature oracle") {
    for (double x = -8.0; x <= 8.001; x += 0.25) {
        CHECK(rel_close(stats::normal_cdf(x), oracle::normal_cdf(x), 1e-12));
        CHECK(rel_close(stats::normal_sf(x), oracle::normal_sf(x), 1e-12));
    }
    CHECK(stats::normal_cdf(0.0) == 0.5);
    CHECK(rel_close(stats::normal_cdf(1.0) + stats::normal_sf(1.0), 1.0, 1e-15));
}

TEST_CASE("two-sided normal tail at 2 sigma") {
    CHECK(rel_close(2.0 * stats::normal_sf(2.0), oracle::normal_sf(2.0) * 2.0, 1e-12));
    CHECK(rel_close(2.0 * stats::normal_sf(2.0), 0.04550026389635842, 1e-12));
}

TEST_CASE("normal quantile inverts the distribution") {
    for (double p : {1e-12, 1e-8, 1e-4, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.9999}) {
        const double x = stats::normal_quantile(p);
        if (p <= 0.5) {
            CHECK(rel_close(oracle::normal_cdf(x), p, 1e-12));
        } else {
            CHECK(rel_close(oracle::normal_sf(x), 1.0 - p, 1e-11));
        }
    }
    CHECK(stats::normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK_THROWS_AS(stats::normal_quantile(0.0), std::invalid_argument);
    CHECK_THROWS_AS(stats::normal_quantile(1.0), std::invalid_argument);
    CHECK_THROWS_AS(stats::normal_quantile(-0.2), std::invalid_argument);
}

TEST_CASE("incomplete gamma halves sum to one") {
    for (double a : {0.5, 1.0, 2.5, 10.0, 50.0}) {
        for (double x : {0.01, 0.5, 1.0, 5.0, 40.0, 120.0}) {
            CHECK(rel_close(stats::lower_gamma_reg(a, x) + stats::upper_gamma_reg(a, x), 1.0,
                            1e-12));
        }
    }
    CHECK(stats::lower_gamma_reg(3.0, 0.0) == 0.0);
    CHECK(stats::upper_gamma_reg(3.0, 0.0) == 1.0);
    CHECK_THROWS_AS(stats::lower_gamma_reg(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(stats::upper_gamma_reg(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("chi-square survival matches closed forms") {
    for (int dof : {2, 4, 8, 20, 40}) {
        for (double x : {0.1, 1.0, 4.0, 18.420680743952364, 60.0}) {
            CHECK(rel_close(stats::chi2_sf(x, dof), oracle::chi2_sf_even(x, dof), 1e-11));
        }
    }
    for (int dof : {1, 3}) {
        for (double x : {0.5, 2.0, 9.0, 25.0}) {
            CHECK(rel_close(stats::chi2_sf(x, dof), oracle::chi2_sf_odd(x, dof), 1e-11));
        }
    }
    CHECK(stats::chi2_sf(0.0, 4.0) == 1.0);
    CHECK(stats::chi2_sf(-1.0, 4.0) == 1.0);
    CHECK_THROWS_AS(stats::chi2_sf(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("incomplete beta closed forms and symmetry") {
    for (double x : {0.05, 0.3, 0.7, 0.95}) {
        for (double b : {0.5, 1.0, 3.0, 10.0}) {
            CHECK(rel_close(stats::ibeta(1.0, b, x), 1.0 - std::pow(1.0 - x, b), 1e-12));
            CHECK(rel_close(stats::ibeta(b, 1.0, x), std::pow(x, b), 1e-12));
        }
        for (double a : {0.5, 2.0, 7.5}) {
            for (double b : {0.5, 2.0, 7.5}) {
                // The complement route rounds at the scale of 1, so compare absolutely.
                CHECK(std::abs(stats::ibeta(a, b, x) - (1.0 - stats::ibeta(b, a, 1.0 - x))) <=
                      1e-12);
            }
        }
    }
    // Integer case is a binomial sum: I_x(2,3) = 6x^2(1-x)^2 + 4x^3(1-x) + x^4.
    {
        const double x = 0.35;
        const double want = 6.0 * x * x * (1.0 - x) * (1.0 - x) +
                            4.0 * x * x * x * (1.0 - x) + x * x * x * x;
        CHECK(rel_close(stats::ibeta(2.0, 3.0, x), want, 1e-13));
    }
    CHECK(stats::ibeta(2.0, 3.0, 0.0) == 0.0);
    CHECK(stats::ibeta(2.0, 3.0, 1.0) == 1.0);
    CHECK_THROWS_AS(stats::ibeta(0.0, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(stats::ibeta(1.0, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("two-sided t p-values match closed forms and quadrature") {
    // dof = 1: p = 1 - (2/pi) atan|t|; dof = 2: p = 1 - |t|/sqrt(2 + t^2).
    for (double t : {0.0, 0.3, 1.0, 2.5, 10.0}) {
        const double p1 = 1.0 - 2.0 / 3.141592653589793 * std::atan(t);
        const double p2 = 1.0 - t / std::sqrt(2.0 + t * t);
        CHECK(rel_close(stats::student_sf_two_sided(t, 1.0), p1, 1e-12));
        CHECK(rel_close(stats::student_sf_two_sided(-t, 1.0), p1, 1e-12));
        CHECK(rel_close(stats::student_sf_two_sided(t, 2.0), p2, 1e-12));
    }
    for (double dof : {3.0, 7.0, 30.0, 200.0}) {
        for (double t : {0.5, 1.5, 3.0, 6.0}) {
            CHECK(rel_close(stats::student_sf_two_sided(t, dof),
                            oracle::t_sf_two_sided(t, dof), 5e-12));
        }
    }
    CHECK(stats::student_sf_two_sided(std::nan(""), 5.0) == 1.0);
    CHECK(stats::student_sf_two_sided(INFINITY, 5.0) == 0.0);
    CHECK(stats::student_sf_two_sided(0.0, 5.0) == 1.0);
}

} // TEST_SUITE
