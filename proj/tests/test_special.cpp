#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lora/special.hpp"

using namespace lora;

TEST_CASE("qfunc matches normal tail values") {
    CHECK(qfunc(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(qfunc(1.0) == doctest::Approx(1.586552539314571e-01).epsilon(1e-13));
    CHECK(qfunc(-2.0) == doctest::Approx(9.772498680518208e-01).epsilon(1e-13));
    CHECK(qfunc(5.0) == doctest::Approx(2.866515718791933e-07).epsilon(1e-11));
    CHECK(qfunc(8.0) == doctest::Approx(6.220960574271740e-16).epsilon(1e-10));
}

TEST_CASE("harmonic numbers") {
    CHECK(harmonic_number(1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(harmonic_number(2) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(harmonic_number(127) == doctest::Approx(5.4253345925891718).epsilon(1e-13));
    CHECK(harmonic_number(4095) == doctest::Approx(8.8948597563413223).epsilon(1e-13));
}

TEST_CASE("regularized lower incomplete gamma") {
    CHECK(gamma_p(1.0, 0.5) == doctest::Approx(3.934693402873665e-01).epsilon(1e-12));
    CHECK(gamma_p(0.5, 1.7) == doctest::Approx(9.348035809218698e-01).epsilon(1e-12));
    CHECK(gamma_p(3.0, 2.5) == doctest::Approx(4.561868841166704e-01).epsilon(1e-12));
    CHECK(gamma_p(10.0, 12.0) == doctest::Approx(7.576078383294875e-01).epsilon(1e-12));
    CHECK(gamma_p(40.0, 30.0) == doctest::Approx(4.625303764584204e-02).epsilon(1e-11));
}

TEST_CASE("log I0 and scaled I0 across the series/asymptotic split") {
    CHECK(log_bessel_i0(0.3) == doctest::Approx(2.237468862204223e-02).epsilon(1e-12));
    CHECK(log_bessel_i0(5.0) == doctest::Approx(3.304681775822533e+00).epsilon(1e-12));
    CHECK(log_bessel_i0(50.0) == doctest::Approx(4.712757550187180e+01).epsilon(1e-12));
    CHECK(log_bessel_i0(700.0) == doctest::Approx(6.958056999984434e+02).epsilon(1e-12));
    CHECK(bessel_i0e(0.3) == doctest::Approx(7.575806251825481e-01).epsilon(1e-12));
    CHECK(bessel_i0e(5.0) == doctest::Approx(1.835408126093283e-01).epsilon(1e-12));
    CHECK(bessel_i0e(50.0) == doctest::Approx(5.656162664745418e-02).epsilon(1e-12));
    CHECK(bessel_i0e(700.0) == doctest::Approx(1.508129565153135e-02).epsilon(1e-12));
}

TEST_CASE("rice density and distribution") {
    CHECK(rice_pdf(2.0, 3.0) == doctest::Approx(2.021656851300834e-01).epsilon(1e-12));
    CHECK(rice_pdf(5.5, 4.0) == doctest::Approx(1.527589449430217e-01).epsilon(1e-12));
    CHECK(rice_pdf(30.0, 28.0) == doctest::Approx(5.589428169850734e-02).epsilon(1e-12));
    CHECK(rice_pdf(120.0, 118.0) == doctest::Approx(5.444707521796353e-02).epsilon(1e-12));
    // v = 0 degenerates to Rayleigh
    CHECK(rice_pdf(0.7, 0.0) == doctest::Approx(rayleigh_pdf(0.7)).epsilon(1e-13));
    CHECK(rayleigh_pdf(0.7) == doctest::Approx(5.478931767693077e-01).epsilon(1e-12));

    CHECK(rice_cdf(2.0, 3.0) == doctest::Approx(1.132792455976077e-01).epsilon(1e-10));
    CHECK(rice_cdf(5.5, 4.0) == doctest::Approx(9.181991381577040e-01).epsilon(1e-10));
    CHECK(rice_cdf(30.0, 28.0) == doctest::Approx(9.763022291416430e-01).epsilon(1e-10));
    CHECK(rice_cdf(120.0, 118.0) == doctest::Approx(9.770220520122810e-01).epsilon(1e-10));
    CHECK(rice_cdf(0.7, 0.0) == doctest::Approx(2.172954617581318e-01).epsilon(1e-10));
    CHECK(rice_cdf(10.0, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rice cdf is consistent with the density") {
    // trapezoid integral of the pdf reproduces the cdf
    for (double v : {0.0, 1.5, 6.0, 20.0}) {
        double acc = 0.0, prev = 0.0, dy = 1e-3;
        double upto = v + 5.0;
        for (double y = dy; y <= upto; y += dy) {
            double cur = rice_pdf(y, v);
            acc += 0.5 * (prev + cur) * dy;
            prev = cur;
        }
        CHECK(acc == doctest::Approx(rice_cdf(upto, v)).epsilon(1e-5));
    }
}

TEST_CASE("batched rice cdf equals the scalar path") {
    std::vector<double> y = {0.1, 0.5, 1.0, 2.0, 5.0, 9.0, 15.0, 33.0};
    std::vector<double> out(y.size());
    for (double v : {0.0, 0.3, 4.0, 12.0, 55.0}) {
        rice_cdf_grid(y.data(), y.size(), v, out.data());
        for (std::size_t i = 0; i < y.size(); ++i)
            CHECK(out[i] == doctest::Approx(rice_cdf(y[i], v)).epsilon(1e-11));
    }
}

TEST_CASE("rayleigh log-cdf is stable for small arguments") {
    CHECK(rayleigh_log_cdf(1e-8) == doctest::Approx(-3.753450866846467e+01).epsilon(1e-10));
    CHECK(rayleigh_log_cdf(0.05) == doctest::Approx(-6.685236662563762e+00).epsilon(1e-12));
    CHECK(rayleigh_log_cdf(1.0) == doctest::Approx(-9.327521295671886e-01).epsilon(1e-12));
    CHECK(rayleigh_cdf(1.0) == doctest::Approx(std::exp(rayleigh_log_cdf(1.0))).epsilon(1e-13));
}

TEST_CASE("gauss-legendre nodes and weights") {
    const auto& gl1 = gauss_legendre(1);
    REQUIRE(gl1.size() == 1);
    CHECK(gl1[0].first == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(gl1[0].second == doctest::Approx(2.0).epsilon(1e-15));

    const double nodes8[] = {-9.6028985649753618e-01, -7.9666647741362673e-01,
                             -5.2553240991632899e-01, -1.8343464249564978e-01,
                             1.8343464249564978e-01,  5.2553240991632899e-01,
                             7.9666647741362673e-01,  9.6028985649753618e-01};
    const double wts8[] = {1.0122853629037669e-01, 2.2238103445337434e-01,
                           3.1370664587788705e-01, 3.6268378337836177e-01,
                           3.6268378337836177e-01, 3.1370664587788705e-01,
                           2.2238103445337434e-01, 1.0122853629037669e-01};
    const auto& gl8 = gauss_legendre(8);
    REQUIRE(gl8.size() == 8);
    for (int i = 0; i < 8; ++i) {
        CHECK(gl8[std::size_t(i)].first == doctest::Approx(nodes8[i]).epsilon(1e-13));
        CHECK(gl8[std::size_t(i)].second == doctest::Approx(wts8[i]).epsilon(1e-13));
    }
    // order 8 integrates degree-15 polynomials exactly: x^14 on [-1,1]
    double acc = 0.0;
    for (const auto& [x, w] : gl8) acc += w * std::pow(x, 14);
    CHECK(acc == doctest::Approx(2.0 / 15.0).epsilon(1e-12));
    CHECK_THROWS(gauss_legendre(0));
}

TEST_CASE("euler-mascheroni constant") {
    CHECK(euler_gamma == doctest::Approx(0.57721566490153286).epsilon(1e-15));
}
