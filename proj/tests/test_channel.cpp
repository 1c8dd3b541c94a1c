#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "lora/channel.hpp"
#include "lora/phy.hpp"
#include "lora/rng.hpp"

using namespace lora;
using cd = std::complex<double>;

TEST_CASE("channel scalar helpers") {
    ChannelParams ch;
    ch.snr_db = -9.0;
    ch.sir_db = 3.0;
    CHECK(ch.n0() == doctest::Approx(std::pow(10.0, 0.9)).epsilon(1e-14));
    CHECK(ch.noise_sigma() == doctest::Approx(std::sqrt(0.5 * std::pow(10.0, 0.9))).epsilon(1e-14));
    CHECK(ch.interferer_amplitude() == 0.0);  // off by default
    ch.interferer_present = true;
    CHECK(ch.interferer_amplitude() == doctest::Approx(std::pow(10.0, -3.0 / 20.0)).epsilon(1e-14));
    ch.noise_present = false;
    CHECK(ch.noise_sigma() == 0.0);
}

TEST_CASE("interferer symbol signal is a unit-modulus spliced chirp") {
    auto p = make_params(7);
    TrialRng rng(55, 0);
    for (int rep = 0; rep < 10; ++rep) {
        InterfererState st{int(rng.below(128)), int(rng.below(128)), rng.u01() * 128.0, 0.0};
        auto sig = interferer_symbol_signal(p, st);
        REQUIRE(sig.size() == 128);
        for (const auto& v : sig) CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);
        // before the boundary the first symbol's chirp, after it the second's
        int c = int(std::ceil(st.tau));
        for (int m = 0; m < p.n; ++m) {
            cd want = m < c ? chirp_sample(p.n, st.s_i1, double(m) - (st.tau - p.n))
                            : chirp_sample(p.n, st.s_i2, double(m) - st.tau);
            CHECK(std::abs(sig[std::size_t(m)] - want) < 1e-12);
        }
    }
}

TEST_CASE("noise-free received symbol is the phased sum of its parts") {
    auto p = make_params(9);
    ChannelParams ch;
    ch.snr_db = 0.0;
    ch.sir_db = 3.0;
    ch.interferer_present = true;
    ch.noise_present = false;
    TrialRng rng(99, 0);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        int s = int(rng.below(std::uint64_t(p.n)));
        InterfererState st{int(rng.below(std::uint64_t(p.n))),
                           int(rng.below(std::uint64_t(p.n))), rng.u01() * p.n,
                           rng.u01() * 2.0 * std::numbers::pi};
        double phi = rng.u01() * 2.0 * std::numbers::pi;
        auto y = received_symbol(p, ch, s, st, phi, rng);
        auto soi = modulate(p, s);
        auto intf = interferer_symbol_signal(p, st);
        cd es = std::polar(1.0, phi);
        cd ei = ch.interferer_amplitude() * std::polar(1.0, phi - st.omega);
        for (int m = 0; m < p.n; ++m)
            worst = std::max(worst, std::abs(es * soi[std::size_t(m)] +
                                             ei * intf[std::size_t(m)] -
                                             y[std::size_t(m)]));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("noise-free interferer-free output is the pure rotated symbol") {
    auto p = make_params(6);
    ChannelParams ch;
    ch.noise_present = false;
    TrialRng rng(1, 1);
    double phi = 0.7;
    auto y = received_symbol(p, ch, 33, {0, 0, 0.0, 0.0}, phi, rng);
    auto soi = modulate(p, 33);
    for (int m = 0; m < p.n; ++m)
        CHECK(std::abs(y[std::size_t(m)] - std::polar(1.0, phi) * soi[std::size_t(m)]) < 1e-12);
}

TEST_CASE("noise calibration: per-component variance is N0/2") {
    auto p = make_params(7);
    ChannelParams ch;
    ch.snr_db = 3.0;  // N0 = 0.5012
    TrialRng rng(2024, 0);
    double mean = 0.0, m2 = 0.0;
    std::size_t count = 0;
    for (int rep = 0; rep < 200; ++rep) {
        auto y = received_symbol(p, ch, 5, {0, 0, 0.0, 0.0}, 0.0, rng);
        auto soi = modulate(p, 5);
        for (int m = 0; m < p.n; ++m) {
            cd z = y[std::size_t(m)] - soi[std::size_t(m)];
            for (double comp : {z.real(), z.imag()}) {
                mean += comp;
                m2 += comp * comp;
                ++count;
            }
        }
    }
    mean /= double(count);
    double var = m2 / double(count) - mean * mean;
    double want = 0.5 * ch.n0();
    CHECK(std::abs(mean) < 4.0 * std::sqrt(want / double(count)));
    CHECK(var == doctest::Approx(want).epsilon(0.03));
}

TEST_CASE("received frame layout and interferer clipping") {
    auto p = make_params(7);
    int n = p.n, f = 4;
    ChannelParams ch;
    ch.snr_db = 0.0;
    ch.sir_db = 0.0;
    ch.interferer_present = true;
    ch.noise_present = false;
    std::vector<int> syms{5, 100, 17, 63}, isyms{9, 40, 77, 2};
    TrialRng rng(7, 3);
    double off = 2.5 * n;
    auto y = received_frame(p, ch, syms, off, isyms, 1.1, 0.0, rng);
    REQUIRE(y.size() == std::size_t(f) * std::size_t(n));
    // before the interferer's leading edge the frame is exactly the clean signal
    for (int i = 0; i < f; ++i) {
        auto s = modulate(p, syms[std::size_t(i)]);
        for (int m = 0; m < n; ++m) {
            std::size_t g = std::size_t(i) * std::size_t(n) + std::size_t(m);
            if (double(i * n + m) < off)
                CHECK(std::abs(y[g] - s[std::size_t(m)]) < 1e-12);
        }
    }
    // per-sample rebuild of the whole frame, interferer slid to off and clipped
    ComplexSignal manual(std::size_t(f) * std::size_t(n), cd{0.0, 0.0});
    for (int i = 0; i < f; ++i) {
        auto s = modulate(p, syms[std::size_t(i)]);
        for (int m = 0; m < n; ++m)
            manual[std::size_t(i) * std::size_t(n) + std::size_t(m)] += s[std::size_t(m)];
    }
    cd h = ch.interferer_amplitude() * std::polar(1.0, -1.1);
    for (int i = 0; i < f; ++i) {
        double a = off + double(i) * n;
        int m0 = int(std::ceil(a));
        int m1 = std::min(int(std::ceil(a + n)), f * n);
        for (int m = m0; m < m1; ++m)
            manual[std::size_t(m)] += h * chirp_sample(n, isyms[std::size_t(i)], double(m) - a);
    }
    double worst = 0.0;
    for (std::size_t g = 0; g < manual.size(); ++g)
        worst = std::max(worst, std::abs(manual[g] - y[g]));
    CHECK(worst < 1e-9);
}

TEST_CASE("frame validation") {
    auto p = make_params(5);
    ChannelParams ch;
    std::vector<int> syms{1, 2, 3}, isyms{4, 5, 6};
    TrialRng rng(1, 0);
    CHECK_THROWS(received_frame(p, ch, syms, -1.0, isyms, 0.0, 0.0, rng));
    CHECK_THROWS(received_frame(p, ch, syms, 3.0 * p.n, isyms, 0.0, 0.0, rng));
    std::vector<int> short_isyms{4, 5};
    CHECK_THROWS(received_frame(p, ch, syms, 0.0, short_isyms, 0.0, 0.0, rng));
    std::vector<int> bad{1, 2, 99};
    CHECK_THROWS(received_frame(p, ch, bad, 0.0, isyms, 0.0, 0.0, rng));
}

TEST_CASE("synthesis is deterministic in the trial stream") {
    auto p = make_params(6);
    ChannelParams ch;
    ch.snr_db = -5.0;
    ch.sir_db = 1.0;
    ch.interferer_present = true;
    TrialRng r1(42, 9), r2(42, 9);
    auto y1 = received_symbol(p, ch, 11, {3, 4, 7.25, 0.5}, 0.1, r1);
    auto y2 = received_symbol(p, ch, 11, {3, 4, 7.25, 0.5}, 0.1, r2);
    for (std::size_t m = 0; m < y1.size(); ++m) CHECK(y1[m] == y2[m]);
}
