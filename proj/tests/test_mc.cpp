#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "lora/awgn_rates.hpp"
#include "lora/mc.hpp"

using namespace lora;

TEST_CASE("estimates are reproducible and independent of the thread split") {
    SinrQuery q{make_params(7), -9.0, 3.0};
    McConfig cfg;
    cfg.trials = 20000;
    cfg.seed = 5;
    auto a = mc_ser(q, cfg);
    auto b = mc_ser(q, cfg);
    CHECK(a.rate == b.rate);
    CHECK(a.errors == b.errors);
    McConfig c3 = cfg;
    c3.threads = 3;
    c3.round_size = 4096;
    auto c = mc_ser(q, c3);
    CHECK(c.errors == a.errors);
    CHECK(c.trials_run == a.trials_run);
}

TEST_CASE("simulation matches the exact AWGN rate") {
    SinrQuery q{make_params(7), -9.0, 0.0};
    q.interferer_present = false;
    McConfig cfg;
    cfg.trials = 200000;
    cfg.seed = 7;
    auto est = mc_ser(q, cfg);
    double exact = ser_awgn_exact({q.params, q.snr_db});
    double sd = std::sqrt(exact * (1.0 - exact) / double(est.trials_run));
    CHECK(std::abs(est.rate - exact) < 4.0 * sd);
    CHECK(est.trials_run == cfg.trials);
    CHECK(!est.early_stopped);
    CHECK(est.ci95_half_width ==
          doctest::Approx(1.96 * std::sqrt(est.rate * (1.0 - est.rate) /
                                           double(est.trials_run)))
              .epsilon(1e-12));
}

TEST_CASE("offset policy does not disturb the shared trial stream") {
    // with the interferer disabled, fractional and whole-chip offset engines
    // must make identical decisions trial by trial
    SinrQuery q{make_params(7), -9.0, 0.0};
    q.interferer_present = false;
    McConfig cfg;
    cfg.trials = 50000;
    cfg.seed = 9;
    auto a = mc_ser(q, cfg);
    auto b = mc_integer_tau_ser(q, cfg);
    CHECK(a.errors == b.errors);
    CHECK(a.rate == b.rate);
}

TEST_CASE("phase pinning keeps the trial count and stays deterministic") {
    SinrQuery q{make_params(7), -9.0, 3.0};
    McConfig cfg;
    cfg.trials = 30000;
    cfg.seed = 10;
    auto u = mc_ser(q, cfg);
    cfg.omega_mode = OmegaMode::fixed_zero;
    auto z1 = mc_ser(q, cfg);
    auto z2 = mc_ser(q, cfg);
    CHECK(u.trials_run == z1.trials_run);
    CHECK(z1.errors == z2.errors);
}

TEST_CASE("early stopping halts at the exact threshold trial") {
    SinrQuery q{make_params(7), -9.0, 0.0};
    q.interferer_present = false;
    McConfig cfg;
    cfg.trials = 1000000;
    cfg.seed = 21;
    cfg.stop_at_errors = 200;
    cfg.round_size = 4096;
    auto e1 = mc_ser(q, cfg);
    CHECK(e1.early_stopped);
    CHECK(e1.errors == 200);
    CHECK(e1.trials_run < cfg.trials);
    // the replay path (parallel rounds) lands on the same trial
    McConfig c3 = cfg;
    c3.threads = 3;
    auto e3 = mc_ser(q, c3);
    CHECK(e3.errors == e1.errors);
    CHECK(e3.trials_run == e1.trials_run);
    // threshold higher than the total error count: runs to completion
    McConfig big = cfg;
    big.trials = 20000;
    big.stop_at_errors = 100000000;
    auto full = mc_ser(q, big);
    CHECK(!full.early_stopped);
    CHECK(full.trials_run == big.trials);
}

TEST_CASE("progress callback reports monotone completed counts") {
    SinrQuery q{make_params(7), -9.0, 0.0};
    q.interferer_present = false;
    McConfig cfg;
    cfg.trials = 30000;
    cfg.seed = 3;
    cfg.round_size = 8192;
    std::vector<std::uint64_t> seen;
    cfg.progress = [&seen](std::uint64_t done, std::uint64_t total) {
        CHECK(total == 30000);
        seen.push_back(done);
    };
    mc_ser(q, cfg);
    REQUIRE(!seen.empty());
    CHECK(seen.back() == 30000);
    for (std::size_t i = 1; i < seen.size(); ++i) CHECK(seen[i] > seen[i - 1]);
}

TEST_CASE("frame simulation matches the independent-symbol identity") {
    SinrQuery q{make_params(7), -9.0, 0.0};
    q.interferer_present = false;
    q.frame_len = 5;
    McConfig cfg;
    cfg.trials = 30000;
    cfg.seed = 31;
    auto est = mc_fer(q, cfg);
    double ser = ser_awgn_exact({q.params, q.snr_db});
    double fer = -std::expm1(5.0 * std::log1p(-ser));
    double sd = std::sqrt(fer * (1.0 - fer) / double(est.trials_run));
    CHECK(std::abs(est.rate - fer) < 4.0 * sd);
}

TEST_CASE("frame simulation with an interferer stays sane and reproducible") {
    SinrQuery q{make_params(7), -10.0, 3.0};
    q.frame_len = 8;
    McConfig cfg;
    cfg.trials = 5000;
    cfg.seed = 33;
    auto a = mc_fer(q, cfg);
    auto b = mc_fer(q, cfg);
    CHECK(a.rate == b.rate);
    CHECK(a.rate > 0.0);
    CHECK(a.rate < 1.0);
}

TEST_CASE("configuration validation") {
    SinrQuery q{make_params(5), -2.0, 0.0};
    McConfig cfg;
    cfg.trials = 0;
    CHECK_THROWS(mc_ser(q, cfg));
    cfg.trials = 100;
    cfg.stop_at_errors = 0;
    CHECK_THROWS(mc_ser(q, cfg));
    cfg.stop_at_errors.reset();
    cfg.tau_grid_step = -0.5;
    CHECK_THROWS(mc_ser(q, cfg));
    cfg.tau_grid_step = 200.0;  // coarser than the whole offset range
    CHECK_THROWS(mc_ser(q, cfg));
    cfg.tau_grid_step = 0.0;  // continuous offsets are fine
    CHECK(mc_ser(q, cfg).trials_run == 100);
    SinrQuery qf = q;
    qf.frame_len = 0;
    CHECK_THROWS(mc_fer(qf, cfg));
}
