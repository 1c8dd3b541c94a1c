#include "lora/mc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "lora/channel.hpp"
#include "lora/phy.hpp"
#include "lora/rng.hpp"

namespace lora {

namespace {

struct TrialCtx {
    LoraParams params;
    ChannelParams ch;
    double step;  // offset lattice step, 0 = continuous
    bool omega_uniform;
    std::uint64_t seed;
    int frame_len;  // 0 = single-symbol trials
};

struct WorkerState {
    Demodulator demod;
    ComplexSignal buf;
    ComplexSignal sym;
    std::vector<int> syms, isyms;
    explicit WorkerState(const LoraParams& p) : demod(p) {}
};

std::uint64_t lattice_points(double span, double step) {
    auto k = std::llround(span / step);
    if (k < 1) throw std::invalid_argument("mc: offset step exceeds range");
    return std::uint64_t(k);
}

// Every trial consumes the same draws in the same order (symbols, offset,
// phase, then noise), so estimates with different offset/phase policies are
// coupled: they differ only through the quantities a policy actually changes.
bool run_symbol_trial(const TrialCtx& c, std::uint64_t trial, WorkerState& ws) {
    TrialRng rng(c.seed, trial);
    int n = c.params.n;
    int s = int(rng.below(std::uint64_t(n)));
    int si1 = int(rng.below(std::uint64_t(n)));
    int si2 = int(rng.below(std::uint64_t(n)));
    double tau = c.step > 0.0
                     ? double(rng.below(lattice_points(n, c.step))) * c.step
                     : rng.u01() * n;
    double w = rng.u01() * 2.0 * std::numbers::pi;
    InterfererState st{si1, si2, tau, c.omega_uniform ? w : 0.0};
    received_symbol_into(c.params, c.ch, s, st, 0.0, rng, ws.buf);
    return ws.demod.detect(ws.buf) != s;
}

bool run_frame_trial(const TrialCtx& c, std::uint64_t trial, WorkerState& ws) {
    TrialRng rng(c.seed, trial);
    int n = c.params.n, f = c.frame_len;
    ws.syms.resize(std::size_t(f));
    ws.isyms.resize(std::size_t(f));
    for (int i = 0; i < f; ++i) ws.syms[std::size_t(i)] = int(rng.below(std::uint64_t(n)));
    for (int i = 0; i < f; ++i) ws.isyms[std::size_t(i)] = int(rng.below(std::uint64_t(n)));
    double span = double(f) * n;
    double off = c.step > 0.0
                     ? double(rng.below(lattice_points(span, c.step))) * c.step
                     : rng.u01() * span;
    double w = rng.u01() * 2.0 * std::numbers::pi;
    received_frame_into(c.params, c.ch, ws.syms, off, ws.isyms,
                        c.omega_uniform ? w : 0.0, 0.0, rng, ws.buf);
    bool err = false;
    for (int i = 0; i < f && !err; ++i) {
        ws.sym.assign(ws.buf.begin() + std::ptrdiff_t(i) * n,
                      ws.buf.begin() + std::ptrdiff_t(i + 1) * n);
        err = ws.demod.detect(ws.sym) != ws.syms[std::size_t(i)];
    }
    return err;
}

McEstimate run_mc(const TrialCtx& c, const McConfig& cfg) {
    if (cfg.trials == 0) throw std::invalid_argument("mc: trials must be > 0");
    if (cfg.stop_at_errors && *cfg.stop_at_errors == 0)
        throw std::invalid_argument("mc: stop_at_errors must be >= 1");
    if (c.step < 0.0) throw std::invalid_argument("mc: negative offset step");

    unsigned hw = std::thread::hardware_concurrency();
    int threads = cfg.threads > 0 ? cfg.threads : int(std::max(1u, hw));
    std::uint64_t round = std::max<std::uint64_t>(1, cfg.round_size);

    std::vector<WorkerState> states;
    states.reserve(std::size_t(threads));
    for (int i = 0; i < threads; ++i) states.emplace_back(c.params);

    auto trial_fn = [&c](std::uint64_t t, WorkerState& ws) {
        return c.frame_len > 0 ? run_frame_trial(c, t, ws)
                               : run_symbol_trial(c, t, ws);
    };

    McEstimate est;
    std::uint64_t done = 0, errors = 0;
    while (done < cfg.trials) {
        std::uint64_t this_round = std::min<std::uint64_t>(round, cfg.trials - done);
        std::uint64_t base = done;
        std::uint64_t round_errors = 0;
        if (threads == 1 || this_round < 2048) {
            for (std::uint64_t t = 0; t < this_round; ++t)
                round_errors += trial_fn(base + t, states[0]) ? 1 : 0;
        } else {
            std::vector<std::uint64_t> counts(std::size_t(threads), 0);
            std::vector<std::thread> pool;
            std::uint64_t chunk = (this_round + std::uint64_t(threads) - 1) / std::uint64_t(threads);
            for (int i = 0; i < threads; ++i) {
                std::uint64_t b = base + std::uint64_t(i) * chunk;
                std::uint64_t e = std::min(base + this_round, b + chunk);
                if (b >= e) break;
                pool.emplace_back([&trial_fn, &counts, &states, i, b, e] {
                    std::uint64_t cnt = 0;
                    for (std::uint64_t t = b; t < e; ++t)
                        cnt += trial_fn(t, states[std::size_t(i)]) ? 1 : 0;
                    counts[std::size_t(i)] = cnt;
                });
            }
            for (auto& th : pool) th.join();
            for (auto cnt : counts) round_errors += cnt;
        }
        errors += round_errors;
        done += this_round;
        if (cfg.progress) cfg.progress(done, cfg.trials);
        if (cfg.stop_at_errors && errors >= *cfg.stop_at_errors) {
            // Replay the round in trial order to locate the exact trial where
            // the cumulative count reached the threshold; this keeps the
            // stopped estimate independent of the thread partition.
            std::uint64_t cum = errors - round_errors;
            for (std::uint64_t t = 0; t < this_round; ++t) {
                cum += trial_fn(base + t, states[0]) ? 1 : 0;
                if (cum >= *cfg.stop_at_errors) {
                    done = base + t + 1;
                    errors = cum;
                    break;
                }
            }
            est.early_stopped = true;
            break;
        }
    }
    est.trials_run = done;
    est.errors = errors;
    est.rate = double(errors) / double(done);
    est.ci95_half_width =
        1.96 * std::sqrt(std::max(est.rate * (1.0 - est.rate), 0.0) / double(done));
    return est;
}

TrialCtx make_ctx(const SinrQuery& q, const McConfig& cfg, int frame_len) {
    ChannelParams ch;
    ch.snr_db = q.snr_db;
    ch.sir_db = q.sir_db;
    ch.interferer_present = q.interferer_present;
    ch.noise_present = true;
    return {q.params, ch, cfg.tau_grid_step,
            cfg.omega_mode == OmegaMode::uniform, cfg.seed, frame_len};
}

}  // namespace

McEstimate mc_ser(const SinrQuery& q, const McConfig& cfg) {
    return run_mc(make_ctx(q, cfg, 0), cfg);
}

McEstimate mc_integer_tau_ser(const SinrQuery& q, const McConfig& cfg) {
    McConfig whole = cfg;
    whole.tau_grid_step = 1.0;
    return run_mc(make_ctx(q, whole, 0), whole);
}

McEstimate mc_fer(const SinrQuery& q, const McConfig& cfg) {
    if (q.frame_len < 1)
        throw std::invalid_argument("mc_fer: frame_len must be >= 1");
    return run_mc(make_ctx(q, cfg, q.frame_len), cfg);
}

}  // namespace lora
