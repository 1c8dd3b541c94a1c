#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "lora/interf_rates.hpp"

namespace lora {

enum class OmegaMode {
    uniform,     // interferer phase drawn uniform on [0, 2pi) per trial
    fixed_zero,  // phase pinned to 0 (the draw still happens, so the two
                 // modes consume identical randomness per trial)
};

struct McConfig {
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    // Interferer offsets are drawn from the lattice {0, step, 2*step, ...}
    // spanning the admissible range; step = 0 means continuous offsets.
    double tau_grid_step = 0.1;
    OmegaMode omega_mode = OmegaMode::uniform;
    // If set, stop at the end of the trial where the cumulative error count
    // (in trial order) first reaches this value. The result is identical
    // regardless of thread count.
    std::optional<std::uint64_t> stop_at_errors;
    std::uint64_t round_size = 65536;
    int threads = 0;  // 0 = hardware concurrency
    std::function<void(std::uint64_t, std::uint64_t)> progress;  // (done, total)
};

struct McEstimate {
    double rate = 0.0;
    std::uint64_t trials_run = 0;
    std::uint64_t errors = 0;
    double ci95_half_width = 0.0;
    bool early_stopped = false;
};

// Symbol error rate with fractional interferer offsets per cfg.tau_grid_step.
McEstimate mc_ser(const SinrQuery& q, const McConfig& cfg);

// Same engine restricted to whole-chip offsets (tau_grid_step forced to 1).
McEstimate mc_integer_tau_ser(const SinrQuery& q, const McConfig& cfg);

// Frame error rate over q.frame_len symbols; the interfering frame slides
// across [0, frame_len * n) with one phase draw per trial.
McEstimate mc_fer(const SinrQuery& q, const McConfig& cfg);

}  // namespace lora
