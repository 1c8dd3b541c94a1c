#pragma once

#include <cmath>
#include <vector>

#include "lora/params.hpp"
#include "lora/phy.hpp"
#include "lora/rng.hpp"

namespace lora {

// Link budget for one received symbol or frame. Per-sample SNR = 1/N0 with
// unit-modulus signal samples, so the time-domain noise has per-component
// variance N0/2. Infinite SNR/SIR are explicit flags, not sentinel dB values.
struct ChannelParams {
    double snr_db = 0.0;
    double sir_db = 0.0;
    bool interferer_present = false;
    bool noise_present = true;

    double n0() const { return std::pow(10.0, -snr_db / 10.0); }
    // per-component standard deviation of z
    double noise_sigma() const {
        return noise_present ? std::sqrt(0.5 * n0()) : 0.0;
    }
    // |h_I| = sqrt(P_I)
    double interferer_amplitude() const {
        return interferer_present ? std::pow(10.0, -sir_db / 20.0) : 0.0;
    }
};

// One interferer symbol boundary falling inside the symbol of interest:
// the first ceil(tau) samples carry the tail of s_i1, the rest the head of
// s_i2. omega is the interferer phase relative to the signal of interest.
struct InterfererState {
    int s_i1 = 0;
    int s_i2 = 0;
    double tau = 0.0;    // in [0, n)
    double omega = 0.0;  // in [0, 2*pi)
};

// Unit-modulus interferer samples over one symbol window; no amplitude or
// phase scaling applied here.
ComplexSignal interferer_symbol_signal(const LoraParams& params,
                                       const InterfererState& st);

// y[m] = e^{j phi} x_s[m] + |h_I| e^{j(phi - omega)} x_I[m] + z[m]
ComplexSignal received_symbol(const LoraParams& params, const ChannelParams& ch,
                              int s, const InterfererState& st, double phi,
                              TrialRng& rng);

// Allocation-free variant for Monte Carlo inner loops; y is resized to n.
void received_symbol_into(const LoraParams& params, const ChannelParams& ch,
                          int s, const InterfererState& st, double phi,
                          TrialRng& rng, ComplexSignal& y);

// Frame of F symbols with one interfering frame of equal length overlaid
// starting at sample frame_offset in [0, F*n); only the overlap receives
// interference, every overlapped symbol sees tau = frame_offset mod n.
ComplexSignal received_frame(const LoraParams& params, const ChannelParams& ch,
                             const std::vector<int>& symbols,
                             double frame_offset,
                             const std::vector<int>& interferer_symbols,
                             double omega, double phi, TrialRng& rng);

void received_frame_into(const LoraParams& params, const ChannelParams& ch,
                         const std::vector<int>& symbols, double frame_offset,
                         const std::vector<int>& interferer_symbols,
                         double omega, double phi, TrialRng& rng,
                         ComplexSignal& y);

}  // namespace lora
