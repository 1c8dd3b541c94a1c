#include "lora/channel.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace lora {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> unit_phasor(double angle) {
    return {std::cos(angle), std::sin(angle)};
}

void check_symbol(const LoraParams& params, int s, const char* what) {
    if (s < 0 || s >= params.n) throw std::invalid_argument(what);
}

// Adds scale * chirp_sample(n, s, (m - a)) to y[m] for m in [m0, m1).
// Uses chirp(s, m - a) = upchirp[m mod n] * G[m] with G geometric of ratio
// exp(2*pi*i*(s - a)/n); exact start value, two multiplies per sample.
// Accumulated unit-modulus drift over a frame is ~1e-12, irrelevant for
// Monte Carlo noise floors.
void add_chirp_run(const LoraParams& params, int s, double a,
                   std::complex<double> scale, int m0, int m1,
                   ComplexSignal& y) {
    if (m0 >= m1) return;
    int n = params.n;
    const ComplexSignal& up = reference_upchirp(params);
    std::complex<double> g =
        chirp_sample(n, s, double(m0) - a) * std::conj(up[m0 % n]);
    std::complex<double> ratio = unit_phasor(kTwoPi * (double(s) - a) / n);
    for (int m = m0; m < m1; ++m) {
        y[m] += scale * up[m % n] * g;
        g *= ratio;
    }
}

// Adds scale * modulate(s)[k] to y[base + k], table-exact (no phase drift).
void add_symbol_exact(const LoraParams& params, int s,
                      std::complex<double> scale, int base, ComplexSignal& y) {
    int n = params.n;
    const ComplexSignal& up = reference_upchirp(params);
    const ComplexSignal& tone = unit_tone_table(params);
    std::size_t idx = 0;
    for (int k = 0; k < n; ++k) {
        y[base + k] += scale * up[k] * tone[idx];
        idx += std::size_t(s);
        if (idx >= std::size_t(n)) idx -= std::size_t(n);
    }
}

}  // namespace

ComplexSignal interferer_symbol_signal(const LoraParams& params,
                                       const InterfererState& st) {
    check_symbol(params, st.s_i1, "interferer_symbol_signal: s_i1 out of range");
    check_symbol(params, st.s_i2, "interferer_symbol_signal: s_i2 out of range");
    if (st.tau < 0.0 || st.tau >= params.n)
        throw std::invalid_argument("interferer_symbol_signal: tau out of [0, n)");
    int n = params.n;
    int c = int(std::ceil(st.tau));
    ComplexSignal x(n);
    for (int m = 0; m < c; ++m)
        x[m] = chirp_sample(n, st.s_i1, double(m) + n - st.tau);
    for (int m = c; m < n; ++m)
        x[m] = chirp_sample(n, st.s_i2, double(m) - st.tau);
    return x;
}

void received_symbol_into(const LoraParams& params, const ChannelParams& ch,
                          int s, const InterfererState& st, double phi,
                          TrialRng& rng, ComplexSignal& y) {
    check_symbol(params, s, "received_symbol: s out of range");
    int n = params.n;
    y.assign(n, {0.0, 0.0});
    add_symbol_exact(params, s, unit_phasor(phi), 0, y);
    if (ch.interferer_present) {
        check_symbol(params, st.s_i1, "received_symbol: s_i1 out of range");
        check_symbol(params, st.s_i2, "received_symbol: s_i2 out of range");
        if (st.tau < 0.0 || st.tau >= n)
            throw std::invalid_argument("received_symbol: tau out of [0, n)");
        std::complex<double> hi =
            ch.interferer_amplitude() * unit_phasor(phi - st.omega);
        int c = int(std::ceil(st.tau));
        add_chirp_run(params, st.s_i1, st.tau - n, hi, 0, c, y);
        add_chirp_run(params, st.s_i2, st.tau, hi, c, n, y);
    }
    double sigma = ch.noise_sigma();
    if (sigma > 0.0) {
        for (int m = 0; m < n; ++m) {
            auto [zr, zi] = rng.normal2();
            y[m] += std::complex<double>(sigma * zr, sigma * zi);
        }
    }
}

ComplexSignal received_symbol(const LoraParams& params, const ChannelParams& ch,
                              int s, const InterfererState& st, double phi,
                              TrialRng& rng) {
    ComplexSignal y;
    received_symbol_into(params, ch, s, st, phi, rng, y);
    return y;
}

void received_frame_into(const LoraParams& params, const ChannelParams& ch,
                         const std::vector<int>& symbols, double frame_offset,
                         const std::vector<int>& interferer_symbols,
                         double omega, double phi, TrialRng& rng,
                         ComplexSignal& y) {
    if (symbols.size() != interferer_symbols.size())
        throw std::invalid_argument("received_frame: frame length mismatch");
    int n = params.n;
    int f = int(symbols.size());
    if (frame_offset < 0.0 || frame_offset >= double(f) * n)
        throw std::invalid_argument("received_frame: frame_offset out of range");
    y.assign(std::size_t(f) * n, {0.0, 0.0});
    std::complex<double> hsig = unit_phasor(phi);
    for (int i = 0; i < f; ++i) {
        check_symbol(params, symbols[i], "received_frame: symbol out of range");
        add_symbol_exact(params, symbols[i], hsig, i * n, y);
    }
    if (ch.interferer_present) {
        std::complex<double> hi =
            ch.interferer_amplitude() * unit_phasor(phi - omega);
        for (int i = 0; i < f; ++i) {
            check_symbol(params, interferer_symbols[i],
                         "received_frame: interferer symbol out of range");
            // interferer symbol i occupies [offset + i*n, offset + (i+1)*n)
            double a = frame_offset + double(i) * n;
            int m0 = int(std::ceil(a));
            int m1 = std::min(int(std::ceil(a + n)), f * n);
            if (m0 >= f * n) break;
            add_chirp_run(params, interferer_symbols[i], a, hi, m0, m1, y);
        }
    }
    double sigma = ch.noise_sigma();
    if (sigma > 0.0) {
        for (std::size_t m = 0; m < y.size(); ++m) {
            auto [zr, zi] = rng.normal2();
            y[m] += std::complex<double>(sigma * zr, sigma * zi);
        }
    }
}

ComplexSignal received_frame(const LoraParams& params, const ChannelParams& ch,
                             const std::vector<int>& symbols,
                             double frame_offset,
                             const std::vector<int>& interferer_symbols,
                             double omega, double phi, TrialRng& rng) {
    ComplexSignal y;
    received_frame_into(params, ch, symbols, frame_offset, interferer_symbols,
                        omega, phi, rng, y);
    return y;
}

}  // namespace lora
