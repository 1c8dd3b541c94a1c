#pragma once

#include <complex>
#include <vector>

#include "lora/fft.hpp"
#include "lora/params.hpp"

namespace lora {

using ComplexSignal = std::vector<std::complex<double>>;

// Chirp value at (possibly fractional) sample position u for symbol s:
// exp(2*pi*i*(u^2/(2n) + (s/n - 1/2)*u)). Integer u = 0..n-1 reproduces
// modulate(params, s)[u].
std::complex<double> chirp_sample(int n, int s, double u);

// Unit-energy-per-sample baseband chirp for symbol s, length n.
ComplexSignal modulate(const LoraParams& params, int s);

// modulate(params, 0)
const ComplexSignal& reference_upchirp(const LoraParams& params);

// tone[j] = exp(+2*pi*i*j/n); modulate(s)[k] == upchirp[k] * tone[(s*k) % n]
const ComplexSignal& unit_tone_table(const LoraParams& params);

struct DemodResult {
    int s_hat = 0;
    std::vector<double> bin_magnitudes;
};

// Dechirp + DFT demodulator with cached plan and reference. Ties in the
// magnitude argmax resolve to the lowest bin index.
class Demodulator {
  public:
    explicit Demodulator(const LoraParams& params);

    DemodResult demodulate(const ComplexSignal& y) const;

    // argmax only, no magnitude vector allocation; hot path for MC
    int detect(const ComplexSignal& y) const;

  private:
    int n_;
    FftPlan plan_;
    ComplexSignal conj_ref_;
    mutable ComplexSignal scratch_;
};

// One-shot convenience wrapper around Demodulator.
DemodResult demodulate_dft(const LoraParams& params, const ComplexSignal& y);

// O(n^2) matched-filter bank, kept as an oracle for the DFT path.
DemodResult demodulate_correlation(const LoraParams& params, const ComplexSignal& y);

}  // namespace lora
