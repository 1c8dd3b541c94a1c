#include "lora/phy.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace lora {

namespace {

struct SfCache {
    ComplexSignal upchirp;
    ComplexSignal tone;  // tone[j] = exp(+2*pi*i*j/n)
};

const SfCache& sf_cache(const LoraParams& params) {
    static std::map<int, SfCache> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(params.n);
    if (it != cache.end()) return it->second;
    SfCache c;
    int n = params.n;
    c.upchirp.resize(n);
    c.tone.resize(n);
    for (int k = 0; k < n; ++k) {
        c.upchirp[k] = chirp_sample(n, 0, double(k));
        double a = 2.0 * std::numbers::pi * double(k) / double(n);
        c.tone[k] = {std::cos(a), std::sin(a)};
    }
    return cache.emplace(n, std::move(c)).first->second;
}

}  // namespace

std::complex<double> chirp_sample(int n, int s, double u) {
    double phase = 2.0 * std::numbers::pi *
                   (u * u / (2.0 * n) + (double(s) / n - 0.5) * u);
    return {std::cos(phase), std::sin(phase)};
}

ComplexSignal modulate(const LoraParams& params, int s) {
    if (s < 0 || s >= params.n)
        throw std::invalid_argument("modulate: symbol out of range");
    const auto& c = sf_cache(params);
    int n = params.n;
    ComplexSignal x(n);
    // x_s[k] = upchirp[k] * exp(2*pi*i*s*k/n); index the cached tone
    // at (s*k) mod n so all values are table-exact.
    std::size_t idx = 0;
    for (int k = 0; k < n; ++k) {
        x[k] = c.upchirp[k] * c.tone[idx];
        idx += std::size_t(s);
        if (idx >= std::size_t(n)) idx -= std::size_t(n);
    }
    return x;
}

const ComplexSignal& reference_upchirp(const LoraParams& params) {
    return sf_cache(params).upchirp;
}

const ComplexSignal& unit_tone_table(const LoraParams& params) {
    return sf_cache(params).tone;
}

Demodulator::Demodulator(const LoraParams& params)
    : n_(params.n), plan_(std::size_t(params.n)), scratch_(params.n) {
    conj_ref_.resize(n_);
    const auto& up = reference_upchirp(params);
    for (int k = 0; k < n_; ++k) conj_ref_[k] = std::conj(up[k]);
}

DemodResult Demodulator::demodulate(const ComplexSignal& y) const {
    if ((int)y.size() != n_)
        throw std::invalid_argument("demodulate: length mismatch");
    for (int k = 0; k < n_; ++k) scratch_[k] = y[k] * conj_ref_[k];
    plan_.forward(scratch_.data());
    DemodResult r;
    r.bin_magnitudes.resize(n_);
    double best = -1.0;
    for (int k = 0; k < n_; ++k) {
        double m = std::abs(scratch_[k]);
        r.bin_magnitudes[k] = m;
        if (m > best) {
            best = m;
            r.s_hat = k;
        }
    }
    return r;
}

int Demodulator::detect(const ComplexSignal& y) const {
    for (int k = 0; k < n_; ++k) scratch_[k] = y[k] * conj_ref_[k];
    plan_.forward(scratch_.data());
    int arg = 0;
    double best = -1.0;
    for (int k = 0; k < n_; ++k) {
        double m = std::norm(scratch_[k]);
        if (m > best) {
            best = m;
            arg = k;
        }
    }
    return arg;
}

DemodResult demodulate_dft(const LoraParams& params, const ComplexSignal& y) {
    Demodulator d(params);
    return d.demodulate(y);
}

DemodResult demodulate_correlation(const LoraParams& params, const ComplexSignal& y) {
    int n = params.n;
    if ((int)y.size() != n)
        throw std::invalid_argument("demodulate_correlation: length mismatch");
    DemodResult r;
    r.bin_magnitudes.resize(n);
    double best = -1.0;
    for (int s = 0; s < n; ++s) {
        auto ref = modulate(params, s);
        std::complex<double> acc = 0.0;
        for (int k = 0; k < n; ++k) acc += y[k] * std::conj(ref[k]);
        double m = std::abs(acc);
        r.bin_magnitudes[s] = m;
        if (m > best) {
            best = m;
            r.s_hat = s;
        }
    }
    return r;
}

}  // namespace lora
