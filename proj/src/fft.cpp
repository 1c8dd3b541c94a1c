#include "lora/fft.hpp"

#include <numbers>
#include <stdexcept>

namespace lora {

FftPlan::FftPlan(std::size_t n) : n_(n) {
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("FftPlan: size must be a power of two");
    rev_.resize(n);
    std::size_t bits = 0;
    while ((std::size_t(1) << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < bits; ++b)
            if (i & (std::size_t(1) << b)) r |= std::size_t(1) << (bits - 1 - b);
        rev_[i] = r;
    }
    // tw_ holds e^{-2 pi i j / n} for j in [0, n/2)
    tw_.resize(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
        double a = -2.0 * std::numbers::pi * double(j) / double(n);
        tw_[j] = {std::cos(a), std::sin(a)};
    }
}

void FftPlan::forward(std::complex<double>* data) const {
    for (std::size_t i = 0; i < n_; ++i)
        if (rev_[i] > i) std::swap(data[i], data[rev_[i]]);
    for (std::size_t len = 2; len <= n_; len <<= 1) {
        std::size_t step = n_ / len;
        for (std::size_t start = 0; start < n_; start += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                auto u = data[start + j];
                auto v = data[start + j + len / 2] * tw_[j * step];
                data[start + j] = u + v;
                data[start + j + len / 2] = u - v;
            }
        }
    }
}

}  // namespace lora
