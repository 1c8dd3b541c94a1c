#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace lora {

// Radix-2 DIT plan for power-of-two sizes. forward() uses the
// engineering sign convention, X[k] = sum_m x[m] exp(-2*pi*i*k*m/N),
// with no scaling.
class FftPlan {
  public:
    explicit FftPlan(std::size_t n);

    std::size_t size() const { return n_; }

    // in-place transform of data[0..n)
    void forward(std::complex<double>* data) const;

  private:
    std::size_t n_;
    std::vector<std::size_t> rev_;
    std::vector<std::complex<double>> tw_;
};

}  // namespace lora
