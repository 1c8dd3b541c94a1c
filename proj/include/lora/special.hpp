#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace lora {

// Gaussian tail probability Q(x) = P(Z > x).
double qfunc(double x);

// log I0(z), z >= 0 (modified Bessel, order zero), relative error < 1e-9.
double log_bessel_i0(double z);

// exp(-z) I0(z), the exponentially scaled Bessel; cheap for large z.
double bessel_i0e(double z);

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

// Rice(v, 1) density/CDF: the distribution of |v + CN(0, 2)| with unit
// per-component variance. v = 0 degenerates to Rayleigh(1).
double rice_pdf(double y, double v);
double rice_cdf(double y, double v);

double rayleigh_pdf(double y);
double rayleigh_cdf(double y);
double rayleigh_log_cdf(double y);

// Batch Rice CDF on an ascending grid, one noncentrality per call.
// Shares the Poisson mixture across grid points; abs error ~1e-12.
void rice_cdf_grid(const double* y, std::size_t count, double v, double* out);

// H_n = sum_{k=1..n} 1/k by direct summation.
double harmonic_number(int n);

inline constexpr double euler_gamma = 0.5772156649015328606;

// Gauss-Legendre nodes/weights on [-1, 1]; cached per order.
const std::vector<std::pair<double, double>>& gauss_legendre(int order);

}  // namespace lora
