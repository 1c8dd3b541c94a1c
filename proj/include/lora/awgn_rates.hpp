#pragma once

#include "lora/params.hpp"

namespace lora {

struct AwgnSerQuery {
    LoraParams params;
    double snr_db = 0.0;
};

// Exact noncoherent SER: P(err) = E[ P(max noise bin beats signal bin) ]
// via the order-statistics integral
//   integral of F_Rice(y; v) * (n-1) f_Ray(y) F_Ray(y)^(n-2) dy
// with v = sqrt(2 n snr_lin), everything normalized to unit bin noise.
// Throws std::runtime_error if the quadrature refinement disagrees.
double ser_awgn_exact(const AwgnSerQuery& q);

// Gaussian tail approximation driven by the mean/variance of the maximum
// of n-1 Rayleigh bins (harmonic-number moments).
double ser_awgn_gaussian_approx(const AwgnSerQuery& q);

// Coarser two-term approximation using the Gumbel-limit location only.
double ser_awgn_concise_approx(const AwgnSerQuery& q);

}  // namespace lora
