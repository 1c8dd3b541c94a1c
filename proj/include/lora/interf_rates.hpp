#pragma once

#include <optional>
#include <vector>

#include "lora/params.hpp"

namespace lora {

enum class RateMetric { ser, fer };

struct SinrQuery {
    LoraParams params;
    double snr_db = 0.0;
    double sir_db = 0.0;
    bool interferer_present = true;
    double epsilon = 0.2;  // chip-offset grid step for the approximations
    int frame_len = 1;
};

// Per-(interferer class, offset) symbol error term of the peak-bin model.
struct ConditionalSer {
    double value = 0.0;
    int s_i = 0;
    double tau = 0.0;
};

// Quadrature knobs for the exact paths. Defaults are the shipped accuracy;
// tests drop them uniformly (the full/reduced identity holds at any
// setting because both paths share node placement).
struct ExactQuadrature {
    int tau_nodes_per_unit = 8;  // Gauss-Legendre order per unit chip
    int omega_nodes = 16;        // uniform phase nodes over [0, 2 pi)
    int y_nodes_per_unit = 6;    // Gauss-Legendre order per unit-width panel
};

// Exact error probability conditioned on one interference pattern,
// averaged over the signal symbol and the interferer phase:
//   1 - (1/n) sum_s E_omega integral f_Rice(y; v_s) prod_{k != s}
//       F_Rice(y; v_k) dy
// with v_k = h |R_k| / sigma and the signal bin folding the interferer
// phasor into v_s.
double exact_conditional_error(const SinrQuery& q,
                               const std::vector<double>& magnitudes,
                               const ExactQuadrature& quad = {});

// Brute-force average over all (s_i1, s_i2) pairs and tau in [0, n).
// Reference tier only; guarded to sf <= 6.
double ser_full_small_n(const SinrQuery& q, const ExactQuadrature& quad = {});

// Class-reduced equivalent: one representative per difference class and
// shift branch, offsets folded around (n-1)/2 with the (n-1, n) tail kept
// separate. Agrees with ser_full_small_n to roundoff. Guarded to sf <= 8.
double ser_full_reduced(const SinrQuery& q, const ExactQuadrature& quad = {});

// Exact path restricted to chip-aligned offsets (integer tau, classes
// merge): (1/(n*(n/2))) sum_{s_i} sum_{L < n/2} P(err | pattern(s_i,0,L)).
double ser_integer_tau_exact(const SinrQuery& q,
                             const ExactQuadrature& quad = {});

// Peak-bin interference approximation on the epsilon grid:
//   (eps/(n*(n/2))) sum_{s_i} sum_{tau in T} Q((n - h |R_peak|)/sqrt(n N0)),
// T = {j*eps : j*eps < (n-1)/2}. chip_aligned swaps the grid for integer
// offsets {0..n/2-1} with uniform weights.
double ser_interference_approx(const SinrQuery& q, bool chip_aligned = false);

// P_N + (1 - P_N) P_I with P_N the AWGN Gaussian approximation.
double ser_combined_approx(const SinrQuery& q, bool chip_aligned = false);

// Per-offset error probability (1/n) sum_{s_i} Q(...) for any tau in [0, n).
double ser_conditional_on_tau(const SinrQuery& q, double tau);

// Single class term of ser_conditional_on_tau.
ConditionalSer ser_conditional_class(const SinrQuery& q, int s_i, double tau);

// Frame error probability for frame_len symbols with one equal-length
// interfering frame: uniform mixture over the overlap count F_i of
//   (2 eps/n) sum_tau [1 - (1 - q_tau)^{F_i} (1 - P_N)^F],
// i.e. every symbol carries the noise term and overlapped symbols carry the
// interference term on top. At frame_len == 1 this matches
// ser_combined_approx up to the outer grid's (n-1)/n mass (see README).
double fer_approx(const SinrQuery& q);

struct SnrSearchRange {
    double lo_db = -40.0;
    double hi_db = 10.0;
};

// Smallest SNR meeting target_rate on the chosen analytic curve, bisected
// to 0.01 dB. Empty when the curve does not cross the target inside the
// range (e.g. an interference floor above the target).
std::optional<double> required_snr(const SinrQuery& q, double target_rate,
                                   RateMetric metric,
                                   SnrSearchRange range = {});

}  // namespace lora
