#pragma once

#include <utility>
#include <vector>

#include "lora/params.hpp"

namespace lora {

// Frequency-bin magnitudes produced by one same-rate interferer symbol
// pair (s_i1 tail, s_i2 head) at chip offset tau, after dechirping with
// the reference upchirp and taking a non-normalized n-point DFT.
struct InterferencePattern {
    std::vector<double> magnitudes;  // |R_k|, k = 0..n-1
    int s_i1 = 0;
    int s_i2 = 0;
    double tau = 0.0;
};

// Difference class of an interferer symbol pair under the cyclic shift
// (s_i1, s_i2) -> (s_i1 + delta, s_i2 + delta) mod n.
struct EquivalenceClassPair {
    int s_i = 0;      // (s_i1 - s_i2) mod n
    int card_y1 = 0;  // n - s_i
    int card_y2 = 0;  // s_i
};

struct ShiftedPair {
    int s_i1 = 0;
    int s_i2 = 0;
    bool same_class = false;  // true when s_i1' >= s_i2' after the shift
};

// Internal terms of one bin of the closed form:
// |R_k|^2 = a1^2 + a2^2 + 2 a1 a2 cos(theta1 - theta2), and
// theta1 - theta2 = pi * (x + parity) (mod 2 pi) with x in [-1, 1].
// Exposing (parity, x) lets callers form cos(theta1 - theta2 + shift)
// without re-deriving the phase bookkeeping.
struct PatternTerms {
    double a1 = 0.0;
    double a2 = 0.0;
    int parity = 0;
    double x = 0.0;
};

// Dirichlet-kernel amplitude sin(pi (s-k-tau) M / n) / sin(pi (s-k-tau) / n)
// with the signed L'Hopital value at the poles (integer tau only).
double dirichlet_amplitude(int n, int s, int k, double tau, int segment_len);

// The two segment amplitudes at bin k: a1 over ceil(tau) samples of s_i1,
// a2 over n - ceil(tau) samples of s_i2.
std::pair<double, double> amplitude_terms(const LoraParams& params, int s_i1,
                                          int s_i2, double tau, int k);

PatternTerms pattern_terms(const LoraParams& params, int s_i1, int s_i2,
                           double tau, int k);

double cos_theta_diff(const LoraParams& params, int s_i1, int s_i2, double tau,
                      int k);

// All n magnitudes via the closed form; matches the brute-force DFT of the
// dechirped interferer to ~1e-9 absolute.
InterferencePattern pattern_magnitudes(const LoraParams& params, int s_i1,
                                       int s_i2, double tau);

EquivalenceClassPair equivalence_class(const LoraParams& params, int s_i1,
                                       int s_i2);

ShiftedPair equivalence_shift(const LoraParams& params, int s_i1, int s_i2,
                              double tau, int delta);

// (n-1) - tau; offsets tau and (n-1) - tau generate permutations of the
// same magnitude multiset. Only defined on [0, n-1).
double mirror_offset(const LoraParams& params, double tau);

}  // namespace lora
