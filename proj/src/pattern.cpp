#include "lora/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace lora {

namespace {

constexpr double kPi = std::numbers::pi;

// sin(pi * (t_int - g) / n) with g = g_hi + g_lo held as an exact double
// pair. The argument is folded into (-n/2, n/2] by assembling the residual
// from exact pieces before the final sin, so accuracy is uniform even when
// t_int - g sits next to a multiple of n.
double sin_reduced(int n, std::int64_t t_int, double g_hi, double g_lo) {
    std::int64_t two_n = 2LL * n;
    std::int64_t t = t_int % two_n;
    if (t < 0) t += two_n;
    double rho = (double(t) - g_hi) - g_lo;
    if (rho > n) {
        t -= two_n;
        rho = (double(t) - g_hi) - g_lo;
    }
    if (rho > 0.5 * n)
        return std::sin(kPi * (((double(n) - double(t)) + g_hi) + g_lo) / n);
    if (rho < -0.5 * n)
        return -std::sin(kPi * (((double(n) + double(t)) - g_hi) - g_lo) / n);
    return std::sin(kPi * rho / n);
}

int parity_mod2(std::int64_t v) { return int(((v % 2) + 2) % 2); }

}  // namespace

double dirichlet_amplitude(int n, int s, int k, double tau, int segment_len) {
    int L = int(std::floor(tau));
    double lam = tau - L;
    std::int64_t i = std::int64_t(s) - k - L;
    double den = sin_reduced(n, i, lam, 0.0);
    if (std::abs(den) < 1e-12 && std::abs(tau - std::round(tau)) < 1e-12) {
        // pole: s - k - tau == 0 or -n; L'Hopital gives a signed segment_len
        std::int64_t wrap =
            (std::int64_t(s) - k - std::llround(tau) == 0) ? 0 : 1;
        double sign = (wrap * (segment_len - 1)) % 2 == 0 ? 1.0 : -1.0;
        return double(segment_len) * sign;
    }
    double hi = double(segment_len) * lam;
    double lo = std::fma(double(segment_len), lam, -hi);
    double num = sin_reduced(n, i * segment_len, hi, lo);
    return num / den;
}

std::pair<double, double> amplitude_terms(const LoraParams& params, int s_i1,
                                          int s_i2, double tau, int k) {
    int c = int(std::ceil(tau));
    return {dirichlet_amplitude(params.n, s_i1, k, tau, c),
            dirichlet_amplitude(params.n, s_i2, k, tau, params.n - c)};
}

PatternTerms pattern_terms(const LoraParams& params, int s_i1, int s_i2,
                           double tau, int k) {
    int n = params.n;
    int c = int(std::ceil(tau));
    PatternTerms t;
    t.a1 = dirichlet_amplitude(n, s_i1, k, tau, c);
    t.a2 = dirichlet_amplitude(n, s_i2, k, tau, n - c);
    int L = int(std::floor(tau));
    double lam = tau - L;
    std::int64_t d = std::int64_t(s_i1) - s_i2;
    std::int64_t ceil_t = (lam == 0.0) ? L : L + 1;
    // theta1 - theta2 = pi * (lam + d*(2*tau - ceil(tau) + 1)/n + s_i2 - k - L)
    // split into the integer part cint and fractional leftovers, all exact.
    std::int64_t cint = 2LL * L - ceil_t + 1;
    std::int64_t t_int = (d * cint) % (2LL * n);
    if (t_int < 0) t_int += 2LL * n;
    double x = lam + double(t_int) / n + (2.0 * double(d) * lam) / n;
    t.parity = parity_mod2(-std::int64_t(L) + s_i2 - k);
    x -= 2.0 * std::floor(x / 2.0);
    if (x > 1.0) x -= 2.0;
    t.x = x;
    return t;
}

double cos_theta_diff(const LoraParams& params, int s_i1, int s_i2, double tau,
                      int k) {
    PatternTerms t = pattern_terms(params, s_i1, s_i2, tau, k);
    double ax = std::abs(t.x);
    // cos(pi x) through sin near the zero crossing keeps full accuracy
    double val = ax <= 0.5 ? std::sin(kPi * (0.5 - ax))
                           : -std::sin(kPi * (ax - 0.5));
    return t.parity ? -val : val;
}

InterferencePattern pattern_magnitudes(const LoraParams& params, int s_i1,
                                       int s_i2, double tau) {
    if (tau < 0.0 || tau >= params.n)
        throw std::invalid_argument("pattern_magnitudes: tau out of [0, n)");
    int n = params.n;
    InterferencePattern p;
    p.s_i1 = s_i1;
    p.s_i2 = s_i2;
    p.tau = tau;
    p.magnitudes.resize(n);
    for (int k = 0; k < n; ++k) {
        PatternTerms t = pattern_terms(params, s_i1, s_i2, tau, k);
        double ax = std::abs(t.x);
        double ct = ax <= 0.5 ? std::sin(kPi * (0.5 - ax))
                              : -std::sin(kPi * (ax - 0.5));
        if (t.parity) ct = -ct;
        double m2 = t.a1 * t.a1 + t.a2 * t.a2 + 2.0 * t.a1 * t.a2 * ct;
        p.magnitudes[k] = std::sqrt(std::max(m2, 0.0));
    }
    return p;
}

EquivalenceClassPair equivalence_class(const LoraParams& params, int s_i1,
                                       int s_i2) {
    int n = params.n;
    int d = ((s_i1 - s_i2) % n + n) % n;
    return {d, n - d, d};
}

ShiftedPair equivalence_shift(const LoraParams& params, int s_i1, int s_i2,
                              double /*tau*/, int delta) {
    int n = params.n;
    if (delta < 0 || delta >= n)
        throw std::invalid_argument("equivalence_shift: delta out of [0, n)");
    ShiftedPair r;
    r.s_i1 = (s_i1 + delta) % n;
    r.s_i2 = (s_i2 + delta) % n;
    r.same_class = r.s_i1 >= r.s_i2;
    return r;
}

double mirror_offset(const LoraParams& params, double tau) {
    if (tau < 0.0 || tau >= params.n - 1)
        throw std::invalid_argument("mirror_offset: tau out of [0, n-1)");
    return double(params.n - 1) - tau;
}

}  // namespace lora
