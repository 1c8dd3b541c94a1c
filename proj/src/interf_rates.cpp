#include "lora/interf_rates.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "lora/awgn_rates.hpp"
#include "lora/pattern.hpp"
#include "lora/special.hpp"

namespace lora {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Link {
    double n0;
    double sigma;  // bin-domain per-component noise sd, sqrt(n*N0/2)
    double h;      // interferer amplitude |h_I|
};

Link link_scalars(const SinrQuery& q) {
    double n0 = std::pow(10.0, -q.snr_db / 10.0);
    return {n0, std::sqrt(0.5 * q.params.n * n0),
            q.interferer_present ? std::pow(10.0, -q.sir_db / 20.0) : 0.0};
}

struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double t = x - c;
        double u = s + t;
        c = (u - s) - t;
        s = u;
    }
};

struct YGrid {
    std::vector<double> y, w;
};

// Unit-width Gauss-Legendre panels covering every y where either factor of
// the conditional integral is non-negligible.
YGrid build_ygrid(int n, double sigma, double h, int order) {
    YGrid g;
    double upper = double(n) * (1.0 + h) / sigma + 10.0;
    const auto& gl = gauss_legendre(order);
    for (double a = 0.0; a < upper; a += 1.0) {
        double b = std::min(a + 1.0, upper);
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (const auto& [x, wt] : gl) {
            g.y.push_back(mid + half * x);
            g.w.push_back(half * wt);
        }
    }
    return g;
}

double conditional_error_impl(int n, double sigma, double h,
                              const std::vector<double>& mags,
                              const YGrid& grid, int omega_nodes) {
    std::size_t ny = grid.y.size();
    std::vector<double> logf(std::size_t(n) * ny);
    std::vector<double> tmp(ny);
    for (int k = 0; k < n; ++k) {
        rice_cdf_grid(grid.y.data(), ny, h * mags[k] / sigma, tmp.data());
        double* row = &logf[std::size_t(k) * ny];
        for (std::size_t i = 0; i < ny; ++i)
            row[i] = std::log(std::max(tmp[i], 1e-300));
    }
    std::vector<double> logsum(ny, 0.0);
    for (int k = 0; k < n; ++k) {
        const double* row = &logf[std::size_t(k) * ny];
        for (std::size_t i = 0; i < ny; ++i) logsum[i] += row[i];
    }

    if (h == 0.0) omega_nodes = 1;  // phase enters only through h*R_s
    std::vector<double> wprod(ny);
    KahanSum acc;
    for (int s = 0; s < n; ++s) {
        const double* lf = &logf[std::size_t(s) * ny];
        // quadrature weight times prod_{k != s} F_k(y)
        for (std::size_t i = 0; i < ny; ++i)
            wprod[i] = grid.w[i] * std::exp(logsum[i] - lf[i]);
        double rs = h * mags[s];
        for (int j = 0; j < omega_nodes; ++j) {
            double omega = kTwoPi * (j + 0.5) / omega_nodes;
            double v2 = double(n) * n + rs * rs + 2.0 * n * rs * std::cos(omega);
            double v = std::sqrt(std::max(v2, 0.0)) / sigma;
            double p = 0.0;
            for (std::size_t i = 0; i < ny; ++i) {
                double d = grid.y[i] - v;
                if (d > 9.0 || d < -9.0) continue;  // pdf below 5e-18
                p += wprod[i] * rice_pdf(grid.y[i], v);
            }
            acc.add(p);
        }
    }
    double perr = 1.0 - acc.s / (double(n) * omega_nodes);
    return std::min(std::max(perr, 0.0), 1.0);
}

struct Seg {
    double a, b;
};

// [0, n) as unit segments, the one containing (n-1)/2 split there so the
// node set is the folded set plus its exact mirror images.
std::vector<Seg> full_tau_segments(int n) {
    std::vector<Seg> segs;
    for (int j = 0; j < n; ++j) {
        if (j == n / 2 - 1) {
            double m = double(n - 1) / 2.0;
            segs.push_back({double(j), m});
            segs.push_back({m, double(j + 1)});
        } else {
            segs.push_back({double(j), double(j + 1)});
        }
    }
    return segs;
}

std::vector<Seg> folded_tau_segments(int n) {
    std::vector<Seg> segs;
    for (int j = 0; j + 1 < n / 2; ++j)
        segs.push_back({double(j), double(j + 1)});
    segs.push_back({double(n / 2 - 1), double(n - 1) / 2.0});
    return segs;
}

// sum of w * p_err(pattern(s1, s2, tau)) over GL nodes of the segments
double tau_segment_sum(const SinrQuery& q, const Link& lk, const YGrid& grid,
                       const ExactQuadrature& quad, int s1, int s2,
                       const std::vector<Seg>& segs) {
    const auto& gl = gauss_legendre(quad.tau_nodes_per_unit);
    KahanSum acc;
    for (const Seg& seg : segs) {
        double mid = 0.5 * (seg.a + seg.b), half = 0.5 * (seg.b - seg.a);
        for (const auto& [x, wt] : gl) {
            double tau = mid + half * x;
            auto pat = pattern_magnitudes(q.params, s1, s2, tau);
            acc.add(half * wt *
                    conditional_error_impl(q.params.n, lk.sigma, lk.h,
                                           pat.magnitudes, grid,
                                           quad.omega_nodes));
        }
    }
    return acc.s;
}

double no_interferer_exact(const SinrQuery& q, const ExactQuadrature& quad) {
    Link lk = link_scalars(q);
    YGrid grid = build_ygrid(q.params.n, lk.sigma, 0.0, quad.y_nodes_per_unit);
    std::vector<double> zeros(q.params.n, 0.0);
    return conditional_error_impl(q.params.n, lk.sigma, 0.0, zeros, grid, 1);
}

// |A1 + A2| at the strongest bin of the dechirped interferer when the
// aligned branch carries symbol 0: bin (n - round(tau)) mod n.
double peak_bin_value(int n, int s_i, double tau) {
    int kb = (n - int(std::floor(tau + 0.5))) % n;
    int c = int(std::ceil(tau));
    double a1 = dirichlet_amplitude(n, s_i, kb, tau, c);
    double a2 = dirichlet_amplitude(n, 0, kb, tau, n - c);
    return std::abs(a1 + a2);
}

// Histogram of peak values over (grid offset, class) pairs; the Q-sum of
// the interference approximation is then a few-microsecond pass over the
// bins for any (snr, sir), instead of O(n * |T|) kernel evaluations.
struct PeakHist {
    std::vector<std::uint32_t> cnt;
    double bin_width;
    std::uint64_t terms;
};

constexpr int kPeakBins = 65536;

const PeakHist& peak_hist(int n, double eps) {
    static std::map<std::pair<int, std::uint64_t>, PeakHist> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, std::bit_cast<std::uint64_t>(eps));
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    PeakHist ph;
    ph.cnt.assign(kPeakBins, 0);
    ph.bin_width = double(n) / kPeakBins;
    ph.terms = 0;
    double lim = double(n - 1) / 2.0;
    for (std::uint64_t j = 0;; ++j) {
        double tau = double(j) * eps;
        if (tau >= lim) break;
        for (int si = 0; si < n; ++si) {
            double t = peak_bin_value(n, si, tau);
            int idx = std::min(kPeakBins - 1, int(t / ph.bin_width));
            ++ph.cnt[std::size_t(idx)];
        }
        ph.terms += std::uint64_t(n);
    }
    return cache.emplace(key, std::move(ph)).first->second;
}

void check_epsilon(const SinrQuery& q) {
    if (!(q.epsilon > 0.0 && q.epsilon <= 1.0))
        throw std::invalid_argument("epsilon must be in (0, 1]");
}

}  // namespace

double exact_conditional_error(const SinrQuery& q,
                               const std::vector<double>& magnitudes,
                               const ExactQuadrature& quad) {
    if ((int)magnitudes.size() != q.params.n)
        throw std::invalid_argument("exact_conditional_error: length mismatch");
    Link lk = link_scalars(q);
    YGrid grid = build_ygrid(q.params.n, lk.sigma, lk.h, quad.y_nodes_per_unit);
    return conditional_error_impl(q.params.n, lk.sigma, lk.h, magnitudes, grid,
                                  quad.omega_nodes);
}

double ser_full_small_n(const SinrQuery& q, const ExactQuadrature& quad) {
    int n = q.params.n;
    if (!q.interferer_present) return no_interferer_exact(q, quad);
    if (q.params.sf > 6)
        throw std::invalid_argument("ser_full_small_n: sf > 6 (oracle tier)");
    Link lk = link_scalars(q);
    YGrid grid = build_ygrid(n, lk.sigma, lk.h, quad.y_nodes_per_unit);
    auto segs = full_tau_segments(n);
    KahanSum acc;
    for (int s1 = 0; s1 < n; ++s1)
        for (int s2 = 0; s2 < n; ++s2)
            acc.add(tau_segment_sum(q, lk, grid, quad, s1, s2, segs));
    return acc.s / (double(n) * n * n);
}

double ser_full_reduced(const SinrQuery& q, const ExactQuadrature& quad) {
    int n = q.params.n;
    if (!q.interferer_present) return no_interferer_exact(q, quad);
    if (q.params.sf > 8)
        throw std::invalid_argument("ser_full_reduced: sf > 8 (oracle tier)");
    Link lk = link_scalars(q);
    YGrid grid = build_ygrid(n, lk.sigma, lk.h, quad.y_nodes_per_unit);
    auto folded = folded_tau_segments(n);
    std::vector<Seg> tail{{double(n - 1), double(n)}};
    KahanSum acc;
    for (int d = 0; d < n; ++d) {
        // class d splits into the unwrapped branch (weight n-d, rep (d, 0))
        // and the wrapped one (weight d, rep (0, n-d)); at d = 0 only the
        // first exists.
        struct Rep {
            int s1, s2, weight;
        };
        std::vector<Rep> reps;
        reps.push_back({d, 0, n - d});
        if (d > 0) reps.push_back({0, n - d, d});
        for (const Rep& r : reps) {
            double t =
                2.0 * tau_segment_sum(q, lk, grid, quad, r.s1, r.s2, folded) +
                tau_segment_sum(q, lk, grid, quad, r.s1, r.s2, tail);
            acc.add(double(r.weight) * t);
        }
    }
    return acc.s / (double(n) * n * n);
}

double ser_integer_tau_exact(const SinrQuery& q, const ExactQuadrature& quad) {
    int n = q.params.n;
    if (!q.interferer_present) return no_interferer_exact(q, quad);
    if (q.params.sf > 8)
        throw std::invalid_argument("ser_integer_tau_exact: sf > 8");
    Link lk = link_scalars(q);
    YGrid grid = build_ygrid(n, lk.sigma, lk.h, quad.y_nodes_per_unit);
    KahanSum acc;
    for (int si = 0; si < n; ++si) {
        for (int off = 0; off < n / 2; ++off) {
            auto pat = pattern_magnitudes(q.params, si, 0, double(off));
            acc.add(conditional_error_impl(n, lk.sigma, lk.h, pat.magnitudes,
                                           grid, quad.omega_nodes));
        }
    }
    return acc.s / (double(n) * (n / 2));
}

double ser_interference_approx(const SinrQuery& q, bool chip_aligned) {
    if (!q.interferer_present) return 0.0;
    check_epsilon(q);
    int n = q.params.n;
    Link lk = link_scalars(q);
    double eps = chip_aligned ? 1.0 : q.epsilon;
    const PeakHist& ph = peak_hist(n, eps);
    double denom = std::sqrt(double(n) * lk.n0);
    KahanSum acc;
    for (int b = 0; b < kPeakBins; ++b) {
        if (!ph.cnt[std::size_t(b)]) continue;
        double t = (b + 0.5) * ph.bin_width;
        acc.add(double(ph.cnt[std::size_t(b)]) *
                qfunc((double(n) - lk.h * t) / denom));
    }
    double p = acc.s * eps / (double(n) * (double(n) / 2.0));
    return std::min(p, 1.0);
}

double ser_combined_approx(const SinrQuery& q, bool chip_aligned) {
    double pn = ser_awgn_gaussian_approx({q.params, q.snr_db});
    double pi = ser_interference_approx(q, chip_aligned);
    return pn + (1.0 - pn) * pi;
}

ConditionalSer ser_conditional_class(const SinrQuery& q, int s_i, double tau) {
    int n = q.params.n;
    Link lk = link_scalars(q);
    double t = peak_bin_value(n, s_i, tau);
    double val =
        q.interferer_present
            ? qfunc((double(n) - lk.h * t) / std::sqrt(double(n) * lk.n0))
            : 0.0;
    return {val, s_i, tau};
}

double ser_conditional_on_tau(const SinrQuery& q, double tau) {
    if (tau < 0.0 || tau >= q.params.n)
        throw std::invalid_argument("ser_conditional_on_tau: tau out of [0, n)");
    if (!q.interferer_present) return 0.0;
    int n = q.params.n;
    Link lk = link_scalars(q);
    double denom = std::sqrt(double(n) * lk.n0);
    KahanSum acc;
    for (int si = 0; si < n; ++si)
        acc.add(qfunc((double(n) - lk.h * peak_bin_value(n, si, tau)) / denom));
    return acc.s / n;
}

double fer_approx(const SinrQuery& q) {
    if (q.frame_len < 1)
        throw std::invalid_argument("fer_approx: frame_len must be >= 1");
    int f = q.frame_len;
    double pn = ser_awgn_gaussian_approx({q.params, q.snr_db});
    if (!q.interferer_present) return -std::expm1(f * std::log1p(-pn));
    check_epsilon(q);
    int n = q.params.n;
    double eps = q.epsilon;
    double lim = double(n - 1) / 2.0;
    // log(1 - q_tau) over the offset grid, reused across overlap counts
    std::vector<double> lq;
    for (std::uint64_t j = 0;; ++j) {
        double tau = double(j) * eps;
        if (tau >= lim) break;
        lq.push_back(std::log1p(-ser_conditional_on_tau(q, tau)));
    }
    // every symbol keeps its noise survival factor; an overlapped symbol
    // additionally survives the interferer, so the F_i branch survives with
    // (1 - q_tau)^Fi (1 - pn)^F
    double lpn = std::log1p(-pn);
    KahanSum outer;
    for (int fi = 1; fi <= f; ++fi) {
        KahanSum inner;
        for (double l : lq)
            inner.add(-std::expm1(fi * l + double(f) * lpn));
        outer.add(inner.s * 2.0 * eps / n);
    }
    return std::min(std::max(outer.s / f, 0.0), 1.0);
}

std::optional<double> required_snr(const SinrQuery& q, double target_rate,
                                   RateMetric metric, SnrSearchRange range) {
    if (!(target_rate > 0.0 && target_rate < 1.0))
        throw std::invalid_argument("required_snr: target must be in (0, 1)");
    auto curve = [&](double snr_db) {
        SinrQuery t = q;
        t.snr_db = snr_db;
        return metric == RateMetric::ser ? ser_combined_approx(t)
                                         : fer_approx(t);
    };
    double lo = range.lo_db, hi = range.hi_db;
    if (!(curve(lo) >= target_rate && curve(hi) <= target_rate))
        return std::nullopt;  // target not bracketed (e.g. interference floor)
    while (hi - lo > 0.01) {
        double mid = 0.5 * (lo + hi);
        (curve(mid) > target_rate ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace lora
