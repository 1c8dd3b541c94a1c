#include "lora/awgn_rates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "lora/special.hpp"

namespace lora {

namespace {

// Composite Gauss-Legendre nodes/weights over [0, upper] with panels of
// the given width (last panel clipped).
void build_panels(double upper, double panel_width, int order,
                  std::vector<double>& nodes, std::vector<double>& weights) {
    const auto& gl = gauss_legendre(order);
    nodes.clear();
    weights.clear();
    for (double a = 0.0; a < upper; a += panel_width) {
        double b = std::min(a + panel_width, upper);
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (const auto& [x, w] : gl) {
            nodes.push_back(mid + half * x);
            weights.push_back(half * w);
        }
    }
}

double integrate_error_prob(int n, double v, double panel_width) {
    double upper = std::max(v, 4.0) + 12.0;
    std::vector<double> y, w;
    build_panels(upper, panel_width, 8, y, w);
    std::vector<double> fcdf(y.size());
    rice_cdf_grid(y.data(), y.size(), v, fcdf.data());
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        double log_tail = (n - 2) * rayleigh_log_cdf(y[i]);
        acc += w[i] * fcdf[i] * (n - 1) * rayleigh_pdf(y[i]) *
               std::exp(log_tail);
    }
    return acc;
}

}  // namespace

double ser_awgn_exact(const AwgnSerQuery& q) {
    int n = q.params.n;
    double snr_lin = std::pow(10.0, q.snr_db / 10.0);
    double v = std::sqrt(2.0 * n * snr_lin);
    double coarse = integrate_error_prob(n, v, 0.5);
    double fine = integrate_error_prob(n, v, 0.25);
    if (std::abs(coarse - fine) > 1e-9 + 1e-6 * std::abs(fine))
        throw std::runtime_error("ser_awgn_exact: quadrature did not converge");
    return std::min(std::max(fine, 0.0), double(n - 1) / n);
}

double ser_awgn_gaussian_approx(const AwgnSerQuery& q) {
    int n = q.params.n;
    double s = n * std::pow(10.0, q.snr_db / 10.0);
    double h = harmonic_number(n - 1);
    double disc = h * h - std::numbers::pi * std::numbers::pi / 12.0;
    double num = std::sqrt(s) - std::pow(disc, 0.25);
    double den = std::sqrt(h - std::sqrt(disc) + 0.5);
    return qfunc(num / den);
}

double ser_awgn_concise_approx(const AwgnSerQuery& q) {
    int n = q.params.n;
    double s = n * std::pow(10.0, q.snr_db / 10.0);
    double loc = std::numbers::ln2 * q.params.sf + euler_gamma;
    return qfunc(std::sqrt(2.0 * s) - std::sqrt(2.0 * loc));
}

}  // namespace lora
