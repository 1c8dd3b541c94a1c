#include "lora/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace lora {

double qfunc(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double log_bessel_i0(double z) {
    if (z < 0) z = -z;
    if (z <= 30.0) {
        // power series sum_k (z^2/4)^k / (k!)^2; largest term ~1e11 at z=30
        double q = 0.25 * z * z;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 120; ++k) {
            term *= q / (double(k) * double(k));
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return std::log(sum);
    }
    // asymptotic: I0(z) ~ e^z / sqrt(2 pi z) * (1 + 1/8z + 9/128z^2 + ...)
    double r = 1.0 / z;
    double corr = 1.0 + r * (0.125 + r * (0.0703125 + r * (0.0732421875
                 + r * (0.112152099609375 + r * (0.227108001708984375
                 + r * 0.57250142097473145)))));
    return z - 0.5 * std::log(2.0 * std::numbers::pi * z) + std::log(corr);
}

double bessel_i0e(double z) {
    if (z < 0) z = -z;
    if (z <= 30.0) {
        double q = 0.25 * z * z;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 120; ++k) {
            term *= q / (double(k) * double(k));
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return sum * std::exp(-z);
    }
    double r = 1.0 / z;
    double corr = 1.0 + r * (0.125 + r * (0.0703125 + r * (0.0732421875
                 + r * (0.112152099609375 + r * (0.227108001708984375
                 + r * 0.57250142097473145)))));
    return corr / std::sqrt(2.0 * std::numbers::pi * z);
}

namespace {

// lower incomplete gamma by series, valid x < a + 1
double gamma_p_series(double a, double x) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 2000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("gamma_p series did not converge");
}

// upper incomplete gamma by Lentz continued fraction, valid x >= a + 1
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 2000; ++i) {
        double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16)
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("gamma_q continued fraction did not converge");
}

}  // namespace

double gamma_p(double a, double x) {
    if (x < 0 || a <= 0) throw std::invalid_argument("gamma_p domain");
    if (x == 0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double rayleigh_pdf(double y) { return y <= 0 ? 0.0 : y * std::exp(-0.5 * y * y); }
double rayleigh_cdf(double y) { return y <= 0 ? 0.0 : -std::expm1(-0.5 * y * y); }
double rayleigh_log_cdf(double y) {
    if (y <= 0) return -std::numeric_limits<double>::infinity();
    return std::log(-std::expm1(-0.5 * y * y));
}

double rice_pdf(double y, double v) {
    if (y <= 0) return 0.0;
    if (v == 0) return rayleigh_pdf(y);
    double d = y - v;
    return y * std::exp(-0.5 * d * d) * bessel_i0e(y * v);
}

void rice_cdf_grid(const double* y, std::size_t count, double v, double* out) {
    if (v == 0) {
        for (std::size_t i = 0; i < count; ++i) out[i] = rayleigh_cdf(y[i]);
        return;
    }
    // Noncentral chi^2(2 dof) as a Poisson(lam)-weighted mixture of central
    // chi^2(2j+2): F(y) = sum_j pois(j; lam) P(j+1, y^2/2), lam = v^2/2.
    double lam = 0.5 * v * v;
    int jlo = std::max(0, int(std::floor(lam - 10.0 * std::sqrt(lam) - 25.0)));
    int jhi = int(std::ceil(lam + 10.0 * std::sqrt(lam) + 35.0));
    int nj = jhi - jlo + 1;
    static thread_local std::vector<double> w;
    w.resize(size_t(nj));
    double lw = -lam + jlo * std::log(lam) - std::lgamma(double(jlo) + 1.0);
    w[0] = std::exp(lw);
    for (int j = 1; j < nj; ++j) w[size_t(j)] = w[size_t(j - 1)] * lam / double(jlo + j);

    for (std::size_t i = 0; i < count; ++i) {
        double x = 0.5 * y[i] * y[i];
        if (y[i] <= 0 || x == 0) { out[i] = 0.0; continue; }
        // g = P(jlo+1, x), then step g down the mixture with the term
        // recurrence t_{a+1} = t_a * x / (a+1), a = jlo+1, jlo+2, ...
        double g = gamma_p(double(jlo) + 1.0, x);
        double lt = -x + (jlo + 1) * std::log(x) - std::lgamma(double(jlo) + 2.0);
        double t = std::exp(lt);
        double acc = 0.0;
        for (int j = 0; j < nj; ++j) {
            acc += w[size_t(j)] * g;
            g -= t;
            if (g < 0) g = 0;
            t *= x / double(jlo + j + 2);
        }
        out[i] = std::min(acc, 1.0);
    }
}

double rice_cdf(double y, double v) {
    double out;
    rice_cdf_grid(&y, 1, v, &out);
    return out;
}

double harmonic_number(int n) {
    if (n < 0) throw std::invalid_argument("harmonic_number domain");
    double h = 0.0;
    for (int k = n; k >= 1; --k) h += 1.0 / double(k);  // small terms first
    return h;
}

const std::vector<std::pair<double, double>>& gauss_legendre(int order) {
    static std::map<int, std::vector<std::pair<double, double>>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;
    if (order < 1) throw std::invalid_argument("gauss_legendre order");

    std::vector<std::pair<double, double>> nw(static_cast<std::size_t>(order));
    int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton from the Chebyshev-like initial guess
        double x = std::cos(std::numbers::pi * (double(i) + 0.75) / (double(order) + 0.5));
        double pp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < order; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - double(j) * p2) / double(j + 1);
            }
            pp = double(order) * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        double wgt = 2.0 / ((1.0 - x * x) * pp * pp);
        nw[size_t(i)] = {-x, wgt};
        nw[size_t(order - 1 - i)] = {x, wgt};
    }
    auto [pos, _] = cache.emplace(order, std::move(nw));
    return pos->second;
}

}  // namespace lora
