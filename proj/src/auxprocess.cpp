#include "powerdiff/auxprocess.hpp"

#include <cmath>
#include <complex>

#include "powerdiff/errors.hpp"

namespace powerdiff {

namespace {

void check_exponent(double h) {
    if (!(h >= 0.0 && h <= 1.0)) throw ConfigError("exponent h must lie in [0, 1]");
}

// y^h with the end points done exactly, so eta at h = 1 is invariant under
// rescaling the path by a power of two.
double power_of(double y, double log_y, double h) {
    if (h == 0.0) return 1.0;
    if (h == 1.0) return y;
    return std::exp(h * log_y);
}

}  // namespace

std::vector<double> normalized_increments(std::span<const double> values, double h) {
    std::vector<double> eta;
    if (values.size() < 2) return eta;
    eta.reserve(values.size() - 1);
    for (std::size_t k = 1; k < values.size(); ++k) {
        const double prev = values[k - 1];
        eta.push_back((values[k] - prev) / power_of(prev, std::log(prev), h));
    }
    return eta;
}

void step_terms(std::span<const double> values, std::span<const double> log_values, double h,
                std::vector<double>& out) {
    const std::size_t n = values.size() < 2 ? 0 : values.size() - 1;
    out.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double eta = (values[k + 1] - values[k]) / power_of(values[k], log_values[k], h);
        out[k] = std::log1p(eta * eta);
    }
}

AuxSeries compute_aux(const SamplePath& path, double h) {
    check_exponent(h);
    if (path.values.size() < 2) throw DegenerateError("path needs at least two observations");
    path.validate();

    AuxSeries aux;
    aux.h = h;
    aux.eta = normalized_increments(path.values, h);
    const std::size_t n = aux.eta.size();
    aux.v.resize(n);
    aux.log_modulus_running.resize(n);

    // Neumaier-compensated running sum keeps the half-sum accurate for long paths.
    double sum = 0.0;
    double carry = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double term = std::log1p(aux.eta[k] * aux.eta[k]);
        aux.v[k] = term;
        const double t = sum + term;
        carry += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
        aux.log_modulus_running[k] = 0.5 * (sum + carry);
    }
    aux.v_bar = (sum + carry) / static_cast<double>(n);
    return aux;
}

double log_modulus_complex_oracle(std::span<const double> eta) {
    // Extended precision product, rescaled by exact powers of two so long
    // paths cannot overflow.
    std::complex<long double> z(1.0L, 0.0L);
    long double log_scale = 0.0L;
    const long double ln2 = std::log(2.0L);
    for (double e : eta) {
        z *= std::complex<long double>(1.0L, static_cast<long double>(e));
        const long double mag = std::max(std::fabs(z.real()), std::fabs(z.imag()));
        if (mag > 0x1p+64L || (mag < 0x1p-64L && mag > 0.0L)) {
            int exponent = 0;
            std::frexp(mag, &exponent);
            z = {std::ldexp(z.real(), -exponent), std::ldexp(z.imag(), -exponent)};
            log_scale += static_cast<long double>(exponent) * ln2;
        }
    }
    // |z|^2 - 1 = (re - 1)(re + 1) + im^2 avoids cancellation near |z| = 1.
    const long double re = z.real();
    const long double im = z.imag();
    long double log_mod;
    if (log_scale == 0.0L) {
        log_mod = 0.5L * std::log1p((re - 1.0L) * (re + 1.0L) + im * im);
    } else {
        log_mod = 0.5L * std::log(re * re + im * im) + log_scale;
    }
    return static_cast<double>(log_mod);
}

}  // namespace powerdiff
