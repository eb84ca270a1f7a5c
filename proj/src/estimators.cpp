#include "powerdiff/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "powerdiff/auxprocess.hpp"
#include "powerdiff/errors.hpp"

namespace powerdiff {

namespace {

void check_unit(double value, const char* name) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw ConfigError(std::string(name) + " must lie in [0, 1]");
    }
}

void check_grid(int grid_n) {
    if (grid_n < 2) throw ConfigError("grid_n must be >= 2");
}

std::vector<double> log_values(const SamplePath& path) {
    std::vector<double> out(path.values.size());
    std::transform(path.values.begin(), path.values.end(), out.begin(), [](double y) { return std::log(y); });
    return out;
}

bool is_constant(const SamplePath& path) {
    const double first = path.values.front();
    return std::all_of(path.values.begin(), path.values.end(), [first](double y) { return y == first; });
}

double sum_of(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
}

double grid_point(int k, int grid_n) { return static_cast<double>(k) / static_cast<double>(grid_n); }

/// Index of the smallest objective, first one on ties.
std::size_t argmin(const std::vector<CurvePoint>& curve) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (curve[i].objective < curve[best].objective) best = i;
    }
    return best;
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::SigmaKnownGamma: return "sigma-known-gamma";
        case Method::GammaRatio: return "gamma-ratio";
        case Method::JointVariance: return "joint";
        case Method::GammaKnownSigma: return "gamma-known-sigma";
        case Method::IntegratedSigmaSq: return "integrated";
        case Method::CirBackout: return "cir-backout";
    }
    return "unknown";
}

std::optional<double> EstimateResult::objective_min() const {
    if (objective_curve.empty()) return std::nullopt;
    return objective_curve[argmin(objective_curve)].objective;
}

EstimateResult sigma_known_gamma(const SamplePath& path, double gamma, double h) {
    check_unit(gamma, "gamma");
    check_unit(h, "h");
    path.validate();

    const std::vector<double> logs = log_values(path);
    std::vector<double> v;
    step_terms(path.values, logs, h, v);
    const double numerator = sum_of(v);

    double weights = 0.0;
    const double power = 2.0 * (gamma - h);
    for (std::size_t k = 1; k < logs.size(); ++k) weights += std::exp(power * logs[k]);

    EstimateResult r;
    r.method = Method::SigmaKnownGamma;
    r.sigma_hat = std::sqrt(numerator / (path.delta * weights));
    r.zero_variance = numerator == 0.0;
    return r;
}

EstimateResult gamma_ratio_estimate(const SamplePath& path, double h1, double h2, int grid_n) {
    check_unit(h1, "h1");
    check_unit(h2, "h2");
    check_grid(grid_n);
    if (h1 == h2) throw ConfigError("h1 and h2 must differ");
    path.validate();

    const std::vector<double> logs = log_values(path);
    std::vector<double> v;
    step_terms(path.values, logs, h1, v);
    const double rhs_num = sum_of(v);
    step_terms(path.values, logs, h2, v);
    const double rhs_den = sum_of(v);
    if (rhs_num == 0.0 || rhs_den == 0.0) {
        throw DegenerateError("gamma-ratio estimate needs a non-constant path");
    }
    const double target = std::log(rhs_num) - std::log(rhs_den);

    // Centre the log-values so y^p stays in range; the centre contributes
    // 2 (h2 - h1) mid to log LHS.
    const auto [lo, hi] = std::minmax_element(logs.begin() + 1, logs.end());
    const double mid = 0.5 * (*lo + *hi);
    const std::size_t n = logs.size() - 1;
    std::vector<double> base1(n), base2(n), step(n), w(n, 1.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = logs[k + 1] - mid;
        base1[k] = std::exp(-2.0 * h1 * s);
        base2[k] = std::exp(-2.0 * h2 * s);
        step[k] = std::exp(2.0 * s / static_cast<double>(grid_n));
    }
    const double offset = 2.0 * (h2 - h1) * mid;

    EstimateResult r;
    r.method = Method::GammaRatio;
    r.grid_n = grid_n;
    r.objective_curve.reserve(static_cast<std::size_t>(grid_n));
    for (int j = 1; j <= grid_n; ++j) {
        double s1 = 0.0;
        double s2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            w[k] *= step[k];
            s1 += base1[k] * w[k];
            s2 += base2[k] * w[k];
        }
        const double lhs = (offset + std::log(s1)) - std::log(s2);
        r.objective_curve.push_back({grid_point(j, grid_n), std::fabs(lhs - target)});
    }
    r.gamma_hat = r.objective_curve[argmin(r.objective_curve)].h;
    return r;
}

std::string objective_scale_name(ObjectiveScale s) {
    return s == ObjectiveScale::Relative ? "relative" : "absolute";
}

EstimateResult joint_estimate(const SamplePath& path, int grid_n, ObjectiveScale scale) {
    check_grid(grid_n);
    path.validate();
    if (is_constant(path)) throw DegenerateError("joint estimate needs a non-constant path");

    const std::vector<double> logs = log_values(path);
    std::vector<double> v;
    EstimateResult r;
    r.method = Method::JointVariance;
    r.grid_n = grid_n;
    r.objective_curve.reserve(static_cast<std::size_t>(grid_n));
    std::vector<double> means;
    means.reserve(static_cast<std::size_t>(grid_n));
    for (int j = 1; j <= grid_n; ++j) {
        const double h = grid_point(j, grid_n);
        step_terms(path.values, logs, h, v);
        const double mean = sum_of(v) / static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        if (scale == ObjectiveScale::Relative) ss /= mean * mean;
        r.objective_curve.push_back({h, ss});
        means.push_back(mean);
    }
    const std::size_t best = argmin(r.objective_curve);
    r.gamma_hat = r.objective_curve[best].h;
    r.sigma_hat = std::sqrt(means[best] / path.delta);
    return r;
}

EstimateResult gamma_known_sigma(const SamplePath& path, double sigma, int grid_n, ObjectiveScale scale) {
    check_grid(grid_n);
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be a finite positive number");
    path.validate();
    if (is_constant(path)) throw DegenerateError("gamma estimate needs a non-constant path");

    const std::vector<double> logs = log_values(path);
    const double sigma_sq = sigma * sigma;
    std::vector<double> v;
    EstimateResult r;
    r.method = Method::GammaKnownSigma;
    r.grid_n = grid_n;
    r.objective_curve.reserve(static_cast<std::size_t>(grid_n));
    for (int j = 1; j <= grid_n; ++j) {
        const double h = grid_point(j, grid_n);
        step_terms(path.values, logs, h, v);
        double ss = 0.0;
        for (double x : v) {
            const double r_k = x / path.delta - sigma_sq;
            ss += r_k * r_k;
        }
        if (scale == ObjectiveScale::Relative) {
            const double level = sum_of(v) / (static_cast<double>(v.size()) * path.delta);
            ss /= level * level;
        }
        r.objective_curve.push_back({h, ss});
    }
    r.gamma_hat = r.objective_curve[argmin(r.objective_curve)].h;
    return r;
}

double integrated_sigma_sq(const SamplePath& path, double gamma) {
    check_unit(gamma, "gamma");
    const AuxSeries aux = compute_aux(path, gamma);
    return 2.0 * aux.log_modulus_running.back();
}

EstimateResult integrated_estimate(const SamplePath& path, double gamma) {
    const double total = integrated_sigma_sq(path, gamma);
    EstimateResult r;
    r.method = Method::IntegratedSigmaSq;
    r.sigma_hat = std::sqrt(total / (path.end_time() - path.theta));
    r.zero_variance = total == 0.0;
    return r;
}

bool is_unimodal(std::span<const CurvePoint> curve) {
    std::vector<double> y;
    for (const auto& p : curve) {
        if (y.empty() || p.objective != y.back()) y.push_back(p.objective);
    }
    if (y.size() <= 1) return !y.empty();
    int minima = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const bool left_ok = i == 0 || y[i] < y[i - 1];
        const bool right_ok = i + 1 == y.size() || y[i] < y[i + 1];
        if (left_ok && right_ok) ++minima;
    }
    return minima == 1;
}

CirMoments cir_moments(double a, double b, double sigma, double y0, double T) {
    const double e = std::exp(-a * T);
    const double one_minus_e = -std::expm1(-a * T);
    const double s2 = sigma * sigma;
    return {b * one_minus_e + e * y0,
            y0 * s2 / a * e * one_minus_e + b * s2 / (2.0 * a) * one_minus_e * one_minus_e};
}

CirParameters cir_backout(double mean_T, double var_T, double sigma, double y0, double T, double a_min,
                          double a_max) {
    if (!(var_T > 0.0)) throw ConfigError("variance must be positive");
    if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
    if (!(y0 > 0.0)) throw ConfigError("y0 must be positive");
    if (!(T > 0.0)) throw ConfigError("T must be positive");
    if (!(a_min > 0.0 && a_max > a_min)) throw ConfigError("bracket must satisfy 0 < a_min < a_max");

    // The mean equation degenerates at a = 0, which the bracket excludes.
    auto b_of = [&](double a) { return (mean_T - std::exp(-a * T) * y0) / -std::expm1(-a * T); };
    auto residual = [&](double a) { return cir_moments(a, b_of(a), sigma, y0, T).variance - var_T; };

    constexpr int kScan = 400;
    std::vector<std::pair<double, double>> curve;
    curve.reserve(kScan + 1);
    const double log_lo = std::log(a_min);
    const double log_step = (std::log(a_max) - log_lo) / kScan;
    for (int i = 0; i <= kScan; ++i) {
        const double a = i == kScan ? a_max : std::exp(log_lo + log_step * i);
        curve.emplace_back(a, residual(a));
        if (i == 0) continue;
        const auto [a_lo, r_lo] = curve[curve.size() - 2];
        const auto [a_hi, r_hi] = curve.back();
        if (r_hi == 0.0) return {a_hi, b_of(a_hi)};
        if (std::signbit(r_lo) != std::signbit(r_hi)) {
            std::uintmax_t iters = 200;
            const auto [left, right] =
                boost::math::tools::toms748_solve(residual, a_lo, a_hi, r_lo, r_hi,
                                                  boost::math::tools::eps_tolerance<double>(50), iters);
            const double a = 0.5 * (left + right);
            return {a, b_of(a)};
        }
    }
    std::ostringstream msg;
    msg << "variance residual does not change sign on [" << a_min << ", " << a_max << "]";
    throw NoSolutionError(msg.str(), std::move(curve));
}

}  // namespace powerdiff
