#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "powerdiff/simulate.hpp"

namespace powerdiff {

enum class Method {
    SigmaKnownGamma,
    GammaRatio,
    JointVariance,
    GammaKnownSigma,
    IntegratedSigmaSq,
    CirBackout,
};

std::string method_name(Method m);

struct CurvePoint {
    double h;
    double objective;
};

struct EstimateResult {
    Method method = Method::SigmaKnownGamma;
    std::optional<double> gamma_hat;
    std::optional<double> sigma_hat;
    /// Objective on the search grid, for the grid-search methods.
    std::vector<CurvePoint> objective_curve;
    std::optional<int> grid_n;
    /// Set when every increment vanished; sigma_hat is then exactly zero.
    bool zero_variance = false;

    /// Smallest objective on the curve, if a curve was produced.
    std::optional<double> objective_min() const;
};

/// Normalization of the grid objectives of joint_estimate and gamma_known_sigma.
///
/// Absolute is the plain sum of squares. Its minimizer moves with the level of
/// the path (scaling y by c scales v_h by about c^{2(1-h)}), so it drifts to
/// the grid ends unless y stays near 1. Relative divides by v_bar_h^2, which
/// is invariant under rescaling y and is minimized in expectation at h = gamma.
enum class ObjectiveScale { Relative, Absolute };

inline constexpr int kDefaultRatioGrid = 300;
inline constexpr int kDefaultJointGrid = 30;
inline constexpr double kDefaultH1 = 0.0;
inline constexpr double kDefaultH2 = 1.0;

/// sigma^2 ~ sum_k log(1 + eta_{h,k}^2) / (delta sum_k y_k^{2(gamma - h)}),
/// both sums over k = m0+1..m. Constant paths give sigma_hat = 0 with
/// zero_variance set.
EstimateResult sigma_known_gamma(const SamplePath& path, double gamma, double h);

/// gamma_hat matches the weight ratio sum y_k^{2(g-h1)} / sum y_k^{2(g-h2)}
/// to the ratio of the log-modulus sums for h1 and h2. The mismatch is
/// measured as |log LHS(g) - log RHS|, which has the same zero set as
/// |LHS - RHS| and is symmetric under swapping h1 and h2.
/// Grid g = k / grid_n, k = 1..grid_n, ties to the smallest g.
EstimateResult gamma_ratio_estimate(const SamplePath& path, double h1, double h2, int grid_n);

/// gamma_hat minimizes sum_k (v_{h,k} - v_bar_h)^2 over h = k / grid_n,
/// k = 1..grid_n (divided by v_bar_h^2 for ObjectiveScale::Relative);
/// sigma_hat = sqrt(v_bar_{gamma_hat} / delta).
EstimateResult joint_estimate(const SamplePath& path, int grid_n,
                              ObjectiveScale scale = ObjectiveScale::Relative);

/// gamma_hat minimizes sum_k (v_{h,k} / delta - sigma^2)^2 over the same grid
/// (divided by (v_bar_h / delta)^2 for ObjectiveScale::Relative).
EstimateResult gamma_known_sigma(const SamplePath& path, double sigma, int grid_n,
                                 ObjectiveScale scale = ObjectiveScale::Relative);

std::string objective_scale_name(ObjectiveScale s);

/// sum_k log(1 + eta_{gamma,k}^2), an estimate of the integral of sigma(s)^2
/// over the observed window. Valid for time-varying sigma.
double integrated_sigma_sq(const SamplePath& path, double gamma);

/// integrated_sigma_sq wrapped as a result: sigma_hat is the root mean
/// square of sigma over [theta, t_m].
EstimateResult integrated_estimate(const SamplePath& path, double gamma);

/// True when the curve has exactly one local minimum, counting plateaus once.
bool is_unimodal(std::span<const CurvePoint> curve);

struct CirMoments {
    double mean;
    double variance;
};

struct CirParameters {
    double a;
    double b;
};

/// Closed-form mean and variance of y(T) for CIR started at y0.
CirMoments cir_moments(double a, double b, double sigma, double y0, double T);

/// Drift parameters (a, b) matching the given mean and variance of y(T).
/// b is eliminated through the mean equation and a found by bracketed root
/// search on [a_min, a_max]. Throws NoSolutionError with the sampled
/// residual curve when no sign change is found.
CirParameters cir_backout(double mean_T, double var_T, double sigma, double y0, double T,
                          double a_min = 1e-6, double a_max = 100.0);

}  // namespace powerdiff
