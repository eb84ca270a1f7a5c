#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "powerdiff/random.hpp"

namespace powerdiff {

/// Mean-reverting drift a(b - x), shared by CIR and CKLS.
struct MeanReverting {
    double a = 0.0;
    double b = 0.0;
};

struct CirDrift : MeanReverting {};
struct CklsDrift : MeanReverting {};

/// Randomized multi-term drift with a single delayed argument:
///
///   H(x, y) = sum_k [ a_k (b_k - x^(nu_k + 1/2)) + c_k cos(d_k x + e_k)
///                     + 0.1 a_hat_k (b_hat_k - y^(nu_hat_k + 1/2)) ]
///
/// where x is the current state and y the state `lambda` time units ago.
struct DelayDriftSpec {
    std::vector<double> a, b, nu, c, d, e;
    std::vector<double> a_hat, b_hat, nu_hat;
    double lambda = 0.0;

    std::size_t n_terms() const noexcept { return a.size(); }

    /// Throws ConfigError unless every per-term vector has n_terms() >= 1
    /// entries and lambda >= 0.
    void validate() const;
};

struct DelayDrift {
    DelayDriftSpec spec;
};

using Drift = std::variant<CirDrift, CklsDrift, DelayDrift>;

/// dy = f dt + sigma y^gamma dw with one of the supported drifts.
struct ModelSpec {
    Drift drift;
    double sigma = 0.0;
    double gamma = 0.5;

    static ModelSpec cir(double a, double b, double sigma);
    static ModelSpec ckls(double a, double b, double sigma, double gamma);
    static ModelSpec random_delay(DelayDriftSpec spec, double sigma, double gamma);

    /// sigma >= 0 (sigma = 0 is the deterministic limit), gamma in [0, 1],
    /// a, b >= 0 for mean-reverting drifts, gamma = 1/2 for CIR.
    void validate() const;

    bool is_delay() const noexcept { return std::holds_alternative<DelayDrift>(drift); }

    /// Delay in time units; zero for CIR/CKLS.
    double delay() const noexcept;
};

/// Drift at the current state `x` with delayed state `x_lagged`. The lagged
/// value is ignored for CIR/CKLS. Throws DomainError for nonpositive inputs.
double eval_drift(const ModelSpec& spec, double x, double x_lagged);

/// Draws N uniform on {1..5}, lambda uniform on [0, 0.2] and every per-term
/// parameter uniform on [0, 1].
DelayDriftSpec sample_delay_drift(Rng& rng);

std::string drift_name(const Drift& drift);

}  // namespace powerdiff
