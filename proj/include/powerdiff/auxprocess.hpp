#pragma once

#include <span>
#include <vector>

#include "powerdiff/simulate.hpp"

namespace powerdiff {

/// Quantities derived from a path for a fixed exponent h.
///
/// With eta_k = (y_k - y_{k-1}) / y_{k-1}^h the discretized auxiliary process
/// obeys Y_k = Y_{k-1} (1 + i eta_k), Y_0 = 1, so
///   log|Y_j| = (1/2) sum_{k<=j} log(1 + eta_k^2).
/// All vectors are indexed by step, k = m0+1..m.
struct AuxSeries {
    double h = 0.0;
    std::vector<double> eta;
    std::vector<double> v;                    ///< log(1 + eta^2)
    std::vector<double> log_modulus_running;  ///< log|Y| after each step
    double v_bar = 0.0;
};

AuxSeries compute_aux(const SamplePath& path, double h);

/// Normalized increments only, for callers that sweep h.
std::vector<double> normalized_increments(std::span<const double> values, double h);

/// Per-step terms log(1 + eta^2) for exponent h, written into `out`
/// (resized to values.size() - 1). `log_values` holds log(values[i]).
void step_terms(std::span<const double> values, std::span<const double> log_values, double h,
                std::vector<double>& out);

/// log|prod_k (1 + i eta_k)| by explicit complex multiplication.
/// Independent of the half-sum route; used to check it.
double log_modulus_complex_oracle(std::span<const double> eta);

}  // namespace powerdiff
