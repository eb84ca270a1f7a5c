#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "powerdiff/model.hpp"
#include "powerdiff/random.hpp"

namespace powerdiff {

/// How the delay lambda (time units) maps onto a lag in grid steps.
enum class DelayRule {
    GridStep,      ///< floor(lambda / delta)
    Literal,       ///< floor(lambda * (T - theta) / (n + 1)), zero for short delays
};

/// Uniform-grid observation y(t_m0), ..., y(t_m) of a positive process.
struct SamplePath {
    double theta = 0.0;
    double delta = 0.0;
    std::vector<double> values;
    long m0 = 0;
    long m = 0;
    bool stopped_early = false;
    std::size_t positivity_fixes = 0;

    std::size_t steps() const noexcept { return values.empty() ? 0 : values.size() - 1; }
    double time_at(std::size_t i) const noexcept { return theta + static_cast<double>(i) * delta; }
    double end_time() const noexcept { return time_at(steps()); }

    /// At least two points, all strictly positive and finite, delta > 0.
    void validate() const;

    /// Path built from raw values, m0 = 0, m = values.size() - 1.
    static SamplePath from_values(std::vector<double> values, double delta, double theta = 0.0);
};

struct SimConfig {
    long n_steps = 250;
    double theta = 0.0;
    double horizon = 1.0;
    /// Initial value; drawn with sample_y0 when empty.
    std::optional<double> y0;
    double stop_ratio = 0.001;
    std::uint64_t seed = 0;
    DelayRule delay_rule = DelayRule::GridStep;

    double delta() const noexcept { return (horizon - theta) / static_cast<double>(n_steps); }
    void validate() const;
};

/// Lag in grid steps for a delay of `lambda` time units.
long delay_steps(double lambda, const SimConfig& cfg);

/// Euler-Maruyama recursion
///   y_{k+1} = y_k + f(y_k, y_{max(k - lag, 0)}) delta + sigma y_k^gamma sqrt(delta) xi_{k+1}
/// stopped at the first k with y_k <= stop_ratio * y_0 or at k = n. A step that
/// lands on a nonpositive value keeps the previous value instead.
SamplePath euler_maruyama(const ModelSpec& model, const SimConfig& cfg, Rng& rng);

/// Same, with the generator seeded from cfg.seed.
SamplePath euler_maruyama(const ModelSpec& model, const SimConfig& cfg);

/// Uniform draw on [0.1, 10].
double sample_y0(Rng& rng);

}  // namespace powerdiff
