#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "powerdiff/estimators.hpp"
#include "powerdiff/model.hpp"
#include "powerdiff/simulate.hpp"

namespace powerdiff {

/// What a trial estimates and which true parameter the error is taken against.
enum class EstimatorKind {
    SigmaKnownGamma,  ///< sigma_hat from sigma_known_gamma(assumed_gamma, h)
    GammaRatio,       ///< gamma_hat from gamma_ratio_estimate(h1, h2)
    JointGamma,       ///< gamma_hat from joint_estimate
    JointSigma,       ///< sigma_hat from joint_estimate
    GammaKnownSigma,  ///< gamma_hat from gamma_known_sigma(true sigma)
    IntegratedSigma,  ///< root-mean-square sigma from integrated_sigma_sq(assumed_gamma)
};

struct EstimatorConfig {
    EstimatorKind kind = EstimatorKind::SigmaKnownGamma;
    /// Power index the estimator assumes; empty means the true gamma.
    std::optional<double> assumed_gamma;
    /// Exponent for SigmaKnownGamma; empty means the assumed gamma.
    std::optional<double> h;
    double h1 = kDefaultH1;
    double h2 = kDefaultH2;
    std::optional<int> grid_n;
    ObjectiveScale scale = ObjectiveScale::Relative;

    bool targets_sigma() const noexcept;
};

struct ExperimentConfig {
    long trials = 1000;
    SimConfig sim;
    /// Template model; sigma and gamma are the truths every trial is scored against.
    ModelSpec model = ModelSpec::random_delay({}, 0.3, 0.5);
    /// Draw a fresh delay drift per trial, replacing the template drift.
    bool randomize_drift = true;
    EstimatorConfig estimator;
    std::uint64_t master_seed = 1;
    /// Worker threads; 0 picks hardware concurrency.
    unsigned threads = 0;

    void validate() const;
};

struct TrialStats {
    double rmse = 0.0;
    double mae = 0.0;
    double bias = 0.0;
    long n_effective = 0;
    long failures = 0;
};

/// RMSE, mean absolute error and bias of estimates - truths.
TrialStats error_stats(std::span<const double> estimates, std::span<const double> truths);

/// Aggregates over signed errors directly.
TrialStats error_stats(std::span<const double> errors);

struct ExperimentOutcome {
    TrialStats stats;
    /// Signed errors of the successful trials, in trial order.
    std::vector<double> errors;
    /// Trials whose path hit the stop threshold.
    long stopped_early = 0;
    std::size_t positivity_fixes = 0;
    /// Trials whose grid objective had a single local minimum (grid methods only).
    long unimodal = 0;
};

struct TrialRecord {
    /// Signed error; empty when the path was degenerate for the estimator.
    std::optional<double> error;
    bool stopped_early = false;
    std::size_t positivity_fixes = 0;
    bool unimodal = false;
};

/// One simulated trial: derive the seed, draw drift and y0, simulate, estimate.
TrialRecord run_trial(const ExperimentConfig& cfg, long index);

/// Runs every trial (concurrently) and aggregates. Throws ConfigError for
/// invalid configurations and DegenerateError when no trial succeeded.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

/// Nonparametric bootstrap standard error of the RMSE of `errors`.
double bootstrap_rmse_se(std::span<const double> errors, int resamples = 1000, std::uint64_t seed = 12345);

enum class TableId { T1a, T1b, T2, T3 };

std::optional<TableId> parse_table_id(const std::string& text);
std::string table_name(TableId id);

struct ReferenceTriple {
    double rmse;
    double mae;
    double bias;
};

struct TableRow {
    std::string row_id;
    ExperimentConfig config;
    ReferenceTriple reference;
};

struct TableOverrides {
    std::optional<long> trials;
    std::optional<std::uint64_t> master_seed;
    std::optional<unsigned> threads;
    std::optional<double> h1;
    std::optional<double> h2;
    std::optional<ObjectiveScale> scale;
};

/// Row definitions of a published table with the reference values attached.
std::vector<TableRow> table_rows(TableId id, const TableOverrides& overrides = {});

struct TableResult {
    TableRow row;
    ExperimentOutcome outcome;

    double ratio() const noexcept { return outcome.stats.rmse / row.reference.rmse; }
};

struct TableReport {
    TableId id;
    std::vector<TableResult> results;
};

TableReport reproduce_table(TableId id, const TableOverrides& overrides = {});

/// CSV: row_id,rmse,mae,bias,paper_rmse,paper_mae,paper_bias,ratio
void write_report_csv(const TableReport& report, std::ostream& out);

/// Aligned text table with the reference values next to the measured ones.
void print_report(const TableReport& report, std::ostream& out);

}  // namespace powerdiff
