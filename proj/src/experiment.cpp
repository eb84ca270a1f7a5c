#include "powerdiff/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "powerdiff/errors.hpp"
#include "powerdiff/random.hpp"

namespace powerdiff {

bool EstimatorConfig::targets_sigma() const noexcept {
    switch (kind) {
        case EstimatorKind::SigmaKnownGamma:
        case EstimatorKind::JointSigma:
        case EstimatorKind::IntegratedSigma:
            return true;
        default:
            return false;
    }
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    sim.validate();
    if (!randomize_drift) model.validate();
    if (!(model.sigma >= 0.0)) throw ConfigError("sigma must be >= 0");
    if (!(model.gamma >= 0.0 && model.gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
    const auto& e = estimator;
    if (e.assumed_gamma && !(*e.assumed_gamma >= 0.0 && *e.assumed_gamma <= 1.0)) {
        throw ConfigError("assumed gamma must lie in [0, 1]");
    }
    if (e.h && !(*e.h >= 0.0 && *e.h <= 1.0)) throw ConfigError("h must lie in [0, 1]");
    if (e.grid_n && *e.grid_n < 2) throw ConfigError("grid_n must be >= 2");
    if (e.kind == EstimatorKind::GammaRatio && e.h1 == e.h2) throw ConfigError("h1 and h2 must differ");
    if (e.kind == EstimatorKind::GammaKnownSigma && !(model.sigma > 0.0)) {
        throw ConfigError("known-sigma estimator needs sigma > 0");
    }
}

TrialStats error_stats(std::span<const double> errors) {
    if (errors.empty()) throw ConfigError("error statistics need at least one value");
    double sq = 0.0;
    double abs = 0.0;
    double sum = 0.0;
    for (double e : errors) {
        sq += e * e;
        abs += std::fabs(e);
        sum += e;
    }
    const double n = static_cast<double>(errors.size());
    TrialStats s;
    s.rmse = std::sqrt(sq / n);
    s.mae = abs / n;
    s.bias = sum / n;
    s.n_effective = static_cast<long>(errors.size());
    return s;
}

TrialStats error_stats(std::span<const double> estimates, std::span<const double> truths) {
    if (estimates.size() != truths.size()) throw ConfigError("estimates and truths differ in length");
    std::vector<double> errors(estimates.size());
    for (std::size_t i = 0; i < errors.size(); ++i) errors[i] = estimates[i] - truths[i];
    return error_stats(errors);
}

namespace {

EstimateResult estimate(const EstimatorConfig& e, const SamplePath& path, const ModelSpec& model) {
    const double assumed = e.assumed_gamma.value_or(model.gamma);
    switch (e.kind) {
        case EstimatorKind::SigmaKnownGamma:
            return sigma_known_gamma(path, assumed, e.h.value_or(assumed));
        case EstimatorKind::GammaRatio:
            return gamma_ratio_estimate(path, e.h1, e.h2, e.grid_n.value_or(kDefaultRatioGrid));
        case EstimatorKind::JointGamma:
        case EstimatorKind::JointSigma:
            return joint_estimate(path, e.grid_n.value_or(kDefaultJointGrid), e.scale);
        case EstimatorKind::GammaKnownSigma:
            return gamma_known_sigma(path, model.sigma, e.grid_n.value_or(kDefaultJointGrid), e.scale);
        case EstimatorKind::IntegratedSigma:
            return integrated_estimate(path, assumed);
    }
    throw ConfigError("unknown estimator kind");
}

}  // namespace

TrialRecord run_trial(const ExperimentConfig& cfg, long index) {
    Rng rng(derive_seed(cfg.master_seed, static_cast<std::uint64_t>(index)));
    ModelSpec model = cfg.model;
    if (cfg.randomize_drift) model.drift = DelayDrift{sample_delay_drift(rng)};

    const SamplePath path = euler_maruyama(model, cfg.sim, rng);
    TrialRecord rec;
    rec.stopped_early = path.stopped_early;
    rec.positivity_fixes = path.positivity_fixes;

    try {
        const EstimateResult r = estimate(cfg.estimator, path, model);
        rec.unimodal = !r.objective_curve.empty() && is_unimodal(r.objective_curve);
        const auto value = cfg.estimator.targets_sigma() ? r.sigma_hat : r.gamma_hat;
        const double truth = cfg.estimator.targets_sigma() ? model.sigma : model.gamma;
        if (value) rec.error = *value - truth;
    } catch (const DegenerateError&) {
        rec.error.reset();
    }
    return rec;
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto trials = static_cast<std::size_t>(cfg.trials);
    std::vector<TrialRecord> records(trials);

    unsigned workers = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, trials));

    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&](unsigned worker) {
        try {
            for (std::size_t i = worker; i < trials; i += workers) {
                records[i] = run_trial(cfg, static_cast<long>(i));
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    if (failure) std::rethrow_exception(failure);

    ExperimentOutcome out;
    for (const auto& rec : records) {
        if (rec.error) out.errors.push_back(*rec.error);
        out.stopped_early += rec.stopped_early ? 1 : 0;
        out.positivity_fixes += rec.positivity_fixes;
        out.unimodal += rec.unimodal ? 1 : 0;
    }
    if (out.errors.empty()) throw DegenerateError("every trial produced a degenerate path");
    out.stats = error_stats(out.errors);
    out.stats.failures = cfg.trials - out.stats.n_effective;
    return out;
}

double bootstrap_rmse_se(std::span<const double> errors, int resamples, std::uint64_t seed) {
    if (errors.empty() || resamples < 2) throw ConfigError("bootstrap needs data and >= 2 resamples");
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, errors.size() - 1);
    std::vector<double> rmses(static_cast<std::size_t>(resamples));
    for (auto& r : rmses) {
        double sq = 0.0;
        for (std::size_t i = 0; i < errors.size(); ++i) {
            const double e = errors[pick(rng)];
            sq += e * e;
        }
        r = std::sqrt(sq / static_cast<double>(errors.size()));
    }
    double mean = 0.0;
    for (double r : rmses) mean += r;
    mean /= static_cast<double>(rmses.size());
    double var = 0.0;
    for (double r : rmses) var += (r - mean) * (r - mean);
    return std::sqrt(var / static_cast<double>(rmses.size() - 1));
}

std::optional<TableId> parse_table_id(const std::string& text) {
    if (text == "t1a") return TableId::T1a;
    if (text == "t1b") return TableId::T1b;
    if (text == "t2") return TableId::T2;
    if (text == "t3") return TableId::T3;
    return std::nullopt;
}

std::string table_name(TableId id) {
    switch (id) {
        case TableId::T1a: return "t1a";
        case TableId::T1b: return "t1b";
        case TableId::T2: return "t2";
        case TableId::T3: return "t3";
    }
    return "unknown";
}

namespace {

constexpr double kSigma = 0.3;

ExperimentConfig base_config(long n_steps, double gamma, const TableOverrides& o) {
    ExperimentConfig c;
    c.trials = o.trials.value_or(1000);
    c.master_seed = o.master_seed.value_or(1);
    c.threads = o.threads.value_or(0);
    c.sim.n_steps = n_steps;
    c.sim.theta = 0.0;
    c.sim.horizon = 1.0;
    c.sim.stop_ratio = 0.001;
    c.model = ModelSpec::random_delay({}, kSigma, gamma);
    c.randomize_drift = true;
    c.estimator.scale = o.scale.value_or(ObjectiveScale::Relative);
    return c;
}

}  // namespace

std::vector<TableRow> table_rows(TableId id, const TableOverrides& o) {
    std::vector<TableRow> rows;
    switch (id) {
        case TableId::T1a:
        case TableId::T1b: {
            const bool weekly = id == TableId::T1a;
            const long n = weekly ? 52 : 250;
            struct Spec {
                double gamma;
                ReferenceTriple weekly, daily;
            };
            const Spec specs[] = {
                {0.5, {0.0312, 0.0248, 0.0034}, {0.0136, 0.0109, 0.0006}},
                {0.4, {0.0458, 0.0365, 0.0281}, {0.0328, 0.0272, 0.0259}},
                {0.6, {0.0358, 0.0290, -0.0183}, {0.0269, 0.0227, -0.0215}},
                {0.7, {0.0495, 0.0413, -0.0370}, {0.0468, 0.0416, -0.0414}},
            };
            for (const auto& s : specs) {
                ExperimentConfig c = base_config(n, s.gamma, o);
                c.estimator.kind = EstimatorKind::SigmaKnownGamma;
                c.estimator.assumed_gamma = 0.5;
                c.estimator.h = 0.5;
                std::ostringstream rid;
                rid << "gamma" << s.gamma << "_h0.5";
                rows.push_back({rid.str(), c, weekly ? s.weekly : s.daily});
            }
            break;
        }
        case TableId::T2: {
            struct Spec {
                long n;
                ReferenceTriple ratio, joint;
            };
            const Spec specs[] = {
                {250, {0.2078, 0.1736, 0.1078}, {0.2304, 0.1946, 0.1166}},
                {10000, {0.0309, 0.0182, 0.0039}, {0.0356, 0.0221, 0.0042}},
                {20000, {0.0222, 0.0109, 0.0020}, {0.0483, 0.0294, 0.0004}},
            };
            for (const auto& s : specs) {
                ExperimentConfig gh = base_config(s.n, 0.6, o);
                gh.estimator.kind = EstimatorKind::GammaRatio;
                gh.estimator.h1 = o.h1.value_or(kDefaultH1);
                gh.estimator.h2 = o.h2.value_or(kDefaultH2);
                gh.estimator.grid_n = kDefaultRatioGrid;
                rows.push_back({"delta1/" + std::to_string(s.n) + "_gh", gh, s.ratio});

                ExperimentConfig joint = base_config(s.n, 0.6, o);
                joint.estimator.kind = EstimatorKind::JointGamma;
                joint.estimator.grid_n = kDefaultJointGrid;
                rows.push_back({"delta1/" + std::to_string(s.n) + "_L", joint, s.joint});
            }
            break;
        }
        case TableId::T3: {
            struct Spec {
                long n;
                ReferenceTriple reference;
            };
            const Spec specs[] = {
                {250, {0.0515, 0.0264, 0.0092}},
                {10000, {0.0063, 0.0038, 0.0001}},
                {20000, {0.0168, 0.0108, 0.00003}},
            };
            for (const auto& s : specs) {
                ExperimentConfig c = base_config(s.n, 0.6, o);
                c.estimator.kind = EstimatorKind::JointSigma;
                c.estimator.grid_n = kDefaultJointGrid;
                rows.push_back({"delta1/" + std::to_string(s.n), c, s.reference});
            }
            break;
        }
    }
    return rows;
}

TableReport reproduce_table(TableId id, const TableOverrides& overrides) {
    TableReport report{id, {}};
    for (auto& row : table_rows(id, overrides)) {
        ExperimentOutcome outcome = run_experiment(row.config);
        report.results.push_back({std::move(row), std::move(outcome)});
    }
    return report;
}

void write_report_csv(const TableReport& report, std::ostream& out) {
    // Shortest round-trip form: exact, and reference values print as published.
    auto num = [](double v) {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    };
    out << "row_id,rmse,mae,bias,paper_rmse,paper_mae,paper_bias,ratio\n";
    for (const auto& r : report.results) {
        const auto& s = r.outcome.stats;
        out << r.row.row_id << ',' << num(s.rmse) << ',' << num(s.mae) << ',' << num(s.bias) << ','
            << num(r.row.reference.rmse) << ',' << num(r.row.reference.mae) << ',' << num(r.row.reference.bias) << ','
            << num(r.ratio()) << '\n';
    }
}

void print_report(const TableReport& report, std::ostream& out) {
    const auto flags = out.flags();
    const auto prec = out.precision();
    out << "table " << table_name(report.id) << '\n';
    out << std::left << std::setw(18) << "row" << std::right << std::setw(10) << "rmse" << std::setw(10) << "mae"
        << std::setw(10) << "bias" << " |" << std::setw(10) << "ref rmse" << std::setw(10) << "ref mae"
        << std::setw(10) << "ref bias" << std::setw(8) << "ratio" << std::setw(8) << "n" << '\n';
    out << std::fixed;
    for (const auto& r : report.results) {
        const auto& s = r.outcome.stats;
        out << std::left << std::setw(18) << r.row.row_id << std::right << std::setprecision(4) << std::setw(10)
            << s.rmse << std::setw(10) << s.mae << std::setw(10) << s.bias << " |" << std::setw(10)
            << r.row.reference.rmse << std::setw(10) << r.row.reference.mae << std::setprecision(5) << std::setw(10)
            << r.row.reference.bias << std::setprecision(2) << std::setw(8) << r.ratio() << std::setw(8) << s.n_effective << '\n';
    }
    out.flags(flags);
    out.precision(prec);
}

}  // namespace powerdiff
