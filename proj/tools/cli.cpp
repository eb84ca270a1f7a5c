#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>

#include "powerdiff/errors.hpp"
#include "powerdiff/estimators.hpp"
#include "powerdiff/experiment.hpp"
#include "powerdiff/model.hpp"
#include "powerdiff/path_io.hpp"
#include "powerdiff/simulate.hpp"

namespace powerdiff::cli {

namespace {

struct SimulateArgs {
    std::string model;
    double a = 1.0;
    double b = 1.0;
    double sigma = 0.3;
    double gamma = 0.5;
    long n = 250;
    double theta = 0.0;
    double horizon = 1.0;
    std::optional<double> y0;
    bool y0_random = false;
    double stop_ratio = 0.001;
    DelayRule delay_rule = DelayRule::GridStep;
    std::uint64_t seed = 0;
    std::string out;
};

struct EstimateArgs {
    std::string in;
    std::string method;
    std::optional<double> gamma;
    std::optional<double> h;
    double h1 = kDefaultH1;
    double h2 = kDefaultH2;
    std::optional<int> grid_n;
    std::optional<double> sigma;
    ObjectiveScale scale = ObjectiveScale::Relative;
    std::string curve;
};

struct ExperimentArgs {
    std::string table;
    std::optional<long> trials;
    std::uint64_t seed = 1;
    std::optional<unsigned> threads;
    std::optional<double> h1;
    std::optional<double> h2;
    ObjectiveScale scale = ObjectiveScale::Relative;
    std::string out;
};

const std::map<std::string, ObjectiveScale> kScales{{"relative", ObjectiveScale::Relative},
                                                    {"absolute", ObjectiveScale::Absolute}};

std::string format_optional(const std::optional<double>& v) {
    if (!v) return {};
    std::ostringstream s;
    s << std::setprecision(17) << *v;
    return s.str();
}

int usage_error(std::ostream& err, const std::string& msg) {
    err << "error: " << msg << '\n';
    return kExitUsage;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& err) {
    ModelSpec model;
    Rng rng(a.seed);
    if (a.model == "cir") {
        if (a.gamma != 0.5) return usage_error(err, "--gamma must be 0.5 for --model cir (use ckls)");
        model = ModelSpec::cir(a.a, a.b, a.sigma);
    } else if (a.model == "ckls") {
        model = ModelSpec::ckls(a.a, a.b, a.sigma, a.gamma);
    } else {
        model = ModelSpec::random_delay(sample_delay_drift(rng), a.sigma, a.gamma);
    }

    SimConfig cfg;
    cfg.n_steps = a.n;
    cfg.theta = a.theta;
    cfg.horizon = a.horizon;
    cfg.y0 = a.y0;
    cfg.stop_ratio = a.stop_ratio;
    cfg.seed = a.seed;
    cfg.delay_rule = a.delay_rule;

    try {
        const SamplePath path = euler_maruyama(model, cfg, rng);
        write_path_csv(path, a.out);
        err << "stopped_early=" << (path.stopped_early ? 1 : 0) << " m=" << path.m
            << " positivity_fixes=" << path.positivity_fixes << '\n';
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

int cmd_estimate(const EstimateArgs& a, std::ostream& out, std::ostream& err) {
    SamplePath path;
    try {
        path = read_path_csv(a.in);
    } catch (const CsvError& e) {
        err << "error: " << a.in << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const DegenerateError& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }

    EstimateResult r;
    try {
        if (a.method == "sigma-known-gamma") {
            if (!a.gamma) return usage_error(err, "--gamma is required for sigma-known-gamma");
            r = sigma_known_gamma(path, *a.gamma, a.h.value_or(*a.gamma));
        } else if (a.method == "gamma-ratio") {
            r = gamma_ratio_estimate(path, a.h1, a.h2, a.grid_n.value_or(kDefaultRatioGrid));
        } else if (a.method == "joint") {
            r = joint_estimate(path, a.grid_n.value_or(kDefaultJointGrid), a.scale);
        } else if (a.method == "gamma-known-sigma") {
            if (!a.sigma) return usage_error(err, "--sigma is required for gamma-known-sigma");
            r = gamma_known_sigma(path, *a.sigma, a.grid_n.value_or(kDefaultJointGrid), a.scale);
        } else {
            if (!a.gamma) return usage_error(err, "--gamma is required for integrated");
            r = integrated_estimate(path, *a.gamma);
            err << "integrated_sigma_sq=" << std::setprecision(17) << integrated_sigma_sq(path, *a.gamma) << '\n';
        }
    } catch (const ConfigError& e) {
        return usage_error(err, e.what());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }

    if (r.zero_variance) err << "warning: every increment is zero; sigma estimate is 0\n";
    out << "method,gamma_hat,sigma_hat,grid_n,objective_min\n";
    out << method_name(r.method) << ',' << format_optional(r.gamma_hat) << ',' << format_optional(r.sigma_hat)
        << ',' << (r.grid_n ? std::to_string(*r.grid_n) : std::string()) << ','
        << format_optional(r.objective_min()) << '\n';

    if (!a.curve.empty()) {
        std::ofstream curve(a.curve);
        if (!curve) {
            err << "error: cannot open " << a.curve << '\n';
            return kExitRuntime;
        }
        curve << "h,objective\n" << std::setprecision(17);
        for (const auto& p : r.objective_curve) curve << p.h << ',' << p.objective << '\n';
    }
    return kExitOk;
}

int cmd_experiment(const ExperimentArgs& a, std::ostream& out, std::ostream& err) {
    const auto id = parse_table_id(a.table);
    if (!id) return usage_error(err, "unknown table '" + a.table + "'");
    TableOverrides o;
    o.trials = a.trials;
    o.master_seed = a.seed;
    o.threads = a.threads;
    o.h1 = a.h1;
    o.h2 = a.h2;
    o.scale = a.scale;
    try {
        const TableReport report = reproduce_table(*id, o);
        if (!a.out.empty()) {
            std::ofstream file(a.out);
            if (!file) {
                err << "error: cannot open " << a.out << '\n';
                return kExitRuntime;
            }
            write_report_csv(report, file);
        }
        print_report(report, out);
    } catch (const ConfigError& e) {
        return usage_error(err, e.what());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Splices `key=value` lines from a --config file into the argument list as
// `--key value`, skipping keys already given on the command line.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::string file;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            file = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            file = args[i].substr(9);
        }
    }
    if (file.empty()) return args;

    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open config file " + file);
    auto given = [&](const std::string& flag) {
        for (const auto& a : args) {
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        }
        return false;
    };

    std::vector<std::string> out = args;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = trim(line);
        if (row.empty() || row.front() == '#' || row.front() == ';') continue;
        const auto eq = row.find('=');
        if (eq == std::string_view::npos) {
            throw std::runtime_error(file + ": line " + std::to_string(line_no) + ": expected key=value");
        }
        std::string key(trim(row.substr(0, eq)));
        std::string value(trim(row.substr(eq + 1)));
        if (key.rfind("--", 0) != 0) key = "--" + key;
        if (key == "--config" || given(key)) continue;
        if (value == "true") {
            out.push_back(key);
        } else if (value != "false") {
            out.push_back(key);
            out.push_back(value);
        }
    }
    return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::string config_file;
    CLI::App app{"Simulation and pathwise estimation for power-type diffusions"};
    app.name("powerdiff");
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Simulate a path and write it as CSV");
    simulate->add_option("--config", config_file, "Flat key=value file; flags override it");
    simulate->add_option("--model", sim.model, "Drift model")
        ->required()
        ->check(CLI::IsMember({"cir", "ckls", "random-delay"}));
    simulate->add_option("--a", sim.a, "Mean-reversion speed")->check(CLI::NonNegativeNumber);
    simulate->add_option("--b", sim.b, "Mean-reversion level")->check(CLI::NonNegativeNumber);
    simulate->add_option("--sigma", sim.sigma, "Diffusion scale")->check(CLI::NonNegativeNumber);
    simulate->add_option("--gamma", sim.gamma, "Power index")->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--n", sim.n, "Number of steps")->check(CLI::Range(2L, 100000000L));
    simulate->add_option("--theta", sim.theta, "Start time");
    simulate->add_option("--horizon", sim.horizon, "End time");
    auto* y0_opt = simulate->add_option("--y0", sim.y0, "Initial value")->check(CLI::PositiveNumber);
    auto* y0_random = simulate->add_flag("--y0-random", sim.y0_random, "Draw y0 uniformly on [0.1, 10]");
    y0_opt->excludes(y0_random);
    simulate->add_option("--stop-ratio", sim.stop_ratio, "Stop once y <= ratio * y0")
        ->check(CLI::Range(0.0, 1.0));
    simulate
        ->add_option("--delay-rule", sim.delay_rule, "Delay lag rule")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, DelayRule>{{"grid-step", DelayRule::GridStep},
                                             {"paper-literal", DelayRule::Literal}}));
    simulate->add_option("--seed", sim.seed, "Random seed");
    simulate->add_option("--out", sim.out, "Output CSV")->required();

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "Estimate parameters from a path CSV");
    estimate->set_help_flag("--help", "Print this help message and exit");
    estimate->add_option("--config", config_file, "Flat key=value file; flags override it");
    estimate->add_option("--in", est.in, "Input path CSV")->required();
    estimate->add_option("--method", est.method, "Estimator")
        ->required()
        ->check(CLI::IsMember({"sigma-known-gamma", "gamma-ratio", "joint", "gamma-known-sigma", "integrated"}));
    estimate->add_option("--gamma", est.gamma, "Known or assumed power index")->check(CLI::Range(0.0, 1.0));
    estimate->add_option("--h", est.h, "Exponent for sigma-known-gamma (default: gamma)")
        ->check(CLI::Range(0.0, 1.0));
    estimate->add_option("--h1", est.h1, "First exponent for gamma-ratio")->check(CLI::Range(0.0, 1.0));
    estimate->add_option("--h2", est.h2, "Second exponent for gamma-ratio")->check(CLI::Range(0.0, 1.0));
    estimate->add_option("--grid-n", est.grid_n, "Search grid size")->check(CLI::Range(2, 1000000));
    estimate->add_option("--sigma", est.sigma, "Known diffusion scale")->check(CLI::PositiveNumber);
    estimate->add_option("--objective", est.scale, "Grid objective normalization")
        ->transform(CLI::CheckedTransformer(kScales));
    estimate->add_option("--curve", est.curve, "Write the objective curve to this CSV");

    ExperimentArgs exp;
    auto* experiment = app.add_subcommand("experiment", "Reproduce an error table by Monte-Carlo");
    experiment->add_option("--config", config_file, "Flat key=value file; flags override it");
    experiment->add_option("--table", exp.table, "t1a | t1b | t2 | t3")
        ->required()
        ->check(CLI::IsMember({"t1a", "t1b", "t2", "t3"}));
    experiment->add_option("--trials", exp.trials, "Trials per row")->check(CLI::Range(1L, 100000000L));
    experiment->add_option("--seed", exp.seed, "Master seed");
    experiment->add_option("--threads", exp.threads, "Worker threads (0 = all cores)");
    experiment->add_option("--h1", exp.h1, "gamma-ratio exponent h1")->check(CLI::Range(0.0, 1.0));
    experiment->add_option("--h2", exp.h2, "gamma-ratio exponent h2")->check(CLI::Range(0.0, 1.0));
    experiment->add_option("--objective", exp.scale, "Grid objective normalization")
        ->transform(CLI::CheckedTransformer(kScales));
    experiment->add_option("--out", exp.out, "Report CSV");

    std::vector<std::string> expanded;
    try {
        expanded = expand_config(args);
    } catch (const std::runtime_error& e) {
        return usage_error(err, e.what());
    }
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (simulate->parsed()) {
        if (!sim.y0 && !sim.y0_random) return usage_error(err, "one of --y0 or --y0-random is required");
        return cmd_simulate(sim, err);
    }
    if (estimate->parsed()) return cmd_estimate(est, out, err);
    return cmd_experiment(exp, out, err);
}

}  // namespace powerdiff::cli
