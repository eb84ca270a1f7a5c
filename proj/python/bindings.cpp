#include <sstream>

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "powerdiff/auxprocess.hpp"
#include "powerdiff/errors.hpp"
#include "powerdiff/estimators.hpp"
#include "powerdiff/experiment.hpp"
#include "powerdiff/model.hpp"
#include "powerdiff/path_io.hpp"
#include "powerdiff/simulate.hpp"

namespace py = pybind11;
using namespace powerdiff;

namespace {

void export_model(py::module_& m) {
    py::class_<DelayDriftSpec>(m, "DelayDriftSpec")
        .def(py::init<>())
        .def_readwrite("a", &DelayDriftSpec::a)
        .def_readwrite("b", &DelayDriftSpec::b)
        .def_readwrite("nu", &DelayDriftSpec::nu)
        .def_readwrite("c", &DelayDriftSpec::c)
        .def_readwrite("d", &DelayDriftSpec::d)
        .def_readwrite("e", &DelayDriftSpec::e)
        .def_readwrite("a_hat", &DelayDriftSpec::a_hat)
        .def_readwrite("b_hat", &DelayDriftSpec::b_hat)
        .def_readwrite("nu_hat", &DelayDriftSpec::nu_hat)
        .def_readwrite("lambda_", &DelayDriftSpec::lambda)
        .def_property_readonly("n_terms", &DelayDriftSpec::n_terms)
        .def("validate", &DelayDriftSpec::validate);

    py::class_<ModelSpec>(m, "ModelSpec")
        .def_static("cir", &ModelSpec::cir, py::arg("a"), py::arg("b"), py::arg("sigma"))
        .def_static("ckls", &ModelSpec::ckls, py::arg("a"), py::arg("b"), py::arg("sigma"), py::arg("gamma"))
        .def_static("random_delay", &ModelSpec::random_delay, py::arg("spec"), py::arg("sigma"), py::arg("gamma"))
        .def_readwrite("sigma", &ModelSpec::sigma)
        .def_readwrite("gamma", &ModelSpec::gamma)
        .def_property_readonly("drift_name", [](const ModelSpec& s) { return drift_name(s.drift); })
        .def("validate", &ModelSpec::validate)
        .def("__repr__", [](const ModelSpec& s) {
            std::ostringstream o;
            o << "ModelSpec(" << drift_name(s.drift) << ", sigma=" << s.sigma << ", gamma=" << s.gamma << ")";
            return o.str();
        });

    m.def("eval_drift", &eval_drift, py::arg("spec"), py::arg("x"), py::arg("x_lagged"));
    m.def(
        "sample_delay_drift",
        [](std::uint64_t seed) {
            Rng rng(seed);
            return sample_delay_drift(rng);
        },
        py::arg("seed"), "Delay drift drawn from a generator seeded with `seed`.");
}

void export_simulate(py::module_& m) {
    py::enum_<DelayRule>(m, "DelayRule")
        .value("GridStep", DelayRule::GridStep)
        .value("Literal", DelayRule::Literal);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("n_steps", &SimConfig::n_steps)
        .def_readwrite("theta", &SimConfig::theta)
        .def_readwrite("horizon", &SimConfig::horizon)
        .def_readwrite("y0", &SimConfig::y0)
        .def_readwrite("stop_ratio", &SimConfig::stop_ratio)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("delay_rule", &SimConfig::delay_rule)
        .def_property_readonly("delta", &SimConfig::delta)
        .def("validate", &SimConfig::validate);

    py::class_<SamplePath>(m, "SamplePath")
        .def(py::init(&SamplePath::from_values), py::arg("values"), py::arg("delta"), py::arg("theta") = 0.0)
        .def_readonly("theta", &SamplePath::theta)
        .def_readonly("delta", &SamplePath::delta)
        .def_readonly("values", &SamplePath::values)
        .def_readonly("m0", &SamplePath::m0)
        .def_readonly("m", &SamplePath::m)
        .def_readonly("stopped_early", &SamplePath::stopped_early)
        .def_readonly("positivity_fixes", &SamplePath::positivity_fixes)
        .def("times", [](const SamplePath& p) {
            std::vector<double> t(p.values.size());
            for (std::size_t i = 0; i < t.size(); ++i) t[i] = p.time_at(i);
            return t;
        })
        .def("__len__", [](const SamplePath& p) { return p.values.size(); });

    m.def(
        "euler_maruyama", [](const ModelSpec& model, const SimConfig& cfg) { return euler_maruyama(model, cfg); },
        py::arg("model"), py::arg("config"), "Simulate with the generator seeded from config.seed.");
    m.def(
        "simulate_random_delay",
        [](double sigma, double gamma, const SimConfig& cfg) {
            Rng rng(cfg.seed);
            const ModelSpec model = ModelSpec::random_delay(sample_delay_drift(rng), sigma, gamma);
            return py::make_tuple(model, euler_maruyama(model, cfg, rng));
        },
        py::arg("sigma"), py::arg("gamma"), py::arg("config"),
        "Draw a delay drift and simulate from one generator seeded with config.seed,\n"
        "as `powerdiff simulate --model random-delay` does. Returns (model, path).");
    m.def("read_path_csv", py::overload_cast<const std::string&>(&read_path_csv), py::arg("file"));
    m.def("write_path_csv", py::overload_cast<const SamplePath&, const std::string&>(&write_path_csv),
          py::arg("path"), py::arg("file"));
}

void export_estimators(py::module_& m) {
    py::class_<AuxSeries>(m, "AuxSeries")
        .def_readonly("h", &AuxSeries::h)
        .def_readonly("eta", &AuxSeries::eta)
        .def_readonly("v", &AuxSeries::v)
        .def_readonly("log_modulus_running", &AuxSeries::log_modulus_running)
        .def_readonly("v_bar", &AuxSeries::v_bar);
    m.def("compute_aux", &compute_aux, py::arg("path"), py::arg("h"));
    m.def(
        "log_modulus_complex_oracle",
        [](const std::vector<double>& eta) { return log_modulus_complex_oracle(eta); }, py::arg("eta"));

    py::enum_<Method>(m, "Method")
        .value("SigmaKnownGamma", Method::SigmaKnownGamma)
        .value("GammaRatio", Method::GammaRatio)
        .value("JointVariance", Method::JointVariance)
        .value("GammaKnownSigma", Method::GammaKnownSigma)
        .value("IntegratedSigmaSq", Method::IntegratedSigmaSq)
        .value("CirBackout", Method::CirBackout);
    py::enum_<ObjectiveScale>(m, "ObjectiveScale")
        .value("Relative", ObjectiveScale::Relative)
        .value("Absolute", ObjectiveScale::Absolute);

    py::class_<EstimateResult>(m, "EstimateResult")
        .def_readonly("method", &EstimateResult::method)
        .def_readonly("gamma_hat", &EstimateResult::gamma_hat)
        .def_readonly("sigma_hat", &EstimateResult::sigma_hat)
        .def_readonly("grid_n", &EstimateResult::grid_n)
        .def_readonly("zero_variance", &EstimateResult::zero_variance)
        .def_property_readonly("objective_min", &EstimateResult::objective_min)
        .def_property_readonly("objective_curve", [](const EstimateResult& r) {
            std::vector<std::pair<double, double>> out;
            out.reserve(r.objective_curve.size());
            for (const auto& p : r.objective_curve) out.emplace_back(p.h, p.objective);
            return out;
        });

    m.def("sigma_known_gamma", &sigma_known_gamma, py::arg("path"), py::arg("gamma"), py::arg("h"));
    m.def("gamma_ratio_estimate", &gamma_ratio_estimate, py::arg("path"), py::arg("h1") = kDefaultH1,
          py::arg("h2") = kDefaultH2, py::arg("grid_n") = kDefaultRatioGrid);
    m.def("joint_estimate", &joint_estimate, py::arg("path"), py::arg("grid_n") = kDefaultJointGrid,
          py::arg("scale") = ObjectiveScale::Relative);
    m.def("gamma_known_sigma", &gamma_known_sigma, py::arg("path"), py::arg("sigma"),
          py::arg("grid_n") = kDefaultJointGrid, py::arg("scale") = ObjectiveScale::Relative);
    m.def("integrated_sigma_sq", &integrated_sigma_sq, py::arg("path"), py::arg("gamma"));
    m.def(
        "cir_moments",
        [](double a, double b, double sigma, double y0, double T) {
            const auto mo = cir_moments(a, b, sigma, y0, T);
            return py::make_tuple(mo.mean, mo.variance);
        },
        py::arg("a"), py::arg("b"), py::arg("sigma"), py::arg("y0"), py::arg("T"));
    m.def(
        "cir_backout",
        [](double mean, double var, double sigma, double y0, double T) {
            const auto p = cir_backout(mean, var, sigma, y0, T);
            return py::make_tuple(p.a, p.b);
        },
        py::arg("mean_T"), py::arg("var_T"), py::arg("sigma"), py::arg("y0"), py::arg("T"));
}

void export_experiment(py::module_& m) {
    py::class_<TrialStats>(m, "TrialStats")
        .def_readonly("rmse", &TrialStats::rmse)
        .def_readonly("mae", &TrialStats::mae)
        .def_readonly("bias", &TrialStats::bias)
        .def_readonly("n_effective", &TrialStats::n_effective)
        .def_readonly("failures", &TrialStats::failures);

    m.def(
        "error_stats",
        [](const std::vector<double>& estimates, const std::vector<double>& truths) {
            return error_stats(estimates, truths);
        },
        py::arg("estimates"), py::arg("truths"));

    m.def(
        "reproduce_table",
        [](const std::string& table, std::optional<long> trials, std::uint64_t seed) {
            const auto id = parse_table_id(table);
            if (!id) throw ConfigError("unknown table '" + table + "'");
            TableOverrides o;
            o.trials = trials;
            o.master_seed = seed;
            const TableReport report = reproduce_table(*id, o);
            py::list rows;
            for (const auto& r : report.results) {
                py::dict d;
                d["row_id"] = r.row.row_id;
                d["rmse"] = r.outcome.stats.rmse;
                d["mae"] = r.outcome.stats.mae;
                d["bias"] = r.outcome.stats.bias;
                d["paper_rmse"] = r.row.reference.rmse;
                d["paper_mae"] = r.row.reference.mae;
                d["paper_bias"] = r.row.reference.bias;
                d["ratio"] = r.ratio();
                d["n_effective"] = r.outcome.stats.n_effective;
                rows.append(d);
            }
            return rows;
        },
        py::arg("table"), py::arg("trials") = py::none(), py::arg("seed") = 1,
        "Run a table reproduction and return one dict per row.");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Simulation and pathwise estimation for power-type diffusions";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<DegenerateError>(m, "DegenerateError", PyExc_RuntimeError);
    py::register_exception<NoSolutionError>(m, "NoSolutionError", PyExc_RuntimeError);
    py::register_exception<CsvError>(m, "CsvError", PyExc_ValueError);

    export_model(m);
    export_simulate(m);
    export_estimators(m);
    export_experiment(m);
}
