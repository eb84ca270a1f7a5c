#include "powerdiff/model.hpp"

#include <cmath>
#include <sstream>

#include "powerdiff/errors.hpp"

namespace powerdiff {

namespace {

// x^p for x > 0, given log x.
double positive_pow(double log_x, double p) { return std::exp(p * log_x); }

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void check_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        throw ConfigError(std::string(name) + " must be finite");
    }
}

}  // namespace

void DelayDriftSpec::validate() const {
    const std::size_t n = a.size();
    if (n == 0) {
        throw ConfigError("delay drift needs at least one term");
    }
    for (const auto* v : {&b, &nu, &c, &d, &e, &a_hat, &b_hat, &nu_hat}) {
        if (v->size() != n) {
            std::ostringstream msg;
            msg << "delay drift parameter vectors must all have " << n << " entries, got " << v->size();
            throw ConfigError(msg.str());
        }
        for (double x : *v) check_finite(x, "delay drift parameter");
    }
    for (double x : a) check_finite(x, "delay drift parameter");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw ConfigError("delay lambda must be a finite value >= 0");
    }
}

ModelSpec ModelSpec::cir(double a, double b, double sigma) {
    return ModelSpec{CirDrift{{a, b}}, sigma, 0.5};
}

ModelSpec ModelSpec::ckls(double a, double b, double sigma, double gamma) {
    return ModelSpec{CklsDrift{{a, b}}, sigma, gamma};
}

ModelSpec ModelSpec::random_delay(DelayDriftSpec spec, double sigma, double gamma) {
    return ModelSpec{DelayDrift{std::move(spec)}, sigma, gamma};
}

void ModelSpec::validate() const {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw ConfigError("sigma must be a finite value >= 0");
    }
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw ConfigError("gamma must lie in [0, 1]");
    }
    std::visit(overloaded{
                   [this](const CirDrift& d) {
                       if (gamma != 0.5) throw ConfigError("CIR model requires gamma = 0.5");
                       if (!(d.a >= 0.0 && d.b >= 0.0)) throw ConfigError("CIR drift needs a, b >= 0");
                   },
                   [](const CklsDrift& d) {
                       if (!(d.a >= 0.0 && d.b >= 0.0)) throw ConfigError("CKLS drift needs a, b >= 0");
                   },
                   [](const DelayDrift& d) { d.spec.validate(); },
               },
               drift);
}

double ModelSpec::delay() const noexcept {
    if (const auto* d = std::get_if<DelayDrift>(&drift)) return d->spec.lambda;
    return 0.0;
}

double eval_drift(const ModelSpec& spec, double x, double x_lagged) {
    if (!(x > 0.0) || !(x_lagged > 0.0)) {
        throw DomainError("drift evaluated at a nonpositive state");
    }
    return std::visit(overloaded{
                          [x](const MeanReverting& d) { return d.a * d.b - d.a * x; },
                          [x, x_lagged](const DelayDrift& dd) {
                              const DelayDriftSpec& s = dd.spec;
                              const double log_x = std::log(x);
                              const double log_y = std::log(x_lagged);
                              double sum = 0.0;
                              for (std::size_t k = 0; k < s.n_terms(); ++k) {
                                  const double f = s.a[k] * (s.b[k] - positive_pow(log_x, s.nu[k] + 0.5)) +
                                                   s.c[k] * std::cos(s.d[k] * x + s.e[k]);
                                  const double g =
                                      0.1 * s.a_hat[k] * (s.b_hat[k] - positive_pow(log_y, s.nu_hat[k] + 0.5));
                                  sum += f + g;
                              }
                              return sum;
                          },
                      },
                      spec.drift);
}

DelayDriftSpec sample_delay_drift(Rng& rng) {
    std::uniform_int_distribution<int> terms(1, 5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> delay(0.0, 0.2);

    DelayDriftSpec s;
    const auto n = static_cast<std::size_t>(terms(rng));
    s.lambda = delay(rng);
    for (auto* v : {&s.a, &s.b, &s.nu, &s.c, &s.d, &s.e, &s.a_hat, &s.b_hat, &s.nu_hat}) {
        v->resize(n);
    }
    // Term-major draw order: all parameters of term 1, then term 2, ...
    for (std::size_t k = 0; k < n; ++k) {
        for (auto* v : {&s.a, &s.b, &s.nu, &s.c, &s.d, &s.e, &s.a_hat, &s.b_hat, &s.nu_hat}) {
            (*v)[k] = unit(rng);
        }
    }
    return s;
}

std::string drift_name(const Drift& drift) {
    return std::visit(overloaded{
                          [](const CirDrift&) { return std::string("cir"); },
                          [](const CklsDrift&) { return std::string("ckls"); },
                          [](const DelayDrift&) { return std::string("random-delay"); },
                      },
                      drift);
}

}  // namespace powerdiff
