#include "powerdiff/simulate.hpp"

#include <cmath>
#include <sstream>

#include "powerdiff/errors.hpp"

namespace powerdiff {

void SamplePath::validate() const {
    if (values.size() < 2) {
        throw DegenerateError("path needs at least two observations");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw ConfigError("path grid step must be positive");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
            std::ostringstream msg;
            msg << "path value at index " << i << " is not a finite positive number";
            throw DomainError(msg.str());
        }
    }
}

SamplePath SamplePath::from_values(std::vector<double> values, double delta, double theta) {
    SamplePath p;
    p.theta = theta;
    p.delta = delta;
    p.m0 = 0;
    p.m = values.empty() ? 0 : static_cast<long>(values.size()) - 1;
    p.values = std::move(values);
    p.validate();
    return p;
}

void SimConfig::validate() const {
    if (n_steps < 2) throw ConfigError("n_steps must be >= 2");
    if (!(horizon > theta)) throw ConfigError("horizon must exceed theta");
    if (!(stop_ratio > 0.0 && stop_ratio < 1.0)) throw ConfigError("stop_ratio must lie in (0, 1)");
    if (y0 && (!(*y0 > 0.0) || !std::isfinite(*y0))) throw ConfigError("y0 must be a finite positive number");
}

long delay_steps(double lambda, const SimConfig& cfg) {
    const double span = cfg.horizon - cfg.theta;
    const double n = static_cast<double>(cfg.n_steps);
    switch (cfg.delay_rule) {
        case DelayRule::Literal:
            return static_cast<long>(std::floor(lambda * span / (n + 1.0)));
        case DelayRule::GridStep:
        default:
            return static_cast<long>(std::floor(lambda * n / span));
    }
}

SamplePath euler_maruyama(const ModelSpec& model, const SimConfig& cfg, Rng& rng) {
    model.validate();
    cfg.validate();

    const double y0 = cfg.y0 ? *cfg.y0 : sample_y0(rng);
    const double delta = cfg.delta();
    const double noise_scale = model.sigma * std::sqrt(delta);
    const double threshold = cfg.stop_ratio * y0;
    const long lag = model.is_delay() ? delay_steps(model.delay(), cfg) : 0;

    SamplePath path;
    path.theta = cfg.theta;
    path.delta = delta;
    path.m0 = 0;
    path.values.reserve(static_cast<std::size_t>(cfg.n_steps) + 1);
    path.values.push_back(y0);

    std::normal_distribution<double> normal(0.0, 1.0);
    for (long k = 0; k < cfg.n_steps; ++k) {
        const double y = path.values.back();
        const double y_lagged = path.values[static_cast<std::size_t>(k - lag > 0 ? k - lag : 0)];
        const double xi = normal(rng);
        double next = y + eval_drift(model, y, y_lagged) * delta +
                      noise_scale * std::exp(model.gamma * std::log(y)) * xi;
        if (!(next > 0.0) || !std::isfinite(next)) {
            next = y;
            ++path.positivity_fixes;
        }
        path.values.push_back(next);
        if (next <= threshold) {
            path.stopped_early = true;
            break;
        }
    }
    path.m = static_cast<long>(path.values.size()) - 1;
    return path;
}

SamplePath euler_maruyama(const ModelSpec& model, const SimConfig& cfg) {
    Rng rng(cfg.seed);
    return euler_maruyama(model, cfg, rng);
}

double sample_y0(Rng& rng) {
    std::uniform_real_distribution<double> dist(0.1, 10.0);
    return dist(rng);
}

}  // namespace powerdiff
