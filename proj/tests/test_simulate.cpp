#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "powerdiff/errors.hpp"
#include "powerdiff/estimators.hpp"
#include "powerdiff/simulate.hpp"

using namespace powerdiff;

namespace {

SimConfig config(long n, double y0, std::uint64_t seed = 0) {
    SimConfig c;
    c.n_steps = n;
    c.y0 = y0;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("zero drift and zero noise gives a constant path") {
    const auto p = euler_maruyama(ModelSpec::cir(0, 0, 0), config(10, 1.0));
    REQUIRE(p.values.size() == 11);
    for (double v : p.values) CHECK(v == 1.0);
    CHECK_FALSE(p.stopped_early);
    CHECK(p.m0 == 0);
    CHECK(p.m == 10);
    CHECK(p.delta == doctest::Approx(0.1));
}

TEST_CASE("deterministic limit converges monotonically") {
    SimConfig c = config(2000, 1.0);
    c.horizon = 20.0;
    const auto p = euler_maruyama(ModelSpec::cir(1, 2, 0), c);
    for (std::size_t i = 1; i < p.values.size(); ++i) {
        CHECK(p.values[i] > p.values[i - 1]);
        CHECK(p.values[i] < 2.0);
    }
    CHECK(p.values.back() == doctest::Approx(2.0).epsilon(1e-6));
    // Euler for y' = 2 - y: y_k = 2 - (1 - delta)^k.
    CHECK(p.values[100] == doctest::Approx(2.0 - std::pow(1.0 - c.delta(), 100)).epsilon(1e-12));
}

TEST_CASE("cir moments at T=1 match the closed form") {
    const auto model = ModelSpec::cir(1, 1, 0.3);
    const int trials = 10000;
    std::vector<double> ys;
    for (int i = 0; i < trials; ++i) {
        const auto p = euler_maruyama(model, config(250, 1.0, 1000 + i));
        REQUIRE_FALSE(p.stopped_early);
        ys.push_back(p.values.back());
    }
    double mean = 0;
    for (double y : ys) mean += y;
    mean /= trials;
    double m2 = 0, m4 = 0;
    for (double y : ys) {
        const double d = (y - mean) * (y - mean);
        m2 += d;
        m4 += d * d;
    }
    m2 /= trials;
    m4 /= trials;
    const auto exact = cir_moments(1, 1, 0.3, 1.0, 1.0);
    CHECK(exact.mean == doctest::Approx(1.0));
    CHECK(std::abs(mean - exact.mean) < 3 * std::sqrt(m2 / trials));
    CHECK(std::abs(m2 - exact.variance) < 3 * std::sqrt((m4 - m2 * m2) / trials));
}

TEST_CASE("initial value sampler") {
    Rng rng(8);
    double s = 0;
    for (int i = 0; i < 10000; ++i) {
        const double y = sample_y0(rng);
        CHECK(y >= 0.1);
        CHECK(y <= 10.0);
        s += y;
    }
    CHECK(std::abs(s / 10000 - 5.05) <= 0.1);
    Rng a(77), b(77);
    CHECK(sample_y0(a) == sample_y0(b));
}

TEST_CASE("random initial value is used when y0 is empty") {
    SimConfig c;
    c.seed = 3;
    const auto p = euler_maruyama(ModelSpec::ckls(1, 1, 0.3, 0.5), c);
    CHECK(p.values.front() >= 0.1);
    CHECK(p.values.front() <= 10.0);
}

TEST_CASE("paths stay positive under harsh noise") {
    // Large sigma and gamma = 0 push plenty of Euler steps below zero.
    const auto model = ModelSpec::ckls(0, 0, 3.0, 0.0);
    std::size_t fixes = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        SimConfig c = config(50, 1.0, seed);
        c.stop_ratio = 1e-9;
        const auto p = euler_maruyama(model, c);
        CHECK(*std::min_element(p.values.begin(), p.values.end()) > 0.0);
        fixes += p.positivity_fixes;
    }
    CHECK(fixes > 0);
}

TEST_CASE("stop rule fires at the first crossing") {
    const auto model = ModelSpec::ckls(0, 0, 2.0, 0.5);
    int stopped = 0;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        SimConfig c = config(500, 1.0, seed);
        c.stop_ratio = 0.2;
        const auto p = euler_maruyama(model, c);
        const double threshold = c.stop_ratio * p.values.front();
        const auto first = std::find_if(p.values.begin() + 1, p.values.end(),
                                        [&](double v) { return v <= threshold; });
        if (p.stopped_early) {
            ++stopped;
            REQUIRE(first != p.values.end());
            CHECK(first == p.values.end() - 1);
            CHECK(p.m == static_cast<long>(p.values.size()) - 1);
            CHECK(p.m < c.n_steps);
        } else {
            CHECK(first == p.values.end());
            CHECK(p.m == c.n_steps);
        }
    }
    CHECK(stopped > 0);
}

TEST_CASE("same seed gives the same path bit for bit") {
    Rng r(12);
    const auto model = ModelSpec::random_delay(sample_delay_drift(r), 0.3, 0.6);
    const auto a = euler_maruyama(model, config(1000, 2.5, 42));
    const auto b = euler_maruyama(model, config(1000, 2.5, 42));
    CHECK(a.values == b.values);
    const auto c = euler_maruyama(model, config(1000, 2.5, 43));
    CHECK(a.values != c.values);
}

TEST_CASE("delay lag rules") {
    SimConfig c = config(250, 1.0);
    CHECK(delay_steps(0.0, c) == 0);
    CHECK(delay_steps(0.1, c) == 25);
    CHECK(delay_steps(0.2, c) == 50);
    c.delay_rule = DelayRule::Literal;
    CHECK(delay_steps(0.2, c) == 0);
    c.n_steps = 3;
    c.horizon = 10.0;
    CHECK(delay_steps(0.5, c) == 1);
}

TEST_CASE("config validation") {
    const auto model = ModelSpec::cir(1, 1, 0.3);
    SimConfig c = config(10, 1.0);
    c.y0 = 0.0;
    CHECK_THROWS_AS(euler_maruyama(model, c), ConfigError);
    c = config(1, 1.0);
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = config(10, 1.0);
    c.horizon = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = config(10, 1.0);
    c.stop_ratio = 1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("sample path validation") {
    CHECK_THROWS(SamplePath::from_values({1.0}, 0.1));
    CHECK_THROWS(SamplePath::from_values({1.0, -1.0}, 0.1));
    CHECK_THROWS(SamplePath::from_values({1.0, 2.0}, 0.0));
    const auto p = SamplePath::from_values({1.0, 2.0, 3.0}, 0.5, 1.0);
    CHECK(p.m == 2);
    CHECK(p.end_time() == 2.0);
}
