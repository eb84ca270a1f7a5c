#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "powerdiff/auxprocess.hpp"
#include "powerdiff/errors.hpp"

using namespace powerdiff;

namespace {

// Plain complex product, short inputs only (no rescaling).
double naive_log_modulus(const std::vector<double>& eta) {
    std::complex<long double> z = 1;
    for (double e : eta) z *= std::complex<long double>(1, e);
    return static_cast<double>(std::log(std::abs(z)));
}

SamplePath random_walk(std::size_t n, std::uint64_t seed, double scale = 0.05) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0, scale);
    std::vector<double> v{1.0};
    for (std::size_t i = 1; i < n; ++i) v.push_back(v.back() * std::exp(z(rng)));
    return SamplePath::from_values(v, 1.0 / static_cast<double>(n));
}

}  // namespace

TEST_CASE("constant path") {
    const auto p = SamplePath::from_values({1, 1, 1}, 0.5);
    for (double h : {0.0, 0.3, 1.0}) {
        const auto a = compute_aux(p, h);
        CHECK(a.eta == std::vector<double>{0, 0});
        CHECK(a.v == std::vector<double>{0, 0});
        CHECK(a.log_modulus_running == std::vector<double>{0, 0});
        CHECK(a.v_bar == 0.0);
    }
}

TEST_CASE("single step") {
    const auto a = compute_aux(SamplePath::from_values({4.0, 4.2}, 0.01), 0.5);
    REQUIRE(a.eta.size() == 1);
    CHECK(a.eta[0] == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(a.v[0] == doctest::Approx(std::log(1.01)).epsilon(1e-14));
    CHECK(a.log_modulus_running[0] == doctest::Approx(0.5 * std::log(1.01)).epsilon(1e-14));
    CHECK(a.v_bar == doctest::Approx(std::log(1.01)).epsilon(1e-14));
}

TEST_CASE("complex product agrees with the half sum") {
    const std::vector<double> eta{0.1, -0.2};
    CHECK(log_modulus_complex_oracle(eta) == doctest::Approx(0.0245856).epsilon(1e-6));
    CHECK(naive_log_modulus(eta) == doctest::Approx(0.5 * (std::log1p(0.01) + std::log1p(0.04))).epsilon(1e-14));
    CHECK(log_modulus_complex_oracle(eta) == doctest::Approx(naive_log_modulus(eta)).epsilon(1e-13));
}

TEST_CASE("oracle edge cases") {
    CHECK(log_modulus_complex_oracle(std::vector<double>{}) == 0.0);
    CHECK(log_modulus_complex_oracle(std::vector<double>{1.0}) == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
    CHECK(log_modulus_complex_oracle(std::vector<double>{0.0, 0.0}) == 0.0);
    // Tiny increments: the modulus barely exceeds one.
    const std::vector<double> tiny(50, 1e-9);
    CHECK(log_modulus_complex_oracle(tiny) == doctest::Approx(25 * 1e-18).epsilon(1e-9));
    // Long products overflow a plain double product but not the oracle.
    const std::vector<double> big(5000, 10.0);
    CHECK(log_modulus_complex_oracle(big) == doctest::Approx(2500 * std::log(101.0)).epsilon(1e-12));
}

TEST_CASE("oracle agreement on random paths") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto p = random_walk(1000, seed);
        for (double h : {0.0, 0.5, 1.0}) {
            const auto a = compute_aux(p, h);
            const double half = a.log_modulus_running.back();
            CHECK(std::abs(log_modulus_complex_oracle(a.eta) - half) <= 1e-12 * half);
        }
    }
}

TEST_CASE("series invariants") {
    const auto p = random_walk(500, 9);
    const auto a = compute_aux(p, 0.7);
    REQUIRE(a.eta.size() == p.values.size() - 1);
    REQUIRE(a.v.size() == a.eta.size());
    REQUIRE(a.log_modulus_running.size() == a.eta.size());
    double sum = 0;
    for (std::size_t k = 0; k < a.v.size(); ++k) {
        CHECK(a.v[k] > 0.0);
        CHECK(a.v[k] == doctest::Approx(std::log(1 + a.eta[k] * a.eta[k])).epsilon(1e-13));
        if (k > 0) CHECK(a.log_modulus_running[k] > a.log_modulus_running[k - 1]);
        sum += a.v[k];
    }
    CHECK(a.log_modulus_running.back() == doctest::Approx(0.5 * sum).epsilon(1e-13));
    CHECK(a.v_bar == doctest::Approx(sum / a.v.size()).epsilon(1e-13));
}

TEST_CASE("running modulus is flat across zero increments") {
    const auto a = compute_aux(SamplePath::from_values({1, 2, 2, 3}, 0.1), 0.5);
    CHECK(a.log_modulus_running[1] == a.log_modulus_running[0]);
    CHECK(a.log_modulus_running[2] > a.log_modulus_running[1]);
}

TEST_CASE("h = 1 increments are scale invariant") {
    const auto p = random_walk(300, 4);
    const auto base = compute_aux(p, 1.0);
    for (double c : {0.5, 4.0, 1024.0}) {
        std::vector<double> scaled = p.values;
        for (double& v : scaled) v *= c;
        const auto s = compute_aux(SamplePath::from_values(scaled, p.delta), 1.0);
        for (std::size_t k = 0; k < base.eta.size(); ++k) CHECK(s.eta[k] == doctest::Approx(base.eta[k]).epsilon(1e-14));
    }
    // Powers of two scale exactly.
    std::vector<double> scaled = p.values;
    for (double& v : scaled) v *= 8.0;
    CHECK(compute_aux(SamplePath::from_values(scaled, p.delta), 1.0).eta == base.eta);
}

TEST_CASE("argument checks") {
    const auto p = SamplePath::from_values({1, 2}, 0.1);
    CHECK_THROWS_AS(compute_aux(p, -0.1), ConfigError);
    CHECK_THROWS_AS(compute_aux(p, 1.5), ConfigError);
    SamplePath single;
    single.delta = 0.1;
    single.values = {1.0};
    CHECK_THROWS_AS(compute_aux(single, 0.5), DegenerateError);
}
