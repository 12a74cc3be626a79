#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "emh/config.hpp"
#include "emh/metrics.hpp"
#include "fixtures.hpp"

using namespace emh;

namespace {

ExperimentTrace crafted(std::initializer_list<std::vector<double>> rows)
{
    ExperimentTrace trace;
    std::size_t i = 0;
    for (const auto& row : rows) {
        TraceEntry e;
        e.iteration = ++i;
        e.routing = RoutingVector::star(row.size());
        e.station_energy = row;
        e.bottleneck_energy = *std::max_element(row.begin(), row.end());
        trace.entries.push_back(e);
    }
    return trace;
}

Deployment testbed()
{
    return load_deployment(test::config_path("testbed9.json"));
}

}  // namespace

TEST_CASE("historic bottleneck is a max of sums")
{
    const ExperimentTrace trace = crafted({{3.0, 1.0}, {1.0, 3.0}});
    CHECK(historic_bottleneck(trace, 1) == 3.0);
    CHECK(historic_bottleneck(trace, 2) == 4.0);
    const auto e_b = bottleneck_series(trace);
    CHECK(std::accumulate(e_b.begin(), e_b.end(), 0.0) == 6.0);
    CHECK(historic_series(trace) == std::vector<double>{3.0, 4.0});

    CHECK_THROWS_AS(historic_bottleneck(trace, 0), std::invalid_argument);
    CHECK_THROWS_AS(historic_bottleneck(trace, 3), std::invalid_argument);
    CHECK_THROWS_AS(historic_bottleneck(ExperimentTrace{}, 1), std::invalid_argument);
}

TEST_CASE("property: historic bottleneck bounds on generated traces")
{
    const Deployment d = testbed();
    for (Policy policy : {Policy::SingleHop, Policy::Emh}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const ExperimentTrace trace = run_experiment(d, policy, 60, 2, seed);
            const auto historic = historic_series(trace);
            const auto e_b = bottleneck_series(trace);
            CHECK(historic.front() == e_b.front());
            double running = 0.0;
            for (std::size_t t = 0; t < historic.size(); ++t) {
                running += e_b[t];
                CHECK(historic[t] <= running * (1.0 + 1e-12));
                if (t > 0) {
                    CHECK(historic[t] >= historic[t - 1]);
                }
            }
            CHECK(historic_bottleneck(trace, 37) == historic[36]);
        }
    }
}

TEST_CASE("single hop on a deterministic channel grows linearly")
{
    Deployment d = test::deterministic(testbed());
    d.association_cost = false;
    const ExperimentTrace trace = run_experiment(d, Policy::SingleHop, 20, 3, 1);
    const auto historic = historic_series(trace);
    for (std::size_t t = 0; t < historic.size(); ++t) {
        CHECK(historic[t] == doctest::Approx(static_cast<double>(t + 1) * historic[0]).epsilon(1e-12));
    }
}

TEST_CASE("saving ratio")
{
    CHECK(saving_ratio(2.0, 2.0) == 0.0);
    CHECK(saving_ratio(1.0, 0.93) == doctest::Approx(0.07));
    CHECK(saving_ratio(1.0, 1.2) == doctest::Approx(-0.2));
    CHECK_THROWS_AS(saving_ratio(0.0, 1.0), std::domain_error);

    const ExperimentTrace same = crafted({{1.0, 2.0}, {2.0, 1.0}});
    CHECK(saving_ratio(same, same, 2) == 0.0);
}

TEST_CASE("early exploration can cost energy")
{
    const Deployment d = testbed();
    int negative = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const ExperimentTrace sh = run_experiment(d, Policy::SingleHop, 10, 10, derive_seed(seed, 0));
        const ExperimentTrace emh = run_experiment(d, Policy::Emh, 10, 10, derive_seed(seed, 1));
        const ComparisonSeries c = compare(sh, emh);
        if (*std::min_element(c.rho.begin(), c.rho.end()) < 0.0) {
            ++negative;
        }
    }
    CHECK(negative > 0);
}

TEST_CASE("moving average")
{
    CHECK(moving_average({1.0, 2.0, 3.0, 4.0}, 2) == std::vector<double>{1.0, 1.5, 2.5, 3.5});
    std::vector<double> ramp(15);
    std::iota(ramp.begin(), ramp.end(), 1.0);
    CHECK(moving_average(ramp).back() == doctest::Approx(8.0));
    CHECK(moving_average(ramp)[0] == 1.0);
    CHECK(moving_average({}, 3).empty());
    CHECK_THROWS_AS(moving_average({1.0}, 0), std::invalid_argument);

    ramp.push_back(16.0);
    CHECK(moving_average(ramp).back() == doctest::Approx(9.0));
}

TEST_CASE("lifetime")
{
    Deployment d;
    ExperimentTrace trace;
    for (int i = 0; i < 40; ++i) {
        TraceEntry e;
        e.station_energy = {1.0, 0.5};
        e.bottleneck_energy = 1.0;
        trace.entries.push_back(e);
    }
    // 800 mAh * 3.6 * 3.3 V = 9504 J at 1 J per iteration
    REQUIRE(estimate_lifetime(trace, d).has_value());
    CHECK(*estimate_lifetime(trace, d) == doctest::Approx(9504.0));
    d.battery_capacity_mah *= 2.0;
    CHECK(*estimate_lifetime(trace, d) == doctest::Approx(2.0 * 9504.0));

    ExperimentTrace idle = crafted({{0.0, 0.0}, {0.0, 0.0}});
    CHECK_FALSE(estimate_lifetime(idle, d).has_value());
    CHECK_THROWS_AS(estimate_lifetime(ExperimentTrace{}, d), std::invalid_argument);
}

TEST_CASE("learning extends the testbed lifetime")
{
    const Deployment d = testbed();
    int longer = 0;
    const int seeds = 10;
    for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
        const auto sh = run_experiment(d, Policy::SingleHop, 110, 10, derive_seed(seed, 0));
        const auto emh = run_experiment(d, Policy::Emh, 110, 10, derive_seed(seed, 1));
        if (*estimate_lifetime(emh, d) >= *estimate_lifetime(sh, d)) {
            ++longer;
        }
    }
    CHECK(longer >= seeds * 7 / 10);
}

TEST_CASE("comparison series agrees with the direct ratio")
{
    const Deployment d = testbed();
    const auto sh = run_experiment(d, Policy::SingleHop, 30, 4, 3);
    const auto emh = run_experiment(d, Policy::Emh, 30, 4, 4);
    const ComparisonSeries c = compare(sh, emh);
    REQUIRE(c.size() == 30);
    for (std::size_t t = 1; t <= 30; ++t) {
        CHECK(c.rho[t - 1] == saving_ratio(sh, emh, t));
    }
    CHECK(c.e_b_emh_smoothed == moving_average(bottleneck_series(emh), 15));

    std::ostringstream os;
    write_comparison_csv(os, c);
    const std::string text = os.str();
    CHECK(text.rfind("iteration,e_b_sh,e_b_emh,E_sh,E_emh,rho,e_b_emh_ma15\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 31);
}
