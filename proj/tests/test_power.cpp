#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "leakdet/csv.hpp"
#include "leakdet/power.hpp"

using namespace leakdet;
using Catch::Approx;

namespace {

Timeline constant_timeline(int tau_s, int polls, int acq_per_poll) {
    Timeline t;
    t.config = MonitorConfig{20, tau_s, 17};
    for (int i = 0; i < polls; ++i) {
        PollRecord row;
        row.t_s = (i + 1) * double(tau_s);
        row.event = acq_per_poll == 5 ? PollEvent::Leak : PollEvent::Quiet;
        row.acquisitions = acq_per_poll;
        t.rows.push_back(row);
    }
    return t;
}

} // namespace

TEST_CASE("average power at the documented operating points", "[power]") {
    const PowerParams p;

    const PowerReport two_s = average_power(p, 2.0, 1.0);
    CHECK(two_s.avg_power_w * 1e6 == Approx(82.0).epsilon(1e-9));
    CHECK(two_s.sleep_fraction > 0.99);
    CHECK(two_s.sleep_fraction == Approx(1.0 - 0.00768 / 2.0).margin(1e-4));

    CHECK(average_power(p, 30.0, 1.0).avg_power_w * 1e6 == Approx(12.0 + 140.0 / 30.0).epsilon(1e-9));
    CHECK(average_power(p, 1.0, 1.0).avg_power_w * 1e6 == Approx(152.0).epsilon(1e-9));
}

TEST_CASE("default battery lasts multiple years at tau = 2", "[power]") {
    const PowerReport r = average_power(PowerParams{}, 2.0, 1.0);
    CHECK(r.lifetime_years() >= 3.0);
    CHECK(r.lifetime_years() == Approx(0.8 * 12960.0 / 82e-6 / (365.25 * 24 * 3600)).epsilon(1e-9));
}

TEST_CASE("power rejects out-of-range inputs", "[power]") {
    const PowerParams p;
    CHECK_THROWS_AS(average_power(p, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(average_power(p, 31.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(average_power(p, 2.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(average_power(p, 2.0, 6.0), std::invalid_argument);
}

TEST_CASE("average power decreases with the polling period", "[power][property]") {
    const PowerParams p;
    double prev = 1.0;
    for (int tau = 1; tau <= 30; ++tau) {
        const double w = average_power(p, tau, 1.0).avg_power_w;
        CHECK(w < prev);
        prev = w;
    }
}

TEST_CASE("quiet sweep spans the documented power window", "[power]") {
    const auto rows = power_sweep(PowerParams{});
    REQUIRE(rows.size() == 30);
    for (const auto& row : rows) {
        CHECK(row.avg_power_uw >= 15.0);
        CHECK(row.avg_power_uw <= 160.0);
    }
    CHECK(rows.front().tau_s == 1);
    CHECK(rows.back().tau_s == 30);
    CHECK(rows.front().avg_power_uw == Approx(152.0));
    CHECK(rows.back().avg_power_uw == Approx(16.6667).margin(0.01));
}

TEST_CASE("timeline integration equals the closed form on constant counts", "[power]") {
    const PowerParams p;
    const Timeline quiet = constant_timeline(2, 500, 1);
    const PowerReport sim = simulate_energy(quiet, p);
    const PowerReport closed = average_power(p, 2.0, 1.0);
    CHECK(sim.avg_power_w == Approx(closed.avg_power_w).epsilon(1e-12));
    CHECK(sim.sleep_fraction == Approx(closed.sleep_fraction).epsilon(1e-12));
    CHECK(sim.lifetime_s == Approx(closed.lifetime_s).epsilon(1e-12));

    // All-leak: five acquisitions per poll.
    const PowerReport busy = simulate_energy(constant_timeline(2, 500, 5), p);
    CHECK(busy.avg_power_w * 1e6 == Approx(12.0 + 5.0 * 70.0).epsilon(1e-12));
}

TEST_CASE("power CSV emitters use the fixed headers", "[power][csv]") {
    std::ostringstream sweep_csv;
    write_power_sweep_csv(sweep_csv, power_sweep(PowerParams{}));
    CHECK(sweep_csv.str().rfind("tau_s,acq_per_poll,avg_power_uW,sleep_fraction,lifetime_years\n", 0) == 0);

    std::ostringstream report_csv;
    const Timeline t = constant_timeline(2, 10, 1);
    write_power_report_csv(report_csv, t, simulate_energy(t, PowerParams{}));
    CHECK(report_csv.str().rfind(kPowerReportHeader, 0) == 0);
}
