#pragma once

#include <stdexcept>
#include <vector>

#include "leakdet/detector.hpp"
#include "leakdet/fft.hpp"

// Duty-cycle energy accounting: continuous sleep drain plus a fixed energy
// cost per acoustic acquisition.

namespace leakdet {

struct PowerParams {
    double sleep_power_w = 12e-6;
    double acq_energy_j = 140e-6;
    double peak_current_a = 3.2e-3;
    double battery_capacity_j = 12960.0; // 2x AAA alkaline, ~3.6 Wh
    double derating = 0.8;               // usable fraction
};

struct PowerReport {
    double avg_power_w = 0.0;
    double sleep_fraction = 1.0;
    double lifetime_s = 0.0;
    double peak_current_a = 0.0;

    double lifetime_years() const { return lifetime_s / (365.25 * 24.0 * 3600.0); }
};

inline constexpr double kAcquireWindowS = kFrameDurationS; // 7.68 ms awake per acquisition

inline PowerReport average_power(const PowerParams& p, double tau_s, double acq_per_poll,
                                 double overhead_s = 0.0) {
    if (tau_s < 1.0 || tau_s > 30.0) throw std::invalid_argument("polling period must be in [1, 30] s");
    if (acq_per_poll < 1.0 || acq_per_poll > 5.0) throw std::invalid_argument("acquisitions per poll must be in [1, 5]");

    PowerReport r;
    r.avg_power_w = p.sleep_power_w + acq_per_poll * p.acq_energy_j / tau_s;
    r.sleep_fraction = 1.0 - acq_per_poll * (kAcquireWindowS + overhead_s) / tau_s;
    r.lifetime_s = p.derating * p.battery_capacity_j / r.avg_power_w;
    r.peak_current_a = p.peak_current_a;
    return r;
}

// Integrates the acquisition counts a monitoring run actually performed;
// equals average_power when the count per poll is constant.
inline PowerReport simulate_energy(const Timeline& timeline, const PowerParams& p) {
    if (timeline.rows.empty()) throw std::invalid_argument("timeline has no polls");

    long total_acq = 0;
    for (const auto& row : timeline.rows) total_acq += row.acquisitions;
    const double duration_s = static_cast<double>(timeline.rows.size()) * timeline.config.tau_s;

    PowerReport r;
    r.avg_power_w = p.sleep_power_w + static_cast<double>(total_acq) * p.acq_energy_j / duration_s;
    r.sleep_fraction = 1.0 - static_cast<double>(total_acq) * kAcquireWindowS / duration_s;
    r.lifetime_s = p.derating * p.battery_capacity_j / r.avg_power_w;
    r.peak_current_a = p.peak_current_a;
    return r;
}

struct PowerSweepRow {
    int tau_s = 0;
    double acq_per_poll = 1.0;
    double avg_power_uw = 0.0;
    double sleep_fraction = 1.0;
    double lifetime_years = 0.0;
};

inline std::vector<PowerSweepRow> power_sweep(const PowerParams& p, double acq_per_poll = 1.0) {
    std::vector<PowerSweepRow> rows;
    for (int tau = 1; tau <= 30; ++tau) {
        const PowerReport r = average_power(p, tau, acq_per_poll);
        rows.push_back(PowerSweepRow{tau, acq_per_poll, r.avg_power_w * 1e6, r.sleep_fraction,
                                     r.lifetime_years()});
    }
    return rows;
}

} // namespace leakdet
