#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

// Training and monitoring state machine. Band energies arrive through a
// caller-supplied acquisition callable (double t -> Acquisition-like), so
// the logic is testable against hand-crafted sequences.

#include "leakdet/pipeline.hpp"

namespace leakdet {

enum class PollEvent : std::uint8_t { Quiet = 0, Leak = 1, Noise = 2 };

inline char poll_event_code(PollEvent e) {
    switch (e) {
        case PollEvent::Quiet: return 'Q';
        case PollEvent::Leak: return 'L';
        case PollEvent::Noise: return 'R';
    }
    return '?';
}

struct TrainingConfig {
    int set_size = 30;          // 10..255
    double sample_period_s = 1.0;
};

struct Baseline {
    double mean = 0.0;    // x_bar_B
    double std_dev = 0.0; // sigma_B (population)

    double threshold() const { return mean + std_dev; }
    bool stable() const { return 2.0 * std_dev < mean; }
};

struct MonitorConfig {
    int n = 20;       // event window size, 10..255
    int tau_s = 2;    // polling period, 1..30 s
    int t_alarm = 17; // alarm threshold, <= n

    void validate() const {
        if (n < 10 || n > 255) throw std::invalid_argument("event set size must be in [10, 255]");
        if (tau_s < 1 || tau_s > 30) throw std::invalid_argument("polling period must be in [1, 30] s");
        if (t_alarm < 0 || t_alarm > n) throw std::invalid_argument("alarm threshold must not exceed the event set size");
    }
};

inline constexpr double kConfirmSpacingS = 0.045; // inter-acquisition gap in a confirmation burst
inline constexpr int kConfirmCount = 5;           // total energies entering the mean/std check

// Population statistics, matching the firmware's divide-by-count convention.
inline void population_stats(const std::vector<double>& xs, double& mean, double& std_dev) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    mean = sum / static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size());
    std_dev = std::sqrt(var);
}

struct TrainingResult {
    bool success = false;
    Baseline baseline;
    int sessions = 0;      // sessions run (accepted one included)
    int acquisitions = 0;  // every attempt, overloaded ones included
    double end_time_s = 0.0;
};

// Collects set_size clean band energies at the training rate, retrying
// overloaded ticks, until a session satisfies 2*sigma < mean. A zero
// session cap loops indefinitely, as the device does; a positive cap also
// bounds overload retries (8x the set size per session), so a background
// that saturates every acquisition still terminates.
template <class AcquireFn>
TrainingResult run_training(const TrainingConfig& cfg, AcquireFn&& acquire_fn,
                            double t_start_s = 0.0, int max_sessions = 0) {
    if (cfg.set_size < 10 || cfg.set_size > 255) throw std::invalid_argument("training set size must be in [10, 255]");

    TrainingResult result;
    double t = t_start_s;
    std::vector<double> energies;
    energies.reserve(static_cast<std::size_t>(cfg.set_size));

    while (true) {
        ++result.sessions;
        energies.clear();
        int attempts = 0;
        const int attempt_budget = max_sessions > 0 ? 8 * cfg.set_size : 0;
        bool session_aborted = false;
        while (static_cast<int>(energies.size()) < cfg.set_size) {
            if (attempt_budget > 0 && attempts >= attempt_budget) {
                session_aborted = true;
                break;
            }
            const Acquisition a = acquire_fn(t);
            ++result.acquisitions;
            ++attempts;
            t += cfg.sample_period_s;
            if (a.overload) continue; // discard, repeat at the next tick
            energies.push_back(a.band_energy);
        }
        if (!session_aborted) {
            Baseline b;
            population_stats(energies, b.mean, b.std_dev);
            if (b.stable()) {
                result.success = true;
                result.baseline = b;
                result.end_time_s = t;
                return result;
            }
        }
        if (max_sessions > 0 && result.sessions >= max_sessions) {
            result.end_time_s = t;
            return result; // background never stabilized
        }
    }
}

struct PollOutcome {
    PollEvent event = PollEvent::Quiet;
    int acquisitions = 0;
};

// One polling cycle. Overload on the first acquisition is noise; an energy
// at or below the threshold is quiet; otherwise four confirmations at 45 ms
// spacing must stay clean and stable (2*sigma < mean) with every energy
// above threshold to count as a leak.
template <class AcquireFn>
PollOutcome poll_classify(const Baseline& baseline, AcquireFn&& acquire_fn, double t_s) {
    const double threshold = baseline.threshold();

    const Acquisition first = acquire_fn(t_s);
    if (first.overload) return {PollEvent::Noise, 1};
    if (!(first.band_energy > threshold)) return {PollEvent::Quiet, 1};

    std::vector<double> energies{first.band_energy};
    for (int i = 1; i < kConfirmCount; ++i) {
        const Acquisition a = acquire_fn(t_s + kConfirmSpacingS * i);
        if (a.overload) return {PollEvent::Noise, i + 1}; // abort the burst
        energies.push_back(a.band_energy);
    }

    double mean = 0.0, std_dev = 0.0;
    population_stats(energies, mean, std_dev);
    if (2.0 * std_dev > mean) return {PollEvent::Noise, kConfirmCount};

    for (double x : energies) {
        if (!(x > threshold)) return {PollEvent::Quiet, kConfirmCount}; // impulse, recorded as quiet
    }
    return {PollEvent::Leak, kConfirmCount};
}

// Three parallel N-slot 0/1 rings sharing one write cursor; exactly one
// ring takes a 1 per poll, so q + s + r == N always.
class EventArrays {
public:
    explicit EventArrays(int n) : n_(n), events_(static_cast<std::size_t>(n), PollEvent::Quiet) {
        if (n < 1) throw std::invalid_argument("event arrays need at least one slot");
        counts_[static_cast<int>(PollEvent::Quiet)] = n;
    }

    void push(PollEvent e) {
        PollEvent& slot = events_[cursor_];
        --counts_[static_cast<int>(slot)];
        slot = e;
        ++counts_[static_cast<int>(e)];
        cursor_ = (cursor_ + 1) % events_.size();
    }

    int n() const { return n_; }
    int quiet_count() const { return counts_[static_cast<int>(PollEvent::Quiet)]; }
    int leak_count() const { return counts_[static_cast<int>(PollEvent::Leak)]; }
    int noise_count() const { return counts_[static_cast<int>(PollEvent::Noise)]; }

private:
    int n_;
    std::vector<PollEvent> events_;
    std::size_t cursor_ = 0;
    int counts_[3] = {0, 0, 0};
};

struct SensorStatus {
    bool alarm = false;
    bool noise = false;
};

// S >= T alarms; S < T with S + R >= T means the environment is too loud
// to listen reliably. The two conditions are mutually exclusive.
inline SensorStatus evaluate_status(const EventArrays& arrays, const MonitorConfig& cfg) {
    SensorStatus st;
    const int s = arrays.leak_count();
    const int r = arrays.noise_count();
    st.alarm = s >= cfg.t_alarm;
    st.noise = (s < cfg.t_alarm) && (s + r >= cfg.t_alarm);
    return st;
}

struct PollRecord {
    double t_s = 0.0;
    PollEvent event = PollEvent::Quiet;
    int quiet = 0, leak = 0, noise = 0;
    bool alarm = false;
    bool noise_flag = false;
    int acquisitions = 0;
};

struct Timeline {
    MonitorConfig config;
    std::vector<PollRecord> rows;

    bool any_alarm() const {
        for (const auto& r : rows)
            if (r.alarm) return true;
        return false;
    }
    double first_alarm_s() const {
        for (const auto& r : rows)
            if (r.alarm) return r.t_s;
        return -1.0;
    }
    double first_noise_s() const {
        for (const auto& r : rows)
            if (r.noise_flag) return r.t_s;
        return -1.0;
    }
    int leak_event_count() const {
        int k = 0;
        for (const auto& r : rows) k += r.event == PollEvent::Leak;
        return k;
    }
};

// Polls every tau from t_start (first wake at t_start + tau) until
// t_start + duration, pushing each outcome and evaluating status.
template <class AcquireFn>
Timeline run_monitor(const Baseline& baseline, const MonitorConfig& cfg,
                     AcquireFn&& acquire_fn, double t_start_s, double duration_s) {
    cfg.validate();
    Timeline timeline;
    timeline.config = cfg;
    EventArrays arrays(cfg.n);

    const double t_stop = t_start_s + duration_s;
    for (double t = t_start_s + cfg.tau_s; t <= t_stop; t += cfg.tau_s) {
        const PollOutcome outcome = poll_classify(baseline, acquire_fn, t);
        arrays.push(outcome.event);
        const SensorStatus st = evaluate_status(arrays, cfg);
        timeline.rows.push_back(PollRecord{t, outcome.event, arrays.quiet_count(), arrays.leak_count(),
                                           arrays.noise_count(), st.alarm, st.noise, outcome.acquisitions});
    }
    return timeline;
}

// Convenience: acquisition callable bound to a front end and scenario.
struct ScenarioAcquirer {
    const FrontEnd& front_end;
    const Scenario& scenario;
    Acquisition operator()(double t_s) const { return acquire(front_end, scenario, t_s); }
};

} // namespace leakdet
