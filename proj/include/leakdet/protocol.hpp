#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "leakdet/detector.hpp"

// Controller-facing byte protocol. Commands are one opcode byte plus an
// optional one-byte payload; every opcode value produces a defined
// response. Configuration written while monitoring is staged and applied
// at the next training start, matching a device configured at startup.

namespace leakdet {

namespace opcode {
inline constexpr std::uint8_t kReadStatus = 0x01;
inline constexpr std::uint8_t kReadCounts = 0x02;
inline constexpr std::uint8_t kSetN = 0x10;
inline constexpr std::uint8_t kSetTau = 0x11;
inline constexpr std::uint8_t kSetT = 0x12;
inline constexpr std::uint8_t kSetTrainSize = 0x13;
inline constexpr std::uint8_t kStartTraining = 0x20;
inline constexpr std::uint8_t kSoftReset = 0x21;
} // namespace opcode

inline constexpr std::uint8_t kAck = 0xAA;
inline constexpr std::uint8_t kErrRange = 0xEE;   // payload missing or out of range
inline constexpr std::uint8_t kErrOpcode = 0xEF;  // unknown opcode

struct CommandFrame {
    std::uint8_t opcode = 0;
    std::optional<std::uint8_t> payload;
};

struct StatusByte {
    bool alarm = false;
    bool noise = false;
    bool monitoring = false;
    bool training = false;

    std::uint8_t pack() const {
        return static_cast<std::uint8_t>((alarm ? 0x01 : 0) | (noise ? 0x02 : 0) |
                                         (monitoring ? 0x04 : 0) | (training ? 0x08 : 0));
    }
    static StatusByte unpack(std::uint8_t b) {
        return StatusByte{(b & 0x01) != 0, (b & 0x02) != 0, (b & 0x04) != 0, (b & 0x08) != 0};
    }
};

struct SensorConfig {
    int train_size = 30;
    MonitorConfig monitor;
};

enum class SensorState : std::uint8_t { Training, Monitoring };

struct LineEvent {
    double t_s = 0.0;
    char line = 'A'; // 'A' alarm, 'N' noise
    int level = 0;
};

// Full sensor: scenario-driven training and polling plus the command
// surface. Commands are handled between acquisitions, so reads always see
// a consistent (q, s, r) snapshot.
class SensorDevice {
public:
    SensorDevice(FrontEnd front_end, Scenario scenario, SensorConfig config, double t_start_s = 0.0)
        : front_end_(std::move(front_end)),
          scenario_(std::move(scenario)),
          defaults_(config),
          committed_(config),
          pending_(config),
          arrays_(config.monitor.n),
          now_s_(t_start_s),
          next_tick_s_(t_start_s) {
        committed_.monitor.validate();
    }

    SensorState state() const { return state_; }
    const Baseline& baseline() const { return baseline_; }
    const SensorConfig& active_config() const { return committed_; }
    const SensorConfig& pending_config() const { return pending_; }
    double now_s() const { return now_s_; }

    int quiet_count() const { return arrays_.quiet_count(); }
    int leak_count() const { return arrays_.leak_count(); }
    int noise_count() const { return arrays_.noise_count(); }

    bool alarm() const { return status_.alarm; }
    bool noise_flag() const { return status_.noise; }
    int alarm_line() const { return status_.alarm ? 1 : 0; }
    int noise_line() const { return status_.noise ? 1 : 0; }
    const std::vector<LineEvent>& line_events() const { return line_events_; }

    StatusByte status() const {
        return StatusByte{status_.alarm, status_.noise, state_ == SensorState::Monitoring,
                          state_ == SensorState::Training};
    }
    std::uint8_t status_byte() const { return status().pack(); }

    // Run training ticks / polls due up to and including time t.
    void advance_to(double t_s) {
        while (next_tick_s_ <= t_s) {
            if (state_ == SensorState::Training) {
                training_tick();
            } else {
                poll_tick();
            }
        }
        now_s_ = t_s;
    }

    // Host-side poll injection: records an externally classified event as
    // if the polling cycle produced it. Used by host emulators and tests.
    void inject_event(PollEvent e) {
        arrays_.push(e);
        update_status(evaluate_status(arrays_, committed_.monitor));
        state_ = SensorState::Monitoring;
    }

    std::vector<std::uint8_t> handle_command(const CommandFrame& frame) {
        switch (frame.opcode) {
            case opcode::kReadStatus:
                return {status_byte()};
            case opcode::kReadCounts:
                return {static_cast<std::uint8_t>(arrays_.quiet_count()),
                        static_cast<std::uint8_t>(arrays_.leak_count()),
                        static_cast<std::uint8_t>(arrays_.noise_count())};
            case opcode::kSetN: {
                if (!frame.payload) return {kErrRange};
                const int v = *frame.payload;
                if (v < 10 || v > 255 || pending_.monitor.t_alarm > v) return {kErrRange};
                pending_.monitor.n = v;
                return commit_config();
            }
            case opcode::kSetTau: {
                if (!frame.payload) return {kErrRange};
                const int v = *frame.payload;
                if (v < 1 || v > 30) return {kErrRange};
                pending_.monitor.tau_s = v;
                return commit_config();
            }
            case opcode::kSetT: {
                if (!frame.payload) return {kErrRange};
                const int v = *frame.payload;
                if (v > pending_.monitor.n) return {kErrRange};
                pending_.monitor.t_alarm = v;
                return commit_config();
            }
            case opcode::kSetTrainSize: {
                if (!frame.payload) return {kErrRange};
                const int v = *frame.payload;
                if (v < 10 || v > 255) return {kErrRange};
                pending_.train_size = v;
                return commit_config();
            }
            case opcode::kStartTraining:
                begin_training(pending_);
                return {kAck};
            case opcode::kSoftReset:
                pending_ = defaults_;
                begin_training(defaults_);
                return {kAck};
            default:
                return {kErrOpcode};
        }
    }

private:
    std::vector<std::uint8_t> commit_config() {
        // Immediate outside monitoring; staged until retrain otherwise.
        if (state_ != SensorState::Monitoring) committed_ = pending_;
        return {kAck};
    }

    void begin_training(const SensorConfig& cfg) {
        committed_ = cfg;
        pending_ = cfg;
        state_ = SensorState::Training;
        baseline_ = Baseline{};
        training_set_.clear();
        arrays_ = EventArrays(committed_.monitor.n);
        update_status(SensorStatus{});
        next_tick_s_ = now_s_ + 1.0;
    }

    void training_tick() {
        const double t = next_tick_s_;
        now_s_ = t;
        next_tick_s_ = t + 1.0;
        const Acquisition a = acquire(front_end_, scenario_, t);
        if (a.overload) return; // discarded, retried next tick
        training_set_.push_back(a.band_energy);
        if (static_cast<int>(training_set_.size()) < committed_.train_size) return;

        Baseline b;
        population_stats(training_set_, b.mean, b.std_dev);
        training_set_.clear();
        if (!b.stable()) return; // too noisy: a new session begins
        baseline_ = b;
        state_ = SensorState::Monitoring;
        arrays_ = EventArrays(committed_.monitor.n);
        update_status(SensorStatus{});
        next_tick_s_ = t + committed_.monitor.tau_s;
    }

    void poll_tick() {
        const double t = next_tick_s_;
        now_s_ = t;
        next_tick_s_ = t + committed_.monitor.tau_s;
        const PollOutcome outcome = poll_classify(
            baseline_, [&](double ts) { return acquire(front_end_, scenario_, ts); }, t);
        arrays_.push(outcome.event);
        update_status(evaluate_status(arrays_, committed_.monitor));
    }

    void update_status(const SensorStatus& next) {
        if (next.alarm != status_.alarm) line_events_.push_back(LineEvent{now_s_, 'A', next.alarm ? 1 : 0});
        if (next.noise != status_.noise) line_events_.push_back(LineEvent{now_s_, 'N', next.noise ? 1 : 0});
        status_ = next;
    }

    FrontEnd front_end_;
    Scenario scenario_;
    SensorConfig defaults_;
    SensorConfig committed_;
    SensorConfig pending_;
    SensorState state_ = SensorState::Training;
    Baseline baseline_;
    std::vector<double> training_set_;
    EventArrays arrays_;
    SensorStatus status_;
    std::vector<LineEvent> line_events_;
    double now_s_;
    double next_tick_s_;
};

// Hex-dump trace: one line per direction, bytes upper-case two-digit hex.
inline std::string format_transaction(const CommandFrame& frame, const std::vector<std::uint8_t>& response) {
    char buf[8];
    std::string out = ">";
    std::snprintf(buf, sizeof buf, " %02X", frame.opcode);
    out += buf;
    if (frame.payload) {
        std::snprintf(buf, sizeof buf, " %02X", *frame.payload);
        out += buf;
    }
    out += "\n<";
    for (std::uint8_t b : response) {
        std::snprintf(buf, sizeof buf, " %02X", b);
        out += buf;
    }
    out += "\n";
    return out;
}

} // namespace leakdet
