#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "leakdet/detector.hpp"
#include "leakdet/fft.hpp"
#include "leakdet/pipeline.hpp"
#include "leakdet/power.hpp"

// Fixed-header CSV emitters. Numeric formatting goes through snprintf so
// outputs are byte-identical for identical inputs.

namespace leakdet {

namespace detail {
inline std::string fmt(double v, const char* spec = "%.9g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}
} // namespace detail

inline constexpr const char* kTimelineHeader = "time_s,event,q,s,r,alarm,noise";

inline void write_timeline_csv(std::ostream& out, const Timeline& timeline) {
    out << kTimelineHeader << "\n";
    for (const auto& row : timeline.rows) {
        out << detail::fmt(row.t_s) << ',' << poll_event_code(row.event) << ',' << row.quiet << ','
            << row.leak << ',' << row.noise << ',' << (row.alarm ? 1 : 0) << ','
            << (row.noise_flag ? 1 : 0) << "\n";
    }
}

inline constexpr const char* kPowerReportHeader =
    "tau_s,polls,total_acquisitions,avg_power_uW,sleep_fraction,lifetime_years,peak_current_mA";

inline void write_power_report_csv(std::ostream& out, const Timeline& timeline, const PowerReport& report) {
    long total_acq = 0;
    for (const auto& row : timeline.rows) total_acq += row.acquisitions;
    out << kPowerReportHeader << "\n";
    out << timeline.config.tau_s << ',' << timeline.rows.size() << ',' << total_acq << ','
        << detail::fmt(report.avg_power_w * 1e6) << ',' << detail::fmt(report.sleep_fraction) << ','
        << detail::fmt(report.lifetime_years()) << ',' << detail::fmt(report.peak_current_a * 1e3) << "\n";
}

inline constexpr const char* kPowerSweepHeader =
    "tau_s,acq_per_poll,avg_power_uW,sleep_fraction,lifetime_years";

inline void write_power_sweep_csv(std::ostream& out, const std::vector<PowerSweepRow>& rows) {
    out << kPowerSweepHeader << "\n";
    for (const auto& r : rows) {
        out << r.tau_s << ',' << detail::fmt(r.acq_per_poll) << ',' << detail::fmt(r.avg_power_uw) << ','
            << detail::fmt(r.sleep_fraction) << ',' << detail::fmt(r.lifetime_years) << "\n";
    }
}

inline constexpr const char* kSpectrumHeader = "bin_index,frequency_hz,magnitude";

inline void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
    out << kSpectrumHeader << "\n";
    for (std::size_t k = 0; k < spectrum.bins.size(); ++k) {
        out << k << ',' << detail::fmt(k * kBinHz) << ',' << detail::fmt(std::abs(spectrum.bins[k])) << "\n";
    }
}

inline constexpr const char* kFreqResponseHeader = "frequency_hz,magnitude_db";

// Magnitude response of a configured chain on a fixed 10 Hz grid.
enum class ChainSelect { Full, Analog, Resonator };

inline void write_freq_response_csv(std::ostream& out, const FrontEnd& fe, ChainSelect select) {
    BiquadCascade cascade;
    switch (select) {
        case ChainSelect::Full: cascade = make_front_end_cascade(fe, fe.adc.rate_hz); break;
        case ChainSelect::Analog: cascade = make_analog_cascade(fe.chain, fe.adc.rate_hz); break;
        case ChainSelect::Resonator:
            cascade.sections.push_back(make_resonator_biquad(fe.resonator, fe.adc.rate_hz));
            break;
    }
    out << kFreqResponseHeader << "\n";
    for (double f = 10.0; f < fe.adc.rate_hz / 2.0; f += 10.0) {
        out << detail::fmt(f) << ',' << detail::fmt(cascade.magnitude_db(f, fe.adc.rate_hz), "%.6f") << "\n";
    }
}

} // namespace leakdet
