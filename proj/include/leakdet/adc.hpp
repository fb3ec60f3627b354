#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "leakdet/fft.hpp"

// 12-bit ADC around a mid-rail virtual ground. Codes 0..4095; the overload
// flag records whether any sample had to be clipped at a rail.

namespace leakdet {

struct AdcModel {
    int bits = 12;
    double full_scale = 100.0; // input amplitude mapped to a rail
    double rate_hz = kSampleRateHz;

    int levels() const { return 1 << bits; }
    int mid_code() const { return levels() / 2; }
    int max_code() const { return levels() - 1; }
    double lsb() const { return full_scale / static_cast<double>(mid_code()); }
};

struct AdcFrame {
    std::array<std::uint16_t, kFrameLength> codes{};
    bool overload = false;
};

inline AdcFrame adc_convert(const AdcModel& m, std::span<const double> input) {
    if (input.size() != kFrameLength) throw std::invalid_argument("adc_convert requires exactly 256 samples");
    const double lsb = m.lsb();
    const long mid = m.mid_code();
    const long max_code = m.max_code();

    AdcFrame out;
    for (std::size_t i = 0; i < kFrameLength; ++i) {
        long q = std::lround(input[i] / lsb) + mid;
        if (q < 0) {
            q = 0;
            out.overload = true;
        } else if (q > max_code) {
            q = max_code;
            out.overload = true;
        }
        out.codes[i] = static_cast<std::uint16_t>(q);
    }
    return out;
}

inline double adc_dequantize(const AdcModel& m, std::uint16_t code) {
    return (static_cast<double>(code) - m.mid_code()) * m.lsb();
}

// Mid-rail removed codes, in LSB units, ready for the FFT.
inline Frame adc_frame_to_samples(const AdcFrame& f, const AdcModel& m, double t0_s) {
    Frame frame;
    frame.t0_s = t0_s;
    for (std::size_t i = 0; i < kFrameLength; ++i) {
        frame.samples[i] = static_cast<double>(f.codes[i]) - m.mid_code();
    }
    return frame;
}

} // namespace leakdet
