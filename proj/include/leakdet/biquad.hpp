#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

// Second-order IIR sections and the designs used across the model:
// constant-peak-gain band-pass (resonator), Butterworth high-pass pairs
// (analog front end, spray shaping) and low-pass pairs (jet shaping).
// All designs are bilinear transforms of the analog prototypes with the
// characteristic frequencies prewarped, so magnitude checks at those
// frequencies are exact.

namespace leakdet {

inline double db_to_linear(double db) { return std::pow(10.0, db / 20.0); }
inline double linear_to_db(double lin) { return 20.0 * std::log10(lin); }

// Direct Form II transposed.
struct Biquad {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;
    double z1 = 0.0, z2 = 0.0;

    double process(double x) noexcept {
        const double y = b0 * x + z1;
        z1 = b1 * x - a1 * y + z2;
        z2 = b2 * x - a2 * y;
        return y;
    }

    void reset() noexcept { z1 = z2 = 0.0; }

    std::complex<double> response(double freq_hz, double rate_hz) const {
        const double w = 2.0 * std::numbers::pi * freq_hz / rate_hz;
        const std::complex<double> zi = std::polar(1.0, -w);
        const std::complex<double> zi2 = zi * zi;
        return (b0 + b1 * zi + b2 * zi2) / (1.0 + a1 * zi + a2 * zi2);
    }

    // Larger pole magnitude; < 1 means stable.
    double pole_radius() const {
        const std::complex<double> disc = std::sqrt(std::complex<double>(a1 * a1 - 4.0 * a2, 0.0));
        const double r1 = std::abs((-a1 + disc) / 2.0);
        const double r2 = std::abs((-a1 - disc) / 2.0);
        return std::max(r1, r2);
    }
};

struct BiquadCascade {
    std::vector<Biquad> sections;
    double gain = 1.0;

    double process(double x) noexcept {
        double y = x * gain;
        for (auto& s : sections) y = s.process(y);
        return y;
    }

    void process(std::span<const double> in, std::span<double> out) noexcept {
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = process(in[i]);
    }

    std::vector<double> apply(std::span<const double> in) {
        std::vector<double> out(in.size());
        process(in, out);
        return out;
    }

    void reset() noexcept {
        for (auto& s : sections) s.reset();
    }

    std::complex<double> response(double freq_hz, double rate_hz) const {
        std::complex<double> h(gain, 0.0);
        for (const auto& s : sections) h *= s.response(freq_hz, rate_hz);
        return h;
    }

    double magnitude(double freq_hz, double rate_hz) const {
        return std::abs(response(freq_hz, rate_hz));
    }

    double magnitude_db(double freq_hz, double rate_hz) const {
        return linear_to_db(magnitude(freq_hz, rate_hz));
    }

    double max_pole_radius() const {
        double r = 0.0;
        for (const auto& s : sections) r = std::max(r, s.pole_radius());
        return r;
    }
};

// Band-pass with exact peak gain at f0. The analog prototype's -3 dB edges
// are prewarped separately so the discrete bandwidth tracks f0/q.
inline Biquad design_bandpass(double f0_hz, double q, double peak_gain, double rate_hz) {
    if (f0_hz <= 0.0 || q <= 0.0) throw std::invalid_argument("band-pass needs f0 > 0 and q > 0");
    if (f0_hz >= rate_hz / 2.0) throw std::invalid_argument("band-pass center at or above Nyquist");

    const double pi = std::numbers::pi;
    const double half = 1.0 / (2.0 * q);
    const double root = std::sqrt(1.0 + half * half);
    const double f_lo = f0_hz * (root - half);
    const double f_hi = f0_hz * (root + half);

    const double v0 = std::tan(pi * f0_hz / rate_hz);
    const double v_lo = std::tan(pi * f_lo / rate_hz);
    // Upper edge may prewarp past Nyquist for wide bands; cap just below.
    const double f_hi_c = std::min(f_hi, 0.499 * rate_hz);
    const double v_hi = std::tan(pi * f_hi_c / rate_hz);
    const double bw = v_hi - v_lo;

    const double a0 = 1.0 + bw + v0 * v0;
    Biquad s;
    s.b0 = peak_gain * bw / a0;
    s.b1 = 0.0;
    s.b2 = -s.b0;
    s.a1 = 2.0 * (v0 * v0 - 1.0) / a0;
    s.a2 = (1.0 - bw + v0 * v0) / a0;
    return s;
}

// RBJ-style high-pass section (bilinear, prewarped cutoff).
inline Biquad design_highpass(double fc_hz, double stage_q, double rate_hz) {
    if (fc_hz <= 0.0 || fc_hz >= rate_hz / 2.0) throw std::invalid_argument("high-pass cutoff out of range");
    const double w0 = 2.0 * std::numbers::pi * fc_hz / rate_hz;
    const double cw = std::cos(w0);
    const double alpha = std::sin(w0) / (2.0 * stage_q);
    const double a0 = 1.0 + alpha;
    Biquad s;
    s.b0 = (1.0 + cw) / (2.0 * a0);
    s.b1 = -(1.0 + cw) / a0;
    s.b2 = s.b0;
    s.a1 = -2.0 * cw / a0;
    s.a2 = (1.0 - alpha) / a0;
    return s;
}

// RBJ-style low-pass section.
inline Biquad design_lowpass(double fc_hz, double stage_q, double rate_hz) {
    if (fc_hz <= 0.0 || fc_hz >= rate_hz / 2.0) throw std::invalid_argument("low-pass cutoff out of range");
    const double w0 = 2.0 * std::numbers::pi * fc_hz / rate_hz;
    const double cw = std::cos(w0);
    const double alpha = std::sin(w0) / (2.0 * stage_q);
    const double a0 = 1.0 + alpha;
    Biquad s;
    s.b0 = (1.0 - cw) / (2.0 * a0);
    s.b1 = (1.0 - cw) / a0;
    s.b2 = s.b0;
    s.a1 = -2.0 * cw / a0;
    s.a2 = (1.0 - alpha) / a0;
    return s;
}

// Stage Q values of an order-4 Butterworth alignment.
inline constexpr double kButterworth4Q1 = 0.541196100146197;
inline constexpr double kButterworth4Q2 = 1.306562964876377;
// Order-2 Butterworth.
inline constexpr double kButterworth2Q = 0.707106781186548;

} // namespace leakdet
