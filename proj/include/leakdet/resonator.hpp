#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "leakdet/biquad.hpp"

// Helmholtz resonator over the microphone: lumped design math for the
// rectangular-chamber-with-hole geometry, and its discrete realization as
// a single second-order band-pass.

namespace leakdet {

struct ResonatorGeometry {
    double length_m = 3.9e-3;        // chamber footprint L
    double width_m = 3.2e-3;         // chamber footprint W
    double height_m = 3.5e-3;        // interior height H
    double hole_radius_m = 1.0e-3;   // a
    double wall_thickness_m = 1.0e-3; // t
    double speed_of_sound_mps = 343.0;

    double volume_m3() const { return length_m * width_m * height_m; }

    // Rayleigh end correction: effective neck length t' = t + 1.7a.
    double effective_neck_m() const { return wall_thickness_m + 1.7 * hole_radius_m; }
};

struct ResonatorResponse {
    double f0_hz = 0.0;
    double q = 0.0;
    double peak_gain = 2.0;
};

inline ResonatorResponse design_resonator(const ResonatorGeometry& g) {
    if (g.length_m <= 0.0 || g.width_m <= 0.0 || g.height_m <= 0.0 ||
        g.hole_radius_m <= 0.0 || g.wall_thickness_m <= 0.0 || g.speed_of_sound_mps <= 0.0) {
        throw std::invalid_argument("resonator geometry requires positive dimensions");
    }
    const double volume = g.volume_m3();
    const double neck = g.effective_neck_m();
    const double a = g.hole_radius_m;
    const double pi = std::numbers::pi;

    ResonatorResponse r;
    r.f0_hz = (g.speed_of_sound_mps * a / 2.0) * std::sqrt(1.0 / (pi * volume * neck));
    const double ratio = neck / (a * a);
    r.q = 2.0 * std::sqrt((volume / pi) * ratio * ratio * ratio);
    r.peak_gain = 2.0;
    return r;
}

inline Biquad make_resonator_biquad(const ResonatorResponse& r, double rate_hz) {
    if (r.f0_hz >= rate_hz / 2.0) throw std::invalid_argument("resonator center at or above Nyquist");
    return design_bandpass(r.f0_hz, r.q, r.peak_gain, rate_hz);
}

inline std::vector<double> resonator_filter(const ResonatorResponse& r,
                                            std::span<const double> input,
                                            double rate_hz) {
    Biquad section = make_resonator_biquad(r, rate_hz);
    std::vector<double> out(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) out[i] = section.process(input[i]);
    return out;
}

} // namespace leakdet
