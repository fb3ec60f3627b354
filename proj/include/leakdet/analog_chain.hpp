#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "leakdet/biquad.hpp"

// Analog front end between microphone and ADC: 40 dB pre-gain, two
// Sallen-Key high-pass sections (Butterworth alignment, 3 dB at the
// cutoff), 23 dB post-gain. All poles sit below the passband; natural
// high-frequency roll-off is not modeled.

namespace leakdet {

struct AnalogChain {
    double pre_gain_db = 40.0;
    double hp_cutoff_hz = 8000.0;
    int hp_order = 4; // two second-order stages; the only realized order
    double post_gain_db = 23.0;

    double total_gain_db() const { return pre_gain_db + post_gain_db; }
};

inline BiquadCascade make_analog_cascade(const AnalogChain& c, double rate_hz) {
    if (c.hp_order != 4) throw std::invalid_argument("analog chain realizes a 4th-order high-pass only");
    BiquadCascade cascade;
    cascade.gain = db_to_linear(c.total_gain_db());
    cascade.sections.push_back(design_highpass(c.hp_cutoff_hz, kButterworth4Q1, rate_hz));
    cascade.sections.push_back(design_highpass(c.hp_cutoff_hz, kButterworth4Q2, rate_hz));
    return cascade;
}

inline std::vector<double> analog_chain_filter(const AnalogChain& c,
                                               std::span<const double> input,
                                               double rate_hz) {
    BiquadCascade cascade = make_analog_cascade(c, rate_hz);
    return cascade.apply(input);
}

} // namespace leakdet
