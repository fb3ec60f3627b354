#pragma once

#include <span>
#include <vector>

#include "leakdet/adc.hpp"
#include "leakdet/analog_chain.hpp"
#include "leakdet/fft.hpp"
#include "leakdet/resonator.hpp"
#include "leakdet/synth.hpp"

// One acoustic acquisition: synthesize the field, run it through the
// resonator, analog chain and ADC, then FFT and band-sum. An overloaded
// conversion short-circuits; no spectrum is computed for it.

namespace leakdet {

// Reference geometry of the as-built cavity.
inline ResonatorGeometry reference_geometry() { return ResonatorGeometry{}; }

// Loaded (in-circuit) quality factor used by the monitoring chain; the
// lossless lumped estimate for the same geometry is ~33.
inline constexpr double kLoadedResonatorQ = 8.0;

struct FrontEnd {
    ResonatorResponse resonator;
    AnalogChain chain;
    AdcModel adc;
};

inline FrontEnd default_front_end() {
    FrontEnd fe;
    fe.resonator = design_resonator(reference_geometry());
    fe.resonator.q = kLoadedResonatorQ;
    fe.chain = AnalogChain{};
    fe.adc = AdcModel{};
    return fe;
}

inline BiquadCascade make_front_end_cascade(const FrontEnd& fe, double rate_hz) {
    BiquadCascade cascade = make_analog_cascade(fe.chain, rate_hz);
    cascade.sections.insert(cascade.sections.begin(), make_resonator_biquad(fe.resonator, rate_hz));
    return cascade;
}

struct Acquisition {
    bool overload = false;
    double band_energy = 0.0;
};

struct AcquisitionDetail {
    bool overload = false;
    double band_energy = 0.0;
    AdcFrame adc_frame;
    Spectrum spectrum; // zeros when overloaded
};

// Filters settle over one frame of pre-roll before the 256 kept samples.
inline constexpr std::size_t kAcquirePrerollSamples = kFrameLength;

inline AcquisitionDetail acquire_detail(const FrontEnd& fe, const Scenario& scenario, double t0_s) {
    const double rate = fe.adc.rate_hz;
    const std::size_t total = kAcquirePrerollSamples + kFrameLength;
    const double t_start = t0_s - static_cast<double>(kAcquirePrerollSamples) / rate;

    const std::vector<double> wave = synthesize_frame(scenario, t_start, total, rate);
    BiquadCascade cascade = make_front_end_cascade(fe, rate);
    const std::vector<double> filtered = cascade.apply(wave);

    AcquisitionDetail out;
    out.adc_frame = adc_convert(fe.adc, std::span<const double>(filtered).subspan(kAcquirePrerollSamples));
    out.overload = out.adc_frame.overload;
    if (out.overload) return out;

    const Frame frame = adc_frame_to_samples(out.adc_frame, fe.adc, t0_s);
    out.spectrum = fft256(frame);
    out.band_energy = spectral_energy(out.spectrum).value;
    return out;
}

inline Acquisition acquire(const FrontEnd& fe, const Scenario& scenario, double t0_s) {
    const AcquisitionDetail d = acquire_detail(fe, scenario, t0_s);
    return Acquisition{d.overload, d.band_energy};
}

} // namespace leakdet
