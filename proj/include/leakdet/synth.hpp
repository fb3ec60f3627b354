#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "leakdet/biquad.hpp"
#include "leakdet/fft.hpp"
#include "leakdet/rng.hpp"

// Synthetic sound field at the microphone. Sources are shaped Gaussian
// noise (or a short click) attenuated by spherical spreading plus barrier
// insertion losses. Levels are in dB re full scale (amplitude 1.0) of the
// 7-11.5 kHz in-band RMS at a 1 m reference distance; a click's level is
// its peak short-time RMS instead.

namespace leakdet {

enum class SourceKind : std::uint8_t { LeakSpray, LeakJet, Ambient, Impulse, PersistentNoise };
enum class SpectralShape : std::uint8_t { FlatAbove6kHz, LowPassJet, Broadband, Click };

inline SpectralShape default_shape(SourceKind kind) {
    switch (kind) {
        case SourceKind::LeakSpray: return SpectralShape::FlatAbove6kHz;
        case SourceKind::LeakJet: return SpectralShape::LowPassJet;
        case SourceKind::Ambient: return SpectralShape::Broadband;
        case SourceKind::Impulse: return SpectralShape::Click;
        case SourceKind::PersistentNoise: return SpectralShape::Broadband;
    }
    return SpectralShape::Broadband;
}

struct AcousticSource {
    SourceKind kind = SourceKind::LeakSpray;
    double level_db = -40.0;
    SpectralShape shape = SpectralShape::FlatAbove6kHz;
    double t_start_s = 0.0;
    double t_end_s = 0.0;

    bool active_during(double a, double b) const { return t_start_s < b && t_end_s > a; }
};

struct PropagationPath {
    double distance_m = 1.0;
    std::vector<double> barrier_losses_db;
};

inline constexpr double kMinDistanceM = 0.1;
inline constexpr double kSourceSetbackM = 0.15; // leak-to-barrier offset used in calibration

// Spreading loss plus barrier insertion losses, dB.
inline double path_loss_db(const PropagationPath& path) {
    if (path.distance_m < kMinDistanceM) {
        throw std::invalid_argument("path distance below 0.1 m is not modeled");
    }
    double loss = 20.0 * std::log10(path.distance_m);
    for (double b : path.barrier_losses_db) loss += b;
    return loss;
}

// Insertion loss that places the modeled detection threshold at the
// measured through-material distance, given the free-space range.
inline double calibrate_barrier_loss_db(double material_distance_m,
                                        double free_space_range_m = 10.0,
                                        double source_setback_m = kSourceSetbackM) {
    if (material_distance_m <= 0.0) throw std::invalid_argument("material detection distance must be positive");
    const double loss = 20.0 * std::log10(free_space_range_m / (material_distance_m + source_setback_m));
    if (loss < 0.0) throw std::invalid_argument("material distance beyond free-space range implies negative loss");
    return loss;
}

struct PlacedSource {
    AcousticSource source;
    PropagationPath path;
};

struct Scenario {
    std::vector<PlacedSource> sources;
    double duration_s = 60.0;
    std::uint64_t seed = 1;
    double ambient_level_db = -60.0; // -inf (or <= -300) means silence
};

inline constexpr double kSilentLevelDb = -300.0;
inline constexpr double kClickDurationS = 2.0e-3;
inline constexpr double kPersistentNoiseJitterDb = 6.0; // per-frame level modulation, std dev

namespace detail {

inline BiquadCascade shape_cascade(SpectralShape shape, double rate_hz) {
    BiquadCascade c;
    switch (shape) {
        case SpectralShape::FlatAbove6kHz:
            // White above 6 kHz, -12 dB/octave below.
            c.sections.push_back(design_highpass(6000.0, kButterworth2Q, rate_hz));
            break;
        case SpectralShape::LowPassJet:
            // -24 dB/octave above 3 kHz.
            c.sections.push_back(design_lowpass(3000.0, kButterworth4Q1, rate_hz));
            c.sections.push_back(design_lowpass(3000.0, kButterworth4Q2, rate_hz));
            break;
        case SpectralShape::Broadband:
        case SpectralShape::Click:
            break;
    }
    return c;
}

// Power of unit-variance white noise shaped by `shape`, integrated over
// [f_lo, f_hi] (one-sided), by Simpson quadrature of the discrete response.
inline double shaped_band_power(SpectralShape shape, double rate_hz, double f_lo, double f_hi) {
    const BiquadCascade cascade = shape_cascade(shape, rate_hz);
    constexpr int kIntervals = 2048; // even
    const double h = (f_hi - f_lo) / kIntervals;
    double sum = 0.0;
    for (int i = 0; i <= kIntervals; ++i) {
        const double f = f_lo + h * i;
        const double m = cascade.magnitude(f, rate_hz);
        const double w = (i == 0 || i == kIntervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        sum += w * m * m;
    }
    const double integral = sum * h / 3.0;
    return integral * 2.0 / rate_hz;
}

inline double cached_band_power(SpectralShape shape, double rate_hz, double f_lo, double f_hi) {
    static std::mutex mutex;
    static std::map<std::tuple<int, std::uint64_t, std::uint64_t, std::uint64_t>, double> cache;
    const auto key = std::make_tuple(static_cast<int>(shape), bits_of(rate_hz), bits_of(f_lo), bits_of(f_hi));
    {
        std::scoped_lock lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const double value = shaped_band_power(shape, rate_hz, f_lo, f_hi);
    std::scoped_lock lock(mutex);
    cache.emplace(key, value);
    return value;
}

// Stream tags; ambient uses a reserved slot distinct from all sources.
inline constexpr std::uint64_t kAmbientTag = 0xA3B1E57C'0FEE1234ULL;

inline std::uint64_t source_tag(std::size_t index) {
    return hash_mix(0x5EED50'7C3AULL, static_cast<std::uint64_t>(index) + 1);
}

} // namespace detail

// In-band RMS of unit-variance white noise after shaping; the calibration
// divisor that makes level_db mean in-band level.
inline double shape_band_rms(SpectralShape shape, double rate_hz) {
    return std::sqrt(detail::cached_band_power(shape, rate_hz, kBandLowHz, kBandHighHz));
}

// Total RMS of unit-variance white noise after shaping (tests use this to
// equalize total power across shapes).
inline double shape_total_rms(SpectralShape shape, double rate_hz) {
    return std::sqrt(detail::cached_band_power(shape, rate_hz, 0.0, rate_hz / 2.0));
}

// Pressure waveform at the microphone for n samples starting at t0.
// Identical (scenario, t0, n, rate) is bit-identical; each source and the
// ambient floor draw from independent hashed streams.
inline std::vector<double> synthesize_frame(const Scenario& scenario, double t0_s,
                                            std::size_t n, double rate_hz) {
    std::vector<double> out(n, 0.0);
    const double dt = 1.0 / rate_hz;
    const double t_end = t0_s + n * dt;

    if (scenario.ambient_level_db > kSilentLevelDb && std::isfinite(scenario.ambient_level_db)) {
        const double gain = db_to_linear(scenario.ambient_level_db) /
                            shape_band_rms(SpectralShape::Broadband, rate_hz);
        Rng rng = make_stream(scenario.seed, detail::kAmbientTag, t0_s);
        for (std::size_t i = 0; i < n; ++i) out[i] += gain * rng.gaussian();
    }

    for (std::size_t si = 0; si < scenario.sources.size(); ++si) {
        const auto& placed = scenario.sources[si];
        const auto& src = placed.source;
        if (!src.active_during(t0_s, t_end)) continue;

        const double loss_db = path_loss_db(placed.path);
        Rng rng = make_stream(scenario.seed, detail::source_tag(si), t0_s);

        if (src.shape == SpectralShape::Click) {
            // Raised-cosine noise burst at the source's start time.
            const double peak = db_to_linear(src.level_db - loss_db);
            for (std::size_t i = 0; i < n; ++i) {
                const double t = t0_s + i * dt;
                const double u = (t - src.t_start_s) / kClickDurationS;
                const double noise = rng.gaussian();
                if (u < 0.0 || u > 1.0) continue;
                const double envelope = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * u));
                out[i] += peak * envelope * noise;
            }
            continue;
        }

        double gain = db_to_linear(src.level_db - loss_db) / shape_band_rms(src.shape, rate_hz);
        if (src.kind == SourceKind::PersistentNoise) {
            // Erratic source: the level wanders frame to frame.
            Rng mod = make_stream(scenario.seed ^ 0x706e6f69'7365ULL, detail::source_tag(si), t0_s);
            gain *= db_to_linear(kPersistentNoiseJitterDb * mod.gaussian());
        }

        BiquadCascade shaping = detail::shape_cascade(src.shape, rate_hz);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = t0_s + i * dt;
            const double shaped = shaping.process(rng.gaussian());
            if (t < src.t_start_s || t >= src.t_end_s) continue;
            out[i] += gain * shaped;
        }
    }
    return out;
}

} // namespace leakdet
