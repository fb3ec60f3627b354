#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "leakdet/fft.hpp"
#include "leakdet/synth.hpp"

using namespace leakdet;
using Catch::Approx;

namespace {

double frame_band_energy(const std::vector<double>& wave) {
    return spectral_energy(fft256(std::span<const double>(wave).first(kFrameLength))).value;
}

// In-band power estimate with a Hann window; rectangular-window leakage
// from strong out-of-band content would otherwise swamp the band bins.
double hann_band_power(const std::vector<double>& wave) {
    std::array<double, kFrameLength> windowed{};
    double window_energy = 0.0;
    for (std::size_t n = 0; n < kFrameLength; ++n) {
        const double w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * n / double(kFrameLength)));
        windowed[n] = w * wave[n];
        window_energy += w * w;
    }
    const Spectrum s = fft256(windowed);
    double band = 0.0;
    for (int k = kBandFirstBin; k <= kBandLastBin; ++k) band += std::norm(s.bins[k]);
    // E[sum over band] = sum(w^2) * N * P_band / 2 for a smooth spectrum.
    return 2.0 * band / (window_energy * double(kFrameLength));
}

double frame_rms(const std::vector<double>& wave) {
    double e = 0.0;
    for (double v : wave) e += v * v;
    return std::sqrt(e / double(wave.size()));
}

Scenario single_source(AcousticSource src, PropagationPath path, std::uint64_t seed = 7) {
    Scenario sc;
    sc.seed = seed;
    sc.ambient_level_db = kSilentLevelDb;
    sc.duration_s = 1e6;
    sc.sources.push_back(PlacedSource{src, path});
    return sc;
}

AcousticSource spray(double level_db) {
    return AcousticSource{SourceKind::LeakSpray, level_db, SpectralShape::FlatAbove6kHz, 0.0, 1e6};
}

} // namespace

TEST_CASE("path loss follows spreading plus barriers", "[synth]") {
    CHECK(path_loss_db(PropagationPath{1.0, {}}) == Approx(0.0).margin(1e-12));
    CHECK(path_loss_db(PropagationPath{10.0, {}}) == Approx(20.0).margin(1e-12));
    CHECK(path_loss_db(PropagationPath{0.1, {}}) == Approx(-20.0).margin(1e-12));

    // A sub-reference distance with one barrier: spreading gain plus the
    // insertion loss, here ~20 dB total for a 22.5 dB barrier at 0.75 m.
    CHECK(path_loss_db(PropagationPath{0.75, {22.5}}) ==
          Approx(20.0 * std::log10(0.75) + 22.5).margin(1e-12));
    CHECK(path_loss_db(PropagationPath{0.75, {22.5}}) == Approx(20.0).margin(0.01));

    // Same path with the gypsum value from the calibration oracle.
    const double gypsum = calibrate_barrier_loss_db(0.585);
    CHECK(gypsum == Approx(22.7).margin(0.05));
    CHECK(path_loss_db(PropagationPath{0.75, {gypsum}}) == Approx(20.0 * std::log10(0.75) + gypsum));

    CHECK_THROWS_AS(path_loss_db(PropagationPath{0.05, {}}), std::invalid_argument);
}

TEST_CASE("path loss is monotone in distance and barriers", "[synth][property]") {
    double prev = path_loss_db(PropagationPath{0.1, {}});
    for (double d = 0.2; d < 40.0; d *= 1.37) {
        const double loss = path_loss_db(PropagationPath{d, {}});
        CHECK(loss > prev);
        prev = loss;
    }
    const double base = path_loss_db(PropagationPath{3.0, {5.0}});
    CHECK(path_loss_db(PropagationPath{3.0, {5.0, 2.5}}) == Approx(base + 2.5));
}

TEST_CASE("barrier calibration inverts the spreading law", "[synth]") {
    // Measured through-material spans, free-space range 10 m, 15 cm setback.
    CHECK(calibrate_barrier_loss_db(0.585) == Approx(20.0 * std::log10(10.0 / 0.735)).epsilon(1e-12));
    CHECK(calibrate_barrier_loss_db(0.735) == Approx(21.06).margin(0.05));

    // A material whose detection threshold already sits at the free-space
    // range adds no loss; beyond it the calibration has no solution.
    CHECK(calibrate_barrier_loss_db(9.85) == Approx(0.0).margin(1e-12));
    CHECK_THROWS_AS(calibrate_barrier_loss_db(12.0), std::invalid_argument);
    CHECK_THROWS_AS(calibrate_barrier_loss_db(0.0), std::invalid_argument);
}

TEST_CASE("zero sources and silent ambient give a zero frame", "[synth]") {
    Scenario sc;
    sc.ambient_level_db = kSilentLevelDb;
    const auto wave = synthesize_frame(sc, 0.0, kFrameLength, kSampleRateHz);
    for (double v : wave) CHECK(v == 0.0);
}

TEST_CASE("synthesis is deterministic per (scenario, seed, t0)", "[synth]") {
    const Scenario sc = single_source(spray(-40.0), PropagationPath{2.0, {}}, 99);
    const auto a = synthesize_frame(sc, 12.5, kFrameLength, kSampleRateHz);
    const auto b = synthesize_frame(sc, 12.5, kFrameLength, kSampleRateHz);
    CHECK(a == b);

    const auto c = synthesize_frame(sc, 12.5 + 1.0, kFrameLength, kSampleRateHz);
    CHECK(a != c);

    Scenario other = sc;
    other.seed = 100;
    CHECK(a != synthesize_frame(other, 12.5, kFrameLength, kSampleRateHz));
}

TEST_CASE("level scales linearly with shared seed", "[synth]") {
    const Scenario lo = single_source(spray(-60.0), PropagationPath{1.0, {}});
    const Scenario hi = single_source(spray(-40.0), PropagationPath{1.0, {}});
    const auto wl = synthesize_frame(lo, 3.0, kFrameLength, kSampleRateHz);
    const auto wh = synthesize_frame(hi, 3.0, kFrameLength, kSampleRateHz);
    for (std::size_t i = 0; i < wl.size(); ++i) {
        CHECK(wh[i] == Approx(10.0 * wl[i]).epsilon(1e-9));
    }
}

TEST_CASE("distance changes band energy by the spreading law", "[synth]") {
    const Scenario near = single_source(spray(-40.0), PropagationPath{1.0, {}});
    const Scenario far = single_source(spray(-40.0), PropagationPath{10.0, {}});

    double sum_near = 0.0, sum_far = 0.0;
    for (int k = 0; k < 150; ++k) {
        const double t0 = k * 1.0;
        sum_near += frame_band_energy(synthesize_frame(near, t0, kFrameLength, kSampleRateHz));
        sum_far += frame_band_energy(synthesize_frame(far, t0, kFrameLength, kSampleRateHz));
    }
    const double ratio_db = 10.0 * std::log10(sum_near / sum_far);
    CHECK(ratio_db == Approx(20.0).margin(1.0));
}

TEST_CASE("stationary source band energy is steady across frames", "[synth][property]") {
    const Scenario sc = single_source(spray(-40.0), PropagationPath{1.0, {}});
    std::vector<double> energies;
    for (int k = 0; k < 300; ++k) {
        energies.push_back(frame_band_energy(synthesize_frame(sc, k * 0.5, kFrameLength, kSampleRateHz)));
    }
    double mean = 0.0;
    for (double e : energies) mean += e;
    mean /= energies.size();
    double var = 0.0;
    for (double e : energies) var += (e - mean) * (e - mean);
    var /= energies.size();
    CHECK(std::sqrt(var) / mean < 0.25);
}

TEST_CASE("in-band level calibration is scale-consistent across shapes", "[synth]") {
    // A source at level L and 1 m should put 10^(L/10) of power into the
    // 7-11.5 kHz band regardless of its spectral shape.
    for (SpectralShape shape : {SpectralShape::FlatAbove6kHz, SpectralShape::LowPassJet, SpectralShape::Broadband}) {
        AcousticSource src{SourceKind::LeakSpray, -30.0, shape, 0.0, 1e6};
        const Scenario sc = single_source(src, PropagationPath{1.0, {}});
        double power = 0.0;
        const int frames = 400;
        for (int k = 0; k < frames; ++k) {
            power += hann_band_power(synthesize_frame(sc, k * 0.3, kFrameLength, kSampleRateHz));
        }
        const double measured_db = 10.0 * std::log10(power / frames);
        CHECK(measured_db == Approx(-30.0).margin(1.5));
    }
}

TEST_CASE("jet shape starves the detection band", "[synth]") {
    // Equal total power, at least 10 dB less in-band energy than the spray.
    const double spray_total = shape_total_rms(SpectralShape::FlatAbove6kHz, kSampleRateHz) /
                               shape_band_rms(SpectralShape::FlatAbove6kHz, kSampleRateHz);
    const double jet_total = shape_total_rms(SpectralShape::LowPassJet, kSampleRateHz) /
                             shape_band_rms(SpectralShape::LowPassJet, kSampleRateHz);
    // Level shift that equalizes total power when both are at 0 dB in-band.
    const double jet_level = 20.0 * std::log10(spray_total / jet_total);

    const Scenario spray_sc = single_source(spray(-30.0), PropagationPath{1.0, {}});
    AcousticSource jet{SourceKind::LeakJet, -30.0 + jet_level, SpectralShape::LowPassJet, 0.0, 1e6};
    const Scenario jet_sc = single_source(jet, PropagationPath{1.0, {}});

    double e_spray = 0.0, e_jet = 0.0, p_spray = 0.0, p_jet = 0.0;
    for (int k = 0; k < 300; ++k) {
        const auto ws = synthesize_frame(spray_sc, k * 0.4, kFrameLength, kSampleRateHz);
        const auto wj = synthesize_frame(jet_sc, k * 0.4, kFrameLength, kSampleRateHz);
        e_spray += hann_band_power(ws);
        e_jet += hann_band_power(wj);
        p_spray += frame_rms(ws) * frame_rms(ws);
        p_jet += frame_rms(wj) * frame_rms(wj);
    }
    CHECK(10.0 * std::log10(p_spray / p_jet) == Approx(0.0).margin(1.5)); // totals matched
    CHECK(10.0 * std::log10(e_spray / e_jet) >= 10.0);                    // band starved
}

TEST_CASE("impulse click rises far above the ambient floor", "[synth]") {
    Scenario sc;
    sc.seed = 3;
    sc.ambient_level_db = -60.0;
    sc.duration_s = 100.0;
    sc.sources.push_back(PlacedSource{
        AcousticSource{SourceKind::Impulse, -30.0, SpectralShape::Click, 10.0, 10.002}, PropagationPath{1.0, {}}});

    // Frame overlapping the click vs a quiet frame.
    const auto hit = synthesize_frame(sc, 10.0 - 2e-3, kFrameLength, kSampleRateHz);
    const auto quiet = synthesize_frame(sc, 50.0, kFrameLength, kSampleRateHz);
    double peak = 0.0;
    for (double v : hit) peak = std::max(peak, std::abs(v));
    CHECK(peak > 10.0 * frame_rms(quiet));

    // The click is confined to its 2 ms window.
    const auto miss = synthesize_frame(sc, 10.01, kFrameLength, kSampleRateHz);
    CHECK(frame_rms(miss) < 10.0 * frame_rms(quiet) / 100.0 + frame_rms(quiet) * 2.0);
}

TEST_CASE("sources are silent outside their active interval", "[synth]") {
    AcousticSource src = spray(-30.0);
    src.t_start_s = 100.0;
    src.t_end_s = 200.0;
    Scenario sc = single_source(src, PropagationPath{1.0, {}});
    const auto before = synthesize_frame(sc, 50.0, kFrameLength, kSampleRateHz);
    for (double v : before) CHECK(v == 0.0);
    const auto during = synthesize_frame(sc, 150.0, kFrameLength, kSampleRateHz);
    CHECK(frame_rms(during) > 0.0);
}
