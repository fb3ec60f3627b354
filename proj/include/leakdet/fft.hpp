#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>

// The digital path run per acquisition: a fixed 256-point radix-2 FFT with
// uniform window and the 34-bin spectral energy sum over 7-11.5 kHz.

namespace leakdet {

inline constexpr std::size_t kFrameLength = 256;
inline constexpr double kSampleRateHz = 33333.0;
inline constexpr double kBinHz = kSampleRateHz / static_cast<double>(kFrameLength); // 130.20703125
inline constexpr double kFrameDurationS = static_cast<double>(kFrameLength) / kSampleRateHz;

inline constexpr double kBandLowHz = 7000.0;
inline constexpr double kBandHighHz = 11500.0;
inline constexpr int kBandBinCount = 34;

// First bin at or above 7 kHz: ceil(7000 / bin_hz) via integer arithmetic.
inline constexpr int kBandFirstBin =
    static_cast<int>((7000ULL * kFrameLength + 33333ULL - 1ULL) / 33333ULL); // 54
inline constexpr int kBandLastBin = kBandFirstBin + kBandBinCount - 1;       // 87

static_assert(kBandFirstBin == 54);
static_assert(kBandLastBin == 87);
// Both edges stay inside the selected range.
static_assert(kBandFirstBin * 33333ULL >= 7000ULL * kFrameLength);
static_assert(kBandLastBin * 33333ULL <= 11500ULL * kFrameLength);

struct Frame {
    std::array<double, kFrameLength> samples{};
    double t0_s = 0.0;
};

// One-sided spectrum, bins 0..128 of an unnormalized forward DFT.
struct Spectrum {
    std::array<std::complex<double>, kFrameLength / 2 + 1> bins{};

    static constexpr double bin_hz() { return kBinHz; }
    double frequency_of(int k) const { return k * kBinHz; }
};

struct BandEnergy {
    double value = 0.0;
    int first_bin = kBandFirstBin;
    int last_bin = kBandLastBin;
};

namespace detail {

struct FftTables {
    std::array<std::complex<double>, kFrameLength / 2> twiddle{};
    std::array<std::uint16_t, kFrameLength> bit_reverse{};

    FftTables() {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        for (std::size_t k = 0; k < kFrameLength / 2; ++k) {
            const double phase = -two_pi * static_cast<double>(k) / static_cast<double>(kFrameLength);
            twiddle[k] = {std::cos(phase), std::sin(phase)};
        }
        for (std::size_t i = 0; i < kFrameLength; ++i) {
            std::uint16_t r = 0;
            for (int b = 0; b < 8; ++b) r |= ((i >> b) & 1u) << (7 - b);
            bit_reverse[i] = r;
        }
    }
};

inline const FftTables& fft_tables() {
    static const FftTables tables;
    return tables;
}

} // namespace detail

// Unnormalized forward DFT of a real 256-sample frame; returns bins 0..128.
inline Spectrum fft256(std::span<const double> samples) {
    if (samples.size() != kFrameLength) throw std::invalid_argument("fft256 requires exactly 256 samples");

    const auto& tables = detail::fft_tables();
    std::array<std::complex<double>, kFrameLength> work;
    for (std::size_t i = 0; i < kFrameLength; ++i) work[tables.bit_reverse[i]] = samples[i];

    for (std::size_t len = 2; len <= kFrameLength; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t step = kFrameLength / len;
        for (std::size_t start = 0; start < kFrameLength; start += len) {
            for (std::size_t j = 0; j < half; ++j) {
                const std::complex<double> w = tables.twiddle[j * step];
                const std::complex<double> t = w * work[start + j + half];
                const std::complex<double> u = work[start + j];
                work[start + j] = u + t;
                work[start + j + half] = u - t;
            }
        }
    }

    Spectrum out;
    for (std::size_t k = 0; k <= kFrameLength / 2; ++k) out.bins[k] = work[k];
    return out;
}

inline Spectrum fft256(const Frame& frame) {
    return fft256(std::span<const double>(frame.samples));
}

// Sum of squared bin magnitudes over the detection band (one-sided,
// undoubled; every downstream comparison is a ratio of like quantities).
inline BandEnergy spectral_energy(const Spectrum& spectrum) {
    double sum = 0.0;
    for (int k = kBandFirstBin; k <= kBandLastBin; ++k) sum += std::norm(spectrum.bins[k]);
    return BandEnergy{sum};
}

} // namespace leakdet
