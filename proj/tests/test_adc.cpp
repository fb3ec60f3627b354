#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <numbers>

#include "leakdet/adc.hpp"
#include "leakdet/rng.hpp"

using namespace leakdet;
using Catch::Approx;

namespace {

std::array<double, kFrameLength> sine(double amplitude) {
    std::array<double, kFrameLength> x{};
    for (std::size_t n = 0; n < kFrameLength; ++n) {
        x[n] = amplitude * std::sin(2.0 * std::numbers::pi * 10.0 * n / double(kFrameLength));
    }
    return x;
}

} // namespace

TEST_CASE("all-zero waveform sits at mid-rail", "[adc]") {
    const AdcModel m;
    std::array<double, kFrameLength> x{};
    const AdcFrame f = adc_convert(m, x);
    CHECK_FALSE(f.overload);
    for (auto c : f.codes) CHECK(c == 2048);
}

TEST_CASE("overdriven sine overloads", "[adc]") {
    const AdcModel m;
    const AdcFrame f = adc_convert(m, sine(1.2 * m.full_scale));
    CHECK(f.overload);
    bool clipped_high = false, clipped_low = false;
    for (auto c : f.codes) {
        clipped_high |= c == 4095;
        clipped_low |= c == 0;
    }
    CHECK(clipped_high);
    CHECK(clipped_low);
}

TEST_CASE("half-scale sine spans the expected code range", "[adc]") {
    const AdcModel m;
    const AdcFrame f = adc_convert(m, sine(0.5 * m.full_scale));
    CHECK_FALSE(f.overload);
    int lo = 4095, hi = 0;
    for (auto c : f.codes) {
        lo = std::min<int>(lo, c);
        hi = std::max<int>(hi, c);
    }
    CHECK(lo == Approx(1024).margin(2));
    CHECK(hi == Approx(3072).margin(2));
}

TEST_CASE("quantization error stays within one LSB in range", "[adc][property]") {
    const AdcModel m;
    Rng rng(5150);
    std::array<double, kFrameLength> x{};
    for (auto& v : x) v = (rng.uniform() * 2.0 - 1.0) * 0.95 * m.full_scale;
    const AdcFrame f = adc_convert(m, x);
    REQUIRE_FALSE(f.overload);
    for (std::size_t i = 0; i < kFrameLength; ++i) {
        CHECK(std::abs(adc_dequantize(m, f.codes[i]) - x[i]) <= m.lsb());
    }
}

TEST_CASE("mid-rail removal feeds the FFT in code units", "[adc]") {
    const AdcModel m;
    std::array<double, kFrameLength> x{};
    const AdcFrame f = adc_convert(m, x);
    const Frame frame = adc_frame_to_samples(f, m, 1.5);
    CHECK(frame.t0_s == 1.5);
    for (double s : frame.samples) CHECK(s == 0.0);
}

TEST_CASE("wrong sample count is rejected", "[adc]") {
    const AdcModel m;
    std::vector<double> bad(100, 0.0);
    CHECK_THROWS_AS(adc_convert(m, bad), std::invalid_argument);
}
