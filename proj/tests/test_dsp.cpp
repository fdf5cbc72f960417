#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "sahs/dsp.hpp"
#include "sahs/prng.hpp"

using namespace sahs::dsp;
using sahs::Rng;

namespace {

FilterSpec spec32(int order = 4, double cutoff = 3.0) {
    return FilterSpec{FilterSpec::Kind::ButterworthLowpass, order, cutoff, 32.0};
}

// independent unit-circle evaluation of the cascade transfer function,
// written against the polynomial definition rather than cascade_gain
double oracle_gain(const std::vector<Biquad>& sections, double f, double fs) {
    const std::complex<double> j(0.0, 1.0);
    const std::complex<double> z = std::exp(j * (2.0 * std::numbers::pi * f / fs));
    std::complex<double> h(1.0, 0.0);
    for (const Biquad& q : sections) {
        const std::complex<double> zi = 1.0 / z;
        h *= (q.b0 + q.b1 * zi + q.b2 * zi * zi) / (1.0 + q.a1 * zi + q.a2 * zi * zi);
    }
    return std::abs(h);
}

std::vector<double> sine(double f, double fs, std::size_t n, double amp = 1.0) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = amp * std::sin(2.0 * std::numbers::pi * f * static_cast<double>(i) / fs);
    return v;
}

double max_abs(const std::vector<double>& v, std::size_t from, std::size_t to) {
    double m = 0.0;
    for (std::size_t i = from; i < to; ++i) m = std::max(m, std::fabs(v[i]));
    return m;
}

}  // namespace

TEST_CASE("DC gain is exactly 1 after normalization") {
    for (int order : {1, 2, 3, 4, 6}) {
        const auto sections = design_lowpass(spec32(order));
        CHECK(std::fabs(cascade_gain(sections, 0.0, 32.0) - 1.0) < 1e-9);
        CHECK(std::fabs(oracle_gain(sections, 0.0, 32.0) - 1.0) < 1e-9);
    }
}

TEST_CASE("order 4 cutoff 3 Hz at fs 32: half-power at the cutoff") {
    const auto sections = design_lowpass(spec32());
    REQUIRE(sections.size() == 2);
    const double g3 = oracle_gain(sections, 3.0, 32.0);
    CHECK(g3 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.02 / 0.7071));
    CHECK(cascade_gain(sections, 3.0, 32.0) == doctest::Approx(g3).epsilon(1e-12));
}

TEST_CASE("Butterworth magnitude decreases with frequency") {
    const auto sections = design_lowpass(spec32());
    double prev = cascade_gain(sections, 0.0, 32.0);
    for (double f = 0.5; f <= 15.5; f += 0.5) {
        const double g = cascade_gain(sections, f, 32.0);
        CHECK(g < prev);
        prev = g;
    }
    CHECK(cascade_gain(sections, 12.0, 32.0) < 0.01 * cascade_gain(sections, 1.0, 32.0));
}

TEST_CASE("cutoff at or above Nyquist is rejected") {
    try {
        design_lowpass(spec32(4, 16.0));
        FAIL("expected CutoffAboveNyquist");
    } catch (const DspError& e) {
        CHECK(e.kind == DspError::Kind::CutoffAboveNyquist);
    }
    CHECK_THROWS_AS(design_lowpass(spec32(0, 3.0)), DspError);
}

TEST_CASE("filtfilt: constant in, same constant out") {
    const auto sections = design_lowpass(spec32());
    const std::vector<double> flat(256, 0.731);
    const auto out = filtfilt(sections, flat);
    REQUIRE(!out.too_short);
    REQUIRE(out.samples.size() == flat.size());
    for (double v : out.samples) CHECK(v == doctest::Approx(0.731).epsilon(1e-9));
}

TEST_CASE("filtfilt: passband sine keeps its amplitude") {
    const auto sections = design_lowpass(spec32());
    // squared-magnitude prediction from the transfer function
    const double predicted = oracle_gain(sections, 0.25, 32.0);
    const auto x = sine(0.25, 32.0, 4096);
    const auto y = filtfilt(sections, x);
    const double amp = max_abs(y.samples, 512, 3584);  // away from the edges
    CHECK(amp == doctest::Approx(predicted * predicted).epsilon(0.02));
    CHECK(amp > 0.98);
}

TEST_CASE("filtfilt: 10 Hz sine is crushed") {
    const auto sections = design_lowpass(spec32());
    const double predicted = oracle_gain(sections, 10.0, 32.0);
    CHECK(predicted * predicted < 0.05);  // double-pass attenuation
    const auto x = sine(10.0, 32.0, 2048);
    const auto y = filtfilt(sections, x);
    // the sine amplitude is measured away from the reflection-padding
    // transient at the edges
    CHECK(max_abs(y.samples, 64, y.samples.size() - 64) < 0.05);
}

TEST_CASE("filtfilt output length equals input length") {
    const auto sections = design_lowpass(spec32());
    Rng rng(5);
    for (std::size_t n : {13u, 64u, 301u}) {
        std::vector<double> x(n);
        for (double& v : x) v = rng.uniform(-1.0, 1.0);
        const auto y = filtfilt(sections, x);
        CHECK(y.samples.size() == n);
        if (n <= 12)
            CHECK(y.too_short);
        else
            CHECK(!y.too_short);
    }
}

TEST_CASE("too-short input comes back unchanged with the flag set") {
    const auto sections = design_lowpass(spec32());
    const std::vector<double> x = {1.0, 2.0, 3.0, 2.0, 1.0};
    const auto y = filtfilt(sections, x);
    CHECK(y.too_short);
    CHECK(y.samples == x);
}

TEST_CASE("filtfilt is linear") {
    const auto sections = design_lowpass(spec32());
    Rng rng(17);
    std::vector<double> x(200), y(200);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    for (double& v : y) v = rng.uniform(-1.0, 1.0);
    const double a = 1.7, b = -0.4;
    std::vector<double> mix(200);
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a * x[i] + b * y[i];

    const auto fx = filtfilt(sections, x).samples;
    const auto fy = filtfilt(sections, y).samples;
    const auto fmix = filtfilt(sections, mix).samples;
    for (std::size_t i = 0; i < mix.size(); ++i)
        CHECK(fmix[i] == doctest::Approx(a * fx[i] + b * fy[i]).epsilon(1e-9));
}

TEST_CASE("palindromic input keeps its symmetry (zero phase)") {
    const auto sections = design_lowpass(spec32());
    // bump far from the edges so the impulse response fully decays inside
    // the signal; the remaining asymmetry is pure roundoff
    const int n = 513;
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = std::exp(-std::pow((i - 256) / 20.0, 2));
    for (int i = 0; i < n / 2; ++i) {
        const double v = x[i] + x[n - 1 - i];
        x[i] = v;
        x[n - 1 - i] = v;
    }
    const auto y = filtfilt(sections, x).samples;
    for (int i = 0; i < n / 2; ++i) CHECK(std::fabs(y[i] - y[n - 1 - i]) < 1e-12);
}

TEST_CASE("finite input gives finite output") {
    const auto sections = design_lowpass(spec32());
    Rng rng(99);
    std::vector<double> x(5000);
    for (double& v : x) v = rng.uniform(-100.0, 100.0);
    for (double v : filtfilt(sections, x).samples) CHECK(std::isfinite(v));
}
