#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sahs::dsp {

struct DspError : std::runtime_error {
    enum class Kind { CutoffAboveNyquist, BadSpec };
    Kind kind;
    DspError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

struct FilterSpec {
    enum class Kind { ButterworthLowpass };
    Kind kind = Kind::ButterworthLowpass;
    int order = 4;
    double cutoff_hz = 3.0;
    double sampling_rate_hz = 32.0;
};

// One second-order section; a1/a2 are the feedback coefficients with the
// leading denominator coefficient normalized to 1.
struct Biquad {
    double b0, b1, b2;
    double a1, a2;
};

// Butterworth lowpass via bilinear transform with cutoff prewarping, split
// into second-order sections. Each section is normalized to unit DC gain.
std::vector<Biquad> design_lowpass(const FilterSpec& spec);

// |H(e^{j 2 pi f / fs})| of the cascade.
double cascade_gain(const std::vector<Biquad>& sections, double freq_hz, double sampling_rate_hz);

struct FiltfiltResult {
    std::vector<double> samples;
    bool too_short = false;  // input returned unchanged
};

// Zero-phase forward-backward filtering. Edges are handled by odd
// reflection padding of 3 * order samples, with order taken as
// 2 * sections.size(); inputs of length <= 3 * order come back unchanged
// with the too_short flag set.
FiltfiltResult filtfilt(const std::vector<Biquad>& sections, std::span<const double> x);

}  // namespace sahs::dsp
