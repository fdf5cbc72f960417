#include "sahs/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sahs::dsp {

namespace {

using Kind = DspError::Kind;

// direct form II transposed, one pass over x
void run_biquad(const Biquad& q, std::vector<double>& x) {
    // steady-state internal state for a unit-gain section, scaled by the
    // first sample so constants pass through without an edge transient
    const double x0 = x.empty() ? 0.0 : x[0];
    double s1 = (1.0 - q.b0) * x0;
    double s2 = (q.b2 - q.a2) * x0;
    for (double& v : x) {
        const double in = v;
        const double out = q.b0 * in + s1;
        s1 = q.b1 * in - q.a1 * out + s2;
        s2 = q.b2 * in - q.a2 * out;
        v = out;
    }
}

}  // namespace

std::vector<Biquad> design_lowpass(const FilterSpec& spec) {
    if (spec.order < 1)
        throw DspError(Kind::BadSpec, "filter order must be >= 1");
    if (spec.sampling_rate_hz <= 0.0 || spec.cutoff_hz <= 0.0)
        throw DspError(Kind::BadSpec, "cutoff and sampling rate must be positive");
    if (spec.cutoff_hz >= spec.sampling_rate_hz / 2.0)
        throw DspError(Kind::CutoffAboveNyquist,
                       "cutoff " + std::to_string(spec.cutoff_hz) + " Hz is at or above Nyquist " +
                           std::to_string(spec.sampling_rate_hz / 2.0) + " Hz");

    const int n = spec.order;
    // prewarped analog cutoff for the bilinear transform
    const double warp = std::tan(std::numbers::pi * spec.cutoff_hz / spec.sampling_rate_hz);
    const double k2 = warp * warp;

    std::vector<Biquad> sections;
    // conjugate pole pairs of the Butterworth prototype
    for (int pair = 1; pair <= n / 2; ++pair) {
        const double zeta = std::sin((2 * pair - 1) * std::numbers::pi / (2.0 * n));
        const double d = k2 + 2.0 * zeta * warp + 1.0;
        Biquad q;
        q.b0 = k2 / d;
        q.b1 = 2.0 * k2 / d;
        q.b2 = k2 / d;
        q.a1 = 2.0 * (k2 - 1.0) / d;
        q.a2 = (k2 - 2.0 * zeta * warp + 1.0) / d;
        sections.push_back(q);
    }
    if (n % 2 == 1) {
        // the real pole becomes a first-order section
        const double d = warp + 1.0;
        Biquad q;
        q.b0 = warp / d;
        q.b1 = warp / d;
        q.b2 = 0.0;
        q.a1 = (warp - 1.0) / d;
        q.a2 = 0.0;
        sections.push_back(q);
    }

    // force DC gain to exactly 1 per section
    for (Biquad& q : sections) {
        const double gain = (q.b0 + q.b1 + q.b2) / (1.0 + q.a1 + q.a2);
        q.b0 /= gain;
        q.b1 /= gain;
        q.b2 /= gain;
    }
    return sections;
}

double cascade_gain(const std::vector<Biquad>& sections, double freq_hz,
                    double sampling_rate_hz) {
    const double w = 2.0 * std::numbers::pi * freq_hz / sampling_rate_hz;
    const std::complex<double> z1 = std::polar(1.0, -w);
    const std::complex<double> z2 = z1 * z1;
    std::complex<double> h{1.0, 0.0};
    for (const Biquad& q : sections)
        h *= (q.b0 + q.b1 * z1 + q.b2 * z2) / (1.0 + q.a1 * z1 + q.a2 * z2);
    return std::abs(h);
}

FiltfiltResult filtfilt(const std::vector<Biquad>& sections, std::span<const double> x) {
    const int order = 2 * static_cast<int>(sections.size());
    const std::size_t pad = static_cast<std::size_t>(3) * order;
    if (x.size() <= pad) return {std::vector<double>(x.begin(), x.end()), true};

    const std::size_t n = x.size();
    std::vector<double> buf;
    buf.reserve(n + 2 * pad);
    for (std::size_t i = 0; i < pad; ++i) buf.push_back(2.0 * x[0] - x[pad - i]);
    buf.insert(buf.end(), x.begin(), x.end());
    for (std::size_t i = 0; i < pad; ++i) buf.push_back(2.0 * x[n - 1] - x[n - 2 - i]);

    for (const Biquad& q : sections) run_biquad(q, buf);
    std::reverse(buf.begin(), buf.end());
    for (const Biquad& q : sections) run_biquad(q, buf);
    std::reverse(buf.begin(), buf.end());

    return {std::vector<double>(buf.begin() + pad, buf.begin() + pad + n), false};
}

}  // namespace sahs::dsp
