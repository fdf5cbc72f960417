#include "sahs/features.hpp"

#include <algorithm>
#include <cmath>

namespace sahs::features {

std::array<double, FeatureVector::kCount> FeatureVector::as_array() const {
    return {n_apnea,       n_hypopnea,     n_events,      total_duration_s, mean_max_amp,
            mean_min_amp,  mean_mean_amp,  mean_std_amp,  max_duration_s,   min_duration_s,
            mean_duration_s, std_duration_s, var_duration_s2, wmean_max_amp, wmean_min_amp,
            wmean_mean_amp, wmean_std_amp};
}

FeatureVector FeatureVector::from_array(const std::array<double, kCount>& a) {
    FeatureVector f;
    f.n_apnea = a[0];
    f.n_hypopnea = a[1];
    f.n_events = a[2];
    f.total_duration_s = a[3];
    f.mean_max_amp = a[4];
    f.mean_min_amp = a[5];
    f.mean_mean_amp = a[6];
    f.mean_std_amp = a[7];
    f.max_duration_s = a[8];
    f.min_duration_s = a[9];
    f.mean_duration_s = a[10];
    f.std_duration_s = a[11];
    f.var_duration_s2 = a[12];
    f.wmean_max_amp = a[13];
    f.wmean_min_amp = a[14];
    f.wmean_mean_amp = a[15];
    f.wmean_std_amp = a[16];
    return f;
}

SegmentExtraction extract_segments(const edf::SignalRecord& signal,
                                   const std::vector<ScoredEvent>& events) {
    SegmentExtraction out;
    const double fs = signal.sampling_rate_hz;
    const auto n = static_cast<long long>(signal.samples.size());

    for (const ScoredEvent& ev : events) {
        long long i0 = static_cast<long long>(std::floor(ev.start_s * fs));
        long long i1 = static_cast<long long>(std::floor((ev.start_s + ev.duration_s) * fs));
        if (i0 >= n || i1 <= 0) {
            ++out.dropped;
            continue;
        }
        i0 = std::max(i0, 0LL);
        bool clipped = false;
        if (i1 > n) {
            i1 = n;
            clipped = true;
        }
        if (i1 <= i0) {
            ++out.dropped;
            continue;
        }
        Segment seg;
        seg.kind = ev.kind;
        // a clipped event keeps the span it actually covers
        seg.duration_s = clipped ? (i1 - i0) / fs : ev.duration_s;
        seg.samples.assign(signal.samples.begin() + i0, signal.samples.begin() + i1);
        out.segments.push_back(std::move(seg));
        if (clipped) ++out.clipped;
    }
    return out;
}

FeatureVector compute_features(const std::vector<Segment>& segments) {
    FeatureVector f;
    if (segments.empty()) return f;

    const double n = static_cast<double>(segments.size());
    double sum_dur = 0.0, sum_max = 0.0, sum_min = 0.0, sum_mean = 0.0, sum_std = 0.0;
    double wsum = 0.0, wmax = 0.0, wmin = 0.0, wmean = 0.0, wstd = 0.0;
    double dur_max = -1.0, dur_min = 0.0;
    bool first = true;

    std::vector<double> durations;
    durations.reserve(segments.size());

    for (const Segment& seg : segments) {
        if (seg.kind == EventKind::Apnea)
            f.n_apnea += 1.0;
        else
            f.n_hypopnea += 1.0;

        double smax = seg.samples[0], smin = seg.samples[0], ssum = 0.0;
        for (double v : seg.samples) {
            smax = std::max(smax, v);
            smin = std::min(smin, v);
            ssum += v;
        }
        const double smean = ssum / static_cast<double>(seg.samples.size());
        double sq = 0.0;
        for (double v : seg.samples) sq += (v - smean) * (v - smean);
        const double sstd = std::sqrt(sq / static_cast<double>(seg.samples.size()));

        const double w = seg.duration_s;
        durations.push_back(w);
        sum_dur += w;
        sum_max += smax;
        sum_min += smin;
        sum_mean += smean;
        sum_std += sstd;
        wsum += w;
        wmax += w * smax;
        wmin += w * smin;
        wmean += w * smean;
        wstd += w * sstd;

        if (first) {
            dur_max = dur_min = w;
            first = false;
        } else {
            dur_max = std::max(dur_max, w);
            dur_min = std::min(dur_min, w);
        }
    }

    f.n_events = f.n_apnea + f.n_hypopnea;
    f.total_duration_s = sum_dur;
    f.mean_max_amp = sum_max / n;
    f.mean_min_amp = sum_min / n;
    f.mean_mean_amp = sum_mean / n;
    f.mean_std_amp = sum_std / n;
    f.max_duration_s = dur_max;
    f.min_duration_s = dur_min;
    f.mean_duration_s = sum_dur / n;

    double dsq = 0.0;
    for (double d : durations) dsq += (d - f.mean_duration_s) * (d - f.mean_duration_s);
    f.std_duration_s = std::sqrt(dsq / n);
    // squared std rather than the raw mean of squares keeps f13 == f12^2 exact
    f.var_duration_s2 = f.std_duration_s * f.std_duration_s;

    f.wmean_max_amp = wmax / wsum;
    f.wmean_min_amp = wmin / wsum;
    f.wmean_mean_amp = wmean / wsum;
    f.wmean_std_amp = wstd / wsum;
    return f;
}

}  // namespace sahs::features
