#pragma once

#include <array>
#include <vector>

#include "sahs/annotations.hpp"
#include "sahs/edf.hpp"

namespace sahs::features {

using annotations::EventKind;
using annotations::ScoredEvent;

// One event-aligned slice of the filtered airflow signal.
struct Segment {
    EventKind kind;
    double duration_s = 0.0;
    std::vector<double> samples;
};

// 17 per-subject statistics over the event segments, in fixed order:
//   1  apnea count                 10 min event duration (s)
//   2  hypopnea count              11 mean event duration (s)
//   3  total event count           12 std of event durations (s)
//   4  summed event duration (s)   13 variance of event durations (s^2)
//   5  mean of per-event max        14 duration-weighted mean of max
//   6  mean of per-event min        15 duration-weighted mean of min
//   7  mean of per-event mean       16 duration-weighted mean of mean
//   8  mean of per-event std        17 duration-weighted mean of std
//   9  max event duration (s)
// Amplitude statistics use the signed filtered sample values; std/variance
// are population (divide by N). All 17 are zero when there are no events.
struct FeatureVector {
    static constexpr int kCount = 17;

    double n_apnea = 0.0;
    double n_hypopnea = 0.0;
    double n_events = 0.0;
    double total_duration_s = 0.0;
    double mean_max_amp = 0.0;
    double mean_min_amp = 0.0;
    double mean_mean_amp = 0.0;
    double mean_std_amp = 0.0;
    double max_duration_s = 0.0;
    double min_duration_s = 0.0;
    double mean_duration_s = 0.0;
    double std_duration_s = 0.0;
    double var_duration_s2 = 0.0;
    double wmean_max_amp = 0.0;
    double wmean_min_amp = 0.0;
    double wmean_mean_amp = 0.0;
    double wmean_std_amp = 0.0;

    std::array<double, kCount> as_array() const;
    static FeatureVector from_array(const std::array<double, kCount>& a);
};

struct SegmentExtraction {
    std::vector<Segment> segments;
    int dropped = 0;  // events entirely outside the recording
    int clipped = 0;  // events truncated at the recording end
};

// Cuts [start, start + duration) sample windows from the signal. Events
// past the end of the recording are clipped (the segment duration then
// reflects the clipped span); events entirely outside are dropped.
SegmentExtraction extract_segments(const edf::SignalRecord& signal,
                                   const std::vector<ScoredEvent>& events);

FeatureVector compute_features(const std::vector<Segment>& segments);

}  // namespace sahs::features
