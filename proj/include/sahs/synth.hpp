#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sahs/annotations.hpp"
#include "sahs/edf.hpp"
#include "sahs/eval.hpp"
#include "sahs/prng.hpp"

namespace sahs::synth {

struct SynthError : std::runtime_error {
    enum class Kind { EventPlacementOverflow, IoFailure, BadSpec };
    Kind kind;
    SynthError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

// Desk-scale synthetic cohort: amplitude-modulated breathing sinusoid with
// apnea/hypopnea suppression windows, written as EDF plus annotation XML
// with a known AHI per subject.
struct CohortSpec {
    std::array<int, 4> class_counts = {185, 190, 85, 60};  // no/mild/moderate/severe
    std::array<double, 4> ahi_mean = {1.82, 8.71, 21.50, 41.20};
    std::array<double, 4> ahi_std = {1.40, 2.97, 3.95, 9.90};
    double hours = 8.0;
    double sampling_rate_hz = 32.0;
    double min_event_s = 10.0;
    double max_event_s = 60.0;
    double apnea_fraction = 0.5;  // probability an event is an apnea
    std::uint64_t seed = 0;
    std::string channel_label = "AIRFLOW";
};

struct SubjectData {
    edf::SignalRecord signal;
    std::vector<annotations::ScoredEvent> events;
    double true_ahi = 0.0;
    eval::Severity severity = eval::Severity::No;
};

// AHI drawn from the class's truncated normal; round(ahi * hours) events
// placed without overlap; apneas suppress the breathing envelope to <= 10%
// and hypopneas to 30-70%.
SubjectData generate_subject(eval::Severity severity, const CohortSpec& spec, Rng& rng);

struct ManifestRow {
    std::string id;
    double true_ahi = 0.0;
    eval::Severity severity = eval::Severity::No;
};

// Writes <id>.edf and <id>.xml per subject plus manifest.csv
// (`subject_id,true_ahi,class`). Deterministic given spec.seed, regardless
// of scheduling: each subject uses a forked RNG substream.
std::vector<ManifestRow> generate_cohort(const CohortSpec& spec, const std::string& out_dir);

std::vector<ManifestRow> read_manifest(const std::string& path);

}  // namespace sahs::synth
