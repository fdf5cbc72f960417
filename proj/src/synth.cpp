#include "sahs/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace sahs::synth {

namespace {

using Kind = SynthError::Kind;

// severity band edges; the severe band is open-ended
void class_band(eval::Severity severity, double& lo, double& hi) {
    switch (severity) {
        case eval::Severity::No: lo = 0.0; hi = 5.0; break;
        case eval::Severity::Mild: lo = 5.0; hi = 15.0; break;
        case eval::Severity::Moderate: lo = 15.0; hi = 30.0; break;
        case eval::Severity::Severe: lo = 30.0; hi = 1e30; break;
    }
}

double truncated_normal(double mean, double stddev, double lo, double hi, Rng& rng) {
    for (int tries = 0; tries < 10000; ++tries) {
        const double v = rng.normal(mean, stddev);
        if (v >= lo && v < hi) return v;
    }
    // pathological spec; fall back to the band midpoint-ish value
    return std::min(std::max(mean, lo), hi - 1e-9);
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

SubjectData generate_subject(eval::Severity severity, const CohortSpec& spec, Rng& rng) {
    if (spec.hours <= 0.0 || spec.sampling_rate_hz <= 0.0 || spec.min_event_s <= 0.0 ||
        spec.max_event_s < spec.min_event_s)
        throw SynthError(Kind::BadSpec, "invalid cohort spec");

    SubjectData out;
    out.severity = severity;

    double lo = 0.0, hi = 1e30;
    class_band(severity, lo, hi);
    out.true_ahi = truncated_normal(spec.ahi_mean[static_cast<int>(severity)],
                                    spec.ahi_std[static_cast<int>(severity)], lo, hi, rng);

    const double total_s = spec.hours * 3600.0;
    const int n_events = static_cast<int>(std::lround(out.true_ahi * spec.hours));

    // durations first, then non-overlapping placement via proportional gaps
    std::vector<double> durations(n_events);
    double dur_sum = 0.0;
    for (double& d : durations) {
        d = rng.uniform(spec.min_event_s, spec.max_event_s);
        dur_sum += d;
    }
    const double slack = total_s - dur_sum;
    if (slack < 0.0)
        throw SynthError(Kind::EventPlacementOverflow,
                         std::to_string(n_events) + " events totalling " +
                             std::to_string(dur_sum) + " s do not fit in " +
                             std::to_string(total_s) + " s");
    std::vector<double> gaps(n_events + 1);
    double gap_sum = 0.0;
    for (double& g : gaps) {
        g = rng.uniform01() + 1e-12;
        gap_sum += g;
    }
    for (double& g : gaps) g *= slack / gap_sum;

    double cursor = 0.0;
    for (int i = 0; i < n_events; ++i) {
        cursor += gaps[i];
        annotations::ScoredEvent ev;
        const bool apnea = rng.uniform01() < spec.apnea_fraction;
        ev.kind = apnea ? annotations::EventKind::Apnea : annotations::EventKind::Hypopnea;
        ev.raw_name = apnea ? "Obstructive Apnea" : "Hypopnea";
        ev.start_s = cursor;
        ev.duration_s = durations[i];
        cursor += durations[i];
        out.events.push_back(std::move(ev));
    }

    // breathing model: ~0.25 Hz sinusoid with slow amplitude/frequency
    // wobble plus band-limited noise
    const double fs = spec.sampling_rate_hz;
    const auto n_samples = static_cast<std::size_t>(std::llround(total_s * fs));
    const double f0 = rng.uniform(0.20, 0.30);
    const double base_amp = rng.uniform(0.40, 0.55);
    const double am_rate = rng.uniform(0.005, 0.02);
    const double fm_rate = rng.uniform(0.003, 0.012);
    const double phase0 = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double am_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double fm_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double noise_amp = 0.03;

    out.signal.label = spec.channel_label;
    out.signal.physical_dimension = "au";
    out.signal.sampling_rate_hz = fs;
    out.signal.samples.resize(n_samples);

    double phase = phase0;
    double lp_noise = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double t = static_cast<double>(i) / fs;
        const double am = 1.0 + 0.10 * std::sin(2.0 * std::numbers::pi * am_rate * t + am_phase);
        const double finst =
            f0 * (1.0 + 0.05 * std::sin(2.0 * std::numbers::pi * fm_rate * t + fm_phase));
        phase += 2.0 * std::numbers::pi * finst / fs;
        // one-pole lowpass over white noise keeps it band-limited and cheap
        lp_noise = 0.85 * lp_noise + 0.15 * rng.normal();
        out.signal.samples[i] = base_amp * am * std::sin(phase) + noise_amp * lp_noise;
    }

    // suppress the envelope inside each event window
    for (const auto& ev : out.events) {
        const double scale = ev.kind == annotations::EventKind::Apnea
                                 ? rng.uniform(0.02, 0.10)
                                 : rng.uniform(0.30, 0.70);
        const auto i0 = static_cast<std::size_t>(std::floor(ev.start_s * fs));
        auto i1 = static_cast<std::size_t>(std::floor((ev.start_s + ev.duration_s) * fs));
        i1 = std::min(i1, n_samples);
        for (std::size_t i = i0; i < i1; ++i) out.signal.samples[i] *= scale;
    }

    for (double& v : out.signal.samples) v = std::clamp(v, -0.98, 0.98);
    return out;
}

std::vector<ManifestRow> generate_cohort(const CohortSpec& spec, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw SynthError(Kind::IoFailure, "cannot create '" + out_dir + "': " + ec.message());

    // subject ids assigned class by class, in class order
    struct Plan {
        std::string id;
        eval::Severity severity;
    };
    std::vector<Plan> plan;
    int counter = 0;
    for (int cls = 0; cls < 4; ++cls) {
        for (int i = 0; i < spec.class_counts[cls]; ++i) {
            char buf[16];
            std::snprintf(buf, sizeof buf, "S%04d", ++counter);
            plan.push_back({buf, static_cast<eval::Severity>(cls)});
        }
    }

    const Rng root(spec.seed);
    const double record_s = 1.0;
    const int spr = static_cast<int>(std::lround(spec.sampling_rate_hz * record_s));
    if (std::abs(spr - spec.sampling_rate_hz * record_s) > 1e-9)
        throw SynthError(Kind::BadSpec, "sampling rate must be an integer per 1 s record");

    std::vector<ManifestRow> manifest(plan.size());
    std::vector<std::string> failures(plan.size());

#pragma omp parallel for schedule(dynamic)
    for (long long pi = 0; pi < static_cast<long long>(plan.size()); ++pi) {
        try {
            Rng rng = root.fork(static_cast<std::uint64_t>(pi));
            SubjectData subject = generate_subject(plan[pi].severity, spec, rng);

            edf::EdfHeader h;
            h.version = "0";
            h.patient_id = plan[pi].id;
            h.recording_id = "synthetic airflow cohort";
            h.start = edf::EdfDateTime{2000, 1, 1, 22, 0, 0};
            h.record_duration_s = record_s;
            h.num_signals = 1;
            h.num_data_records =
                static_cast<int>(subject.signal.samples.size() / static_cast<std::size_t>(spr));
            h.header_bytes = 256 * 2;
            edf::EdfSignalHeader sig;
            sig.label = spec.channel_label;
            sig.transducer = "synthetic thermistor";
            sig.physical_dimension = "au";
            sig.physical_min = -1.0;
            sig.physical_max = 1.0;
            sig.digital_min = -32768;
            sig.digital_max = 32767;
            sig.samples_per_record = spr;
            h.signals.push_back(sig);

            const std::string base = std::string(out_dir) + "/" + plan[pi].id;
            edf::write_edf(h, {subject.signal.samples}, base + ".edf");

            std::ostringstream xml;
            xml << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<ScoredEvents>\n";
            char num[64];
            for (const auto& ev : subject.events) {
                xml << "  <ScoredEvent>\n";
                xml << "    <Name>" << xml_escape(ev.raw_name) << "</Name>\n";
                std::snprintf(num, sizeof num, "%.6f", ev.start_s);
                xml << "    <Start>" << num << "</Start>\n";
                std::snprintf(num, sizeof num, "%.6f", ev.duration_s);
                xml << "    <Duration>" << num << "</Duration>\n";
                xml << "  </ScoredEvent>\n";
            }
            xml << "</ScoredEvents>\n";
            std::ofstream xf(base + ".xml", std::ios::trunc);
            xf << xml.str();
            if (!xf) throw SynthError(Kind::IoFailure, "write failed for " + base + ".xml");

            manifest[pi] = {plan[pi].id, subject.true_ahi, subject.severity};
        } catch (const std::exception& e) {
            failures[pi] = e.what();
        }
    }

    for (std::size_t i = 0; i < failures.size(); ++i)
        if (!failures[i].empty())
            throw SynthError(Kind::IoFailure, "subject " + plan[i].id + ": " + failures[i]);

    std::ofstream mf(std::string(out_dir) + "/manifest.csv", std::ios::trunc);
    if (!mf) throw SynthError(Kind::IoFailure, "cannot create manifest.csv");
    mf << "subject_id,true_ahi,class\n";
    char num[64];
    for (const ManifestRow& row : manifest) {
        std::snprintf(num, sizeof num, "%.12g", row.true_ahi);
        mf << row.id << ',' << num << ',' << eval::severity_name(row.severity) << '\n';
    }
    if (!mf) throw SynthError(Kind::IoFailure, "write failed for manifest.csv");
    return manifest;
}

std::vector<ManifestRow> read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SynthError(Kind::IoFailure, "cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw SynthError(Kind::IoFailure, "empty manifest");
    std::vector<ManifestRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string id, ahi, cls;
        if (!std::getline(ss, id, ',') || !std::getline(ss, ahi, ',') || !std::getline(ss, cls))
            throw SynthError(Kind::IoFailure, "bad manifest row '" + line + "'");
        rows.push_back({id, std::stod(ahi), eval::severity_from_name(cls)});
    }
    return rows;
}

}  // namespace sahs::synth
