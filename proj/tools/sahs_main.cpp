// sahs: batch pipeline for severity classification from a single airflow
// channel. Three subcommands: synth (synthetic cohort), extract (feature
// table), evaluate (cross-validated classifier comparison).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sahs/annotations.hpp"
#include "sahs/dsp.hpp"
#include "sahs/edf.hpp"
#include "sahs/eval.hpp"
#include "sahs/features.hpp"
#include "sahs/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hash_hex(const std::string& text) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(text)));
    return buf;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + p.string() + "'");
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// --- synth ----------------------------------------------------------------

struct SynthArgs {
    std::string out_dir;
    std::vector<int> subjects = {185, 190, 85, 60};
    bool four_class_balance = false;
    double hours = 8.0;
    std::string channel = "AIRFLOW";
    double apnea_fraction = 0.5;
    double min_event_s = 10.0;
    double max_event_s = 60.0;
    std::uint64_t seed = 0;
};

int run_synth(const SynthArgs& args) {
    sahs::synth::CohortSpec spec;
    if (args.subjects.size() != 4)
        throw std::runtime_error("--subjects needs exactly 4 counts (no,mild,moderate,severe)");
    for (int i = 0; i < 4; ++i) spec.class_counts[i] = args.subjects[i];
    if (args.four_class_balance) spec.class_counts = {70, 70, 70, 60};
    spec.hours = args.hours;
    spec.channel_label = args.channel;
    spec.apnea_fraction = args.apnea_fraction;
    spec.min_event_s = args.min_event_s;
    spec.max_event_s = args.max_event_s;
    spec.seed = args.seed;

    std::ostringstream canon;
    canon << "cmd=synth\ncounts=" << spec.class_counts[0] << ',' << spec.class_counts[1] << ','
          << spec.class_counts[2] << ',' << spec.class_counts[3] << "\nhours=" << spec.hours
          << "\nchannel=" << spec.channel_label << "\napnea_fraction=" << spec.apnea_fraction
          << "\nevent_s=" << spec.min_event_s << ',' << spec.max_event_s
          << "\nseed=" << spec.seed << '\n';
    const std::string config_hash = hash_hex(canon.str());

    const auto manifest = sahs::synth::generate_cohort(spec, args.out_dir);

    json info;
    info["config_hash"] = config_hash;
    info["subjects"] = manifest.size();
    info["class_counts"] = spec.class_counts;
    info["hours"] = spec.hours;
    info["channel"] = spec.channel_label;
    info["sampling_rate_hz"] = spec.sampling_rate_hz;
    info["seed"] = spec.seed;
    std::ofstream meta(fs::path(args.out_dir) / "cohort_config.json", std::ios::trunc);
    meta << info.dump(1) << '\n';

    std::printf("wrote %zu subjects to %s (config %s)\n", manifest.size(),
                args.out_dir.c_str(), config_hash.c_str());
    return 0;
}

// --- extract ----------------------------------------------------------------

struct ExtractArgs {
    std::string in_dir;
    std::string out_csv;
    std::string channel;
    double cutoff_hz = 3.0;
    int order = 4;
    bool strict = false;
};

int run_extract(const ExtractArgs& args) {
    const auto manifest = sahs::synth::read_manifest(
        (fs::path(args.in_dir) / "manifest.csv").string());
    if (manifest.empty()) throw std::runtime_error("manifest has no subjects");

    std::vector<sahs::eval::SubjectSample> rows(manifest.size());
    std::vector<std::string> errors(manifest.size());

#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(manifest.size()); ++i) {
        const auto& entry = manifest[i];
        try {
            const fs::path edf_path = fs::path(args.in_dir) / (entry.id + ".edf");
            const std::string bytes = read_file(edf_path);
            const std::span<const char> span(bytes.data(), bytes.size());
            const auto header = sahs::edf::parse_header(span);
            // case-insensitive lookup is CLI convenience; the library core
            // matches exactly
            const int ch = sahs::edf::find_channel_ci(header, args.channel);
            auto signal = sahs::edf::decode_signal(span, header, ch);

            const auto sections = sahs::dsp::design_lowpass(
                {sahs::dsp::FilterSpec::Kind::ButterworthLowpass, args.order, args.cutoff_hz,
                 signal.sampling_rate_hz});
            signal.samples = sahs::dsp::filtfilt(sections, signal.samples).samples;

            const auto xml = read_file(fs::path(args.in_dir) / (entry.id + ".xml"));
            const auto parsed = sahs::annotations::parse_annotations(xml);
            const auto segs = sahs::features::extract_segments(signal, parsed.events);
            const auto fv = sahs::features::compute_features(segs.segments);

            sahs::eval::SubjectSample s;
            s.id = entry.id;
            s.feature_values = fv.as_array();
            s.ahi = entry.true_ahi;
            s.label = sahs::eval::label_from_ahi(entry.true_ahi);
            rows[i] = std::move(s);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }

    std::vector<sahs::eval::SubjectSample> good;
    std::vector<std::pair<std::string, std::string>> failed;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (errors[i].empty())
            good.push_back(std::move(rows[i]));
        else
            failed.emplace_back(manifest[i].id, errors[i]);
    }

    sahs::eval::write_feature_csv(args.out_csv, good);

    std::ostringstream canon;
    canon << "cmd=extract\nchannel=" << args.channel << "\ncutoff_hz=" << args.cutoff_hz
          << "\norder=" << args.order << "\nsubjects=" << manifest.size() << '\n';
    json meta;
    meta["config_hash"] = hash_hex(canon.str());
    meta["subjects"] = manifest.size();
    meta["rows"] = good.size();
    meta["failed"] = failed.size();
    std::ofstream mf(args.out_csv + ".meta.json", std::ios::trunc);
    mf << meta.dump(1) << '\n';

    if (!failed.empty()) {
        std::ofstream ef(args.out_csv + ".errors.txt", std::ios::trunc);
        for (const auto& [id, what] : failed) ef << id << ": " << what << '\n';
        std::fprintf(stderr, "%zu subject(s) failed; see %s.errors.txt\n", failed.size(),
                     args.out_csv.c_str());
        if (args.strict) return 1;
    }
    std::printf("wrote %zu feature rows to %s\n", good.size(), args.out_csv.c_str());
    return 0;
}

// --- evaluate ----------------------------------------------------------------

struct EvaluateArgs {
    std::string features_csv;
    std::string out_json = "report.json";
    std::string tables_txt;
    std::vector<std::string> tasks = {"binary15"};
    std::vector<std::string> classifiers = {"all"};
    std::uint64_t seed = 0;
    bool seed_set = false;
    int folds = 10;
    int mlp_epochs = 200;
    int mlp_batch = 32;
    double mlp_lr = 0.001;
    std::vector<int> mlp_hidden;
    double svm_c = 1.0;
    int svm_epochs = 100;
    int rounds = 50;
    int tree_depth = 3;
    std::vector<int> fourclass_counts = {70, 70, 70, 60};
};

int run_evaluate(const EvaluateArgs& args) {
    if (!args.seed_set)
        throw std::runtime_error("--seed is required for training commands");
    const auto subjects = sahs::eval::read_feature_csv(args.features_csv);

    std::vector<sahs::eval::ClassifierKind> kinds;
    for (const auto& name : args.classifiers) {
        if (name == "all") {
            kinds = {sahs::eval::ClassifierKind::Svm, sahs::eval::ClassifierKind::AbCart,
                     sahs::eval::ClassifierKind::Dnn};
            break;
        }
        kinds.push_back(sahs::eval::classifier_from_name(name));
    }

    std::ostringstream canon;
    canon << "cmd=evaluate\nseed=" << args.seed << "\nfolds=" << args.folds << "\ntasks=";
    for (const auto& t : args.tasks) canon << t << ',';
    canon << "\nclassifiers=";
    for (const auto k : kinds) canon << sahs::eval::classifier_name(k) << ',';
    canon << "\nmlp=" << args.mlp_epochs << ',' << args.mlp_batch << ',' << args.mlp_lr;
    for (int hsz : args.mlp_hidden) canon << ',' << hsz;
    canon << "\nsvm=" << args.svm_c << ',' << args.svm_epochs;
    canon << "\nabcart=" << args.rounds << ',' << args.tree_depth << '\n';
    const std::string config_hash = hash_hex(canon.str());

    json doc;
    doc["config_hash"] = config_hash;
    doc["seed"] = args.seed;
    doc["subjects"] = subjects.size();
    doc["tasks"] = json::object();
    std::ostringstream tables;

    for (const auto& task_str : args.tasks) {
        sahs::eval::ExperimentConfig cfg;
        cfg.task = sahs::eval::task_from_name(task_str);
        cfg.classifiers = kinds;
        cfg.seed = args.seed;
        cfg.num_folds = args.folds;
        cfg.mlp.max_epochs = args.mlp_epochs;
        cfg.mlp.batch_size = args.mlp_batch;
        cfg.mlp.learning_rate = args.mlp_lr;
        if (!args.mlp_hidden.empty()) cfg.mlp.hidden_sizes = args.mlp_hidden;
        cfg.svm.c = args.svm_c;
        cfg.svm.epochs = args.svm_epochs;
        cfg.abcart.num_rounds = args.rounds;
        cfg.abcart.max_depth = args.tree_depth;
        for (int i = 0; i < 4 && i < static_cast<int>(args.fourclass_counts.size()); ++i)
            cfg.fourclass_counts[i] = args.fourclass_counts[i];

        const auto report = sahs::eval::run_experiment(subjects, cfg);
        doc["tasks"][task_str] = sahs::eval::report_to_json(report);
        tables << sahs::eval::render_tables(report) << '\n';
    }

    std::ofstream out(args.out_json, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot create '" + args.out_json + "'");
    out << doc.dump(1) << '\n';

    const std::string tables_path =
        args.tables_txt.empty() ? args.out_json + ".tables.txt" : args.tables_txt;
    std::ofstream tf(tables_path, std::ios::trunc);
    tf << tables.str();

    std::fputs(tables.str().c_str(), stdout);
    std::printf("report written to %s (config %s)\n", args.out_json.c_str(),
                config_hash.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-channel airflow SAHS severity pipeline"};
    app.set_config("--config", "", "flat key=value configuration file");
    app.require_subcommand(1);

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic cohort");
    synth->add_option("--out", synth_args.out_dir, "output directory")->required();
    synth->add_option("--subjects", synth_args.subjects,
                      "per-class subject counts: no mild moderate severe")
        ->expected(4);
    synth->add_flag("--four-class-balance", synth_args.four_class_balance,
                    "use the balanced 70/70/70/60 composition");
    synth->add_option("--hours", synth_args.hours, "recording length in hours");
    synth->add_option("--channel", synth_args.channel, "airflow channel label to write");
    synth->add_option("--apnea-fraction", synth_args.apnea_fraction,
                      "probability an event is an apnea");
    synth->add_option("--min-event-s", synth_args.min_event_s, "shortest event duration");
    synth->add_option("--max-event-s", synth_args.max_event_s, "longest event duration");
    synth->add_option("--seed", synth_args.seed, "generator seed");

    ExtractArgs extract_args;
    CLI::App* extract = app.add_subcommand("extract", "compute the 17-feature table");
    extract->add_option("--in", extract_args.in_dir, "cohort directory")->required();
    extract->add_option("--out", extract_args.out_csv, "output feature CSV")->required();
    extract->add_option("--channel", extract_args.channel, "airflow channel label")->required();
    extract->add_option("--cutoff-hz", extract_args.cutoff_hz, "lowpass cutoff");
    extract->add_option("--order", extract_args.order, "lowpass order");
    extract->add_flag("--strict", extract_args.strict, "fail if any subject fails");

    EvaluateArgs eval_args;
    CLI::App* evaluate = app.add_subcommand("evaluate", "run cross-validated classifiers");
    evaluate->add_option("--features", eval_args.features_csv, "feature CSV")->required();
    evaluate->add_option("--out", eval_args.out_json, "report JSON path");
    evaluate->add_option("--tables", eval_args.tables_txt, "text tables path");
    evaluate
        ->add_option("--task", eval_args.tasks,
                     "one or more of binary5 binary15 binary30 fourclass")
        ->check(CLI::IsMember({"binary5", "binary15", "binary30", "fourclass"}));
    evaluate
        ->add_option("--classifier", eval_args.classifiers,
                     "one or more of dnn svm abcart, or all")
        ->check(CLI::IsMember({"dnn", "svm", "abcart", "all"}));
    auto* seed_opt = evaluate->add_option("--seed", eval_args.seed, "experiment seed");
    evaluate->add_option("--folds", eval_args.folds, "cross-validation folds");
    evaluate->add_option("--max-epochs", eval_args.mlp_epochs, "DNN training epochs");
    evaluate->add_option("--batch-size", eval_args.mlp_batch, "DNN batch size");
    evaluate->add_option("--learning-rate", eval_args.mlp_lr, "DNN learning rate");
    evaluate->add_option("--hidden", eval_args.mlp_hidden,
                         "DNN hidden layer sizes (default 1024..4)");
    evaluate->add_option("--svm-c", eval_args.svm_c, "SVM penalty C");
    evaluate->add_option("--svm-epochs", eval_args.svm_epochs, "SVM training epochs");
    evaluate->add_option("--rounds", eval_args.rounds, "AB-CART boosting rounds");
    evaluate->add_option("--tree-depth", eval_args.tree_depth, "AB-CART tree depth");
    evaluate->add_option("--fourclass-counts", eval_args.fourclass_counts,
                         "per-class subsample for the four-class task")
        ->expected(4);

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return run_synth(synth_args);
        if (extract->parsed()) return run_extract(extract_args);
        if (evaluate->parsed()) {
            eval_args.seed_set = seed_opt->count() > 0;
            return run_evaluate(eval_args);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
