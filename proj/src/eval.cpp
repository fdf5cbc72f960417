#include "sahs/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "sahs/prng.hpp"
#include "sahs/stats.hpp"

namespace sahs::eval {

namespace {

using Kind = EvalError::Kind;

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

// --- severity ------------------------------------------------------------

Severity label_from_ahi(double ahi) {
    if (ahi < 0.0 || !std::isfinite(ahi))
        throw EvalError(Kind::BadInput, "AHI must be a non-negative number");
    if (ahi < 5.0) return Severity::No;
    if (ahi < 15.0) return Severity::Mild;
    if (ahi < 30.0) return Severity::Moderate;
    return Severity::Severe;
}

const char* severity_name(Severity s) {
    switch (s) {
        case Severity::No: return "no";
        case Severity::Mild: return "mild";
        case Severity::Moderate: return "moderate";
        case Severity::Severe: return "severe";
    }
    return "?";
}

Severity severity_from_name(const std::string& name) {
    for (Severity s : {Severity::No, Severity::Mild, Severity::Moderate, Severity::Severe})
        if (name == severity_name(s)) return s;
    throw EvalError(Kind::BadInput, "unknown severity '" + name + "'");
}

bool binarize(double ahi, double cutoff) {
    if (cutoff != 5.0 && cutoff != 15.0 && cutoff != 30.0)
        throw EvalError(Kind::InvalidCutoff,
                        "cutoff must be 5, 15 or 30, got " + fmt12(cutoff));
    return ahi >= cutoff;
}

// --- feature table ---------------------------------------------------------

void write_feature_csv(const std::string& path, std::vector<SubjectSample> subjects) {
    std::sort(subjects.begin(), subjects.end(),
              [](const SubjectSample& a, const SubjectSample& b) { return a.id < b.id; });
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw EvalError(Kind::BadInput, "cannot create '" + path + "'");
    out << "subject_id";
    for (int i = 1; i <= features::FeatureVector::kCount; ++i) out << ",f" << i;
    out << ",ahi,label\n";
    for (const SubjectSample& s : subjects) {
        out << s.id;
        for (double v : s.feature_values) out << ',' << fmt12(v);
        out << ',' << fmt12(s.ahi) << ',' << severity_name(s.label) << '\n';
    }
    if (!out) throw EvalError(Kind::BadInput, "write failed for '" + path + "'");
}

std::vector<SubjectSample> read_feature_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw EvalError(Kind::BadInput, "cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw EvalError(Kind::BadInput, "empty feature table");

    std::vector<SubjectSample> subjects;
    constexpr int kColumns = 2 + features::FeatureVector::kCount + 1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, ',')) cols.push_back(col);
        if (static_cast<int>(cols.size()) != kColumns)
            throw EvalError(Kind::BadInput, "row with " + std::to_string(cols.size()) +
                                                " columns, expected " + std::to_string(kColumns));
        SubjectSample s;
        s.id = cols[0];
        for (int i = 0; i < features::FeatureVector::kCount; ++i)
            s.feature_values[i] = std::stod(cols[1 + i]);
        s.ahi = std::stod(cols[1 + features::FeatureVector::kCount]);
        s.label = severity_from_name(cols.back());
        subjects.push_back(std::move(s));
    }
    return subjects;
}

// --- folds ----------------------------------------------------------------

std::vector<FoldSplit> make_folds(const std::vector<int>& labels, int k, std::uint64_t seed) {
    if (k < 2) throw EvalError(Kind::BadInput, "need at least 2 folds");

    std::map<int, std::vector<int>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i)
        by_class[labels[i]].push_back(static_cast<int>(i));
    for (const auto& [cls, members] : by_class) {
        if (static_cast<int>(members.size()) < k)
            throw EvalError(Kind::TooFewSubjects,
                            "class " + std::to_string(cls) + " has " +
                                std::to_string(members.size()) + " subjects, need >= " +
                                std::to_string(k));
    }

    Rng rng(mix64(seed ^ 0x666f6c6473ull));
    std::vector<std::vector<std::vector<int>>> chunks(k);  // fold -> class chunks
    int remainder_offset = 0;
    for (auto& [cls, members] : by_class) {
        rng.shuffle(members);
        const int n = static_cast<int>(members.size());
        const int base = n / k;
        const int rem = n % k;
        // staggered remainders keep fold sizes within one of each other
        int at = 0;
        for (int c = 0; c < k; ++c) {
            int size = base;
            const int pos = (c - remainder_offset % k + k) % k;
            if (pos < rem) ++size;
            std::vector<int> chunk(members.begin() + at, members.begin() + at + size);
            chunks[c].push_back(std::move(chunk));
            at += size;
        }
        remainder_offset += rem;
    }

    std::vector<FoldSplit> folds(k);
    for (int i = 0; i < k; ++i) {
        folds[i].index = i;
        const int val_of = (i + 1) % k;
        for (int c = 0; c < k; ++c) {
            for (const auto& chunk : chunks[c]) {
                auto& dst = (c == i) ? folds[i].test
                            : (c == val_of) ? folds[i].val
                                            : folds[i].train;
                dst.insert(dst.end(), chunk.begin(), chunk.end());
            }
        }
        std::sort(folds[i].train.begin(), folds[i].train.end());
        std::sort(folds[i].val.begin(), folds[i].val.end());
        std::sort(folds[i].test.begin(), folds[i].test.end());
    }
    return folds;
}

// --- metrics ----------------------------------------------------------------

long long ConfusionMatrix::total() const {
    return std::accumulate(cells.begin(), cells.end(), 0LL);
}

long long ConfusionMatrix::diagonal() const {
    long long d = 0;
    for (int i = 0; i < k; ++i) d += at(i, i);
    return d;
}

void ConfusionMatrix::add(const ConfusionMatrix& other) {
    if (k != other.k) throw EvalError(Kind::BadInput, "confusion matrix size mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) cells[i] += other.cells[i];
}

BinaryMetrics binary_metrics(const ConfusionMatrix& m, int positive_class) {
    if (m.k != 2) throw EvalError(Kind::BadInput, "binary metrics need a 2x2 matrix");
    const int pos = positive_class;
    const int neg = 1 - positive_class;
    const double tp = static_cast<double>(m.at(pos, pos));
    const double fn = static_cast<double>(m.at(pos, neg));
    const double tn = static_cast<double>(m.at(neg, neg));
    const double fp = static_cast<double>(m.at(neg, pos));

    BinaryMetrics out;
    if (tp + fn > 0) out.sensitivity = tp / (tp + fn);
    if (tn + fp > 0) out.specificity = tn / (tn + fp);
    if (tp + fn + tn + fp > 0) out.accuracy = (tp + tn) / (tp + fn + tn + fp);
    return out;
}

double multiclass_accuracy(const ConfusionMatrix& m) {
    const long long n = m.total();
    if (n == 0) throw EvalError(Kind::BadInput, "empty confusion matrix");
    return static_cast<double>(m.diagonal()) / static_cast<double>(n);
}

// --- ANOVA ------------------------------------------------------------------

namespace {

void check_grid(const std::vector<std::vector<double>>& grid) {
    if (grid.size() < 2) throw EvalError(Kind::IncompleteGrid, "need at least 2 folds");
    const std::size_t k = grid[0].size();
    if (k < 2) throw EvalError(Kind::IncompleteGrid, "need at least 2 classifiers");
    for (const auto& row : grid) {
        if (row.size() != k) throw EvalError(Kind::IncompleteGrid, "ragged metric grid");
        for (double v : row)
            if (!std::isfinite(v)) throw EvalError(Kind::IncompleteGrid, "non-finite cell");
    }
}

}  // namespace

AnovaResult rm_anova(const std::vector<std::vector<double>>& grid) {
    check_grid(grid);
    const int n = static_cast<int>(grid.size());
    const int k = static_cast<int>(grid[0].size());

    std::vector<double> col_mean(k, 0.0), row_mean(n, 0.0);
    double grand = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < k; ++j) {
            col_mean[j] += grid[i][j];
            row_mean[i] += grid[i][j];
            grand += grid[i][j];
        }
    }
    for (double& v : col_mean) v /= n;
    for (double& v : row_mean) v /= k;
    grand /= static_cast<double>(n) * k;

    AnovaResult res;
    res.df_between = k - 1;
    res.df_error = (k - 1) * (n - 1);

    // equal column means make the treatment effect exactly zero
    if (std::all_of(col_mean.begin(), col_mean.end(),
                    [&](double v) { return v == col_mean[0]; })) {
        res.f = 0.0;
        res.p = 1.0;
        return res;
    }

    double ss_total = 0.0, ss_treat = 0.0, ss_subject = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) ss_total += (grid[i][j] - grand) * (grid[i][j] - grand);
    for (int j = 0; j < k; ++j) ss_treat += (col_mean[j] - grand) * (col_mean[j] - grand);
    ss_treat *= n;
    for (int i = 0; i < n; ++i) ss_subject += (row_mean[i] - grand) * (row_mean[i] - grand);
    ss_subject *= k;
    const double ss_error = std::max(0.0, ss_total - ss_treat - ss_subject);

    const double ms_treat = ss_treat / res.df_between;
    const double ms_error = ss_error / res.df_error;
    if (ms_error <= 0.0) {
        // zero residual variance: report an infinite statistic
        res.f = std::numeric_limits<double>::infinity();
        res.p = std::numeric_limits<double>::min();
        return res;
    }
    res.f = ms_treat / ms_error;
    res.p = stats::f_upper_tail(res.f, res.df_between, res.df_error);
    if (res.p <= 0.0) res.p = std::numeric_limits<double>::min();
    return res;
}

std::vector<std::vector<std::optional<double>>> pairwise_compare(
    const std::vector<std::vector<double>>& grid) {
    check_grid(grid);
    const int n = static_cast<int>(grid.size());
    const int k = static_cast<int>(grid[0].size());
    const int num_pairs = k * (k - 1) / 2;

    std::vector<std::vector<std::optional<double>>> out(
        k, std::vector<std::optional<double>>(k));
    for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) {
            double mean = 0.0;
            for (int i = 0; i < n; ++i) mean += grid[i][a] - grid[i][b];
            mean /= n;
            double sq = 0.0;
            for (int i = 0; i < n; ++i) {
                const double d = grid[i][a] - grid[i][b] - mean;
                sq += d * d;
            }
            const double sd = std::sqrt(sq / (n - 1));

            std::optional<double> p;
            if (sd == 0.0) {
                if (mean == 0.0) p = 1.0;  // identical columns
                // constant nonzero offset: t undefined, leave empty
            } else {
                const double t = mean / (sd / std::sqrt(static_cast<double>(n)));
                p = std::min(1.0, stats::t_two_sided(t, n - 1) * num_pairs);
            }
            out[a][b] = p;
            out[b][a] = p;
        }
    }
    return out;
}

// --- experiments --------------------------------------------------------------

const char* task_name(Task t) {
    switch (t) {
        case Task::Binary5: return "binary5";
        case Task::Binary15: return "binary15";
        case Task::Binary30: return "binary30";
        case Task::FourClass: return "fourclass";
    }
    return "?";
}

Task task_from_name(const std::string& name) {
    for (Task t : {Task::Binary5, Task::Binary15, Task::Binary30, Task::FourClass})
        if (name == task_name(t)) return t;
    throw EvalError(Kind::BadInput, "unknown task '" + name + "'");
}

const char* classifier_name(ClassifierKind c) {
    switch (c) {
        case ClassifierKind::Svm: return "svm";
        case ClassifierKind::AbCart: return "abcart";
        case ClassifierKind::Dnn: return "dnn";
    }
    return "?";
}

ClassifierKind classifier_from_name(const std::string& name) {
    for (ClassifierKind c : {ClassifierKind::Svm, ClassifierKind::AbCart, ClassifierKind::Dnn})
        if (name == classifier_name(c)) return c;
    throw EvalError(Kind::BadInput, "unknown classifier '" + name + "'");
}

namespace {

double task_cutoff(Task t) {
    switch (t) {
        case Task::Binary5: return 5.0;
        case Task::Binary15: return 15.0;
        case Task::Binary30: return 30.0;
        default: return 0.0;
    }
}

struct TaskData {
    std::vector<int> subject_index;  // into the cohort
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    int num_classes = 2;
};

TaskData build_task_data(const std::vector<SubjectSample>& subjects,
                         const ExperimentConfig& config) {
    TaskData data;
    if (config.task == Task::FourClass) {
        data.num_classes = 4;
        std::array<std::vector<int>, 4> by_class;
        for (std::size_t i = 0; i < subjects.size(); ++i)
            by_class[static_cast<int>(subjects[i].label)].push_back(static_cast<int>(i));
        Rng rng(mix64(config.seed ^ 0x34636c73ull));
        for (int cls = 0; cls < 4; ++cls) {
            const int want = config.fourclass_counts[cls];
            if (static_cast<int>(by_class[cls].size()) < want)
                throw EvalError(Kind::TooFewSubjects,
                                std::string("class '") +
                                    severity_name(static_cast<Severity>(cls)) + "' has " +
                                    std::to_string(by_class[cls].size()) + " subjects, need " +
                                    std::to_string(want));
            rng.shuffle(by_class[cls]);
            by_class[cls].resize(want);
            std::sort(by_class[cls].begin(), by_class[cls].end());
            for (int idx : by_class[cls]) {
                data.subject_index.push_back(idx);
                data.y.push_back(cls);
            }
        }
    } else {
        data.num_classes = 2;
        const double cutoff = task_cutoff(config.task);
        for (std::size_t i = 0; i < subjects.size(); ++i) {
            data.subject_index.push_back(static_cast<int>(i));
            data.y.push_back(binarize(subjects[i].ahi, cutoff) ? 1 : 0);
        }
    }
    for (int idx : data.subject_index)
        data.x.emplace_back(subjects[idx].feature_values.begin(),
                            subjects[idx].feature_values.end());
    return data;
}

// uniform prediction interface over the three model families
struct Fitted {
    virtual ~Fitted() = default;
    virtual int predict(const std::vector<double>& x) const = 0;
};

struct FittedMlp : Fitted {
    mlp::MlpModel model;
    int predict(const std::vector<double>& x) const override {
        return mlp::predict_class(model, x);
    }
};

struct FittedSvm : Fitted {
    svm::LinearSvmModel model;
    int predict(const std::vector<double>& x) const override {
        return svm::predict_svm(model, x);
    }
};

struct FittedAbCart : Fitted {
    abcart::AbCartModel model;
    int predict(const std::vector<double>& x) const override {
        return abcart::predict_abcart(model, x);
    }
};

std::unique_ptr<Fitted> fit_classifier(ClassifierKind kind, const ExperimentConfig& config,
                                       const TaskData& data, const FoldSplit& fold,
                                       std::uint64_t fit_seed) {
    auto gather = [&](const std::vector<int>& rows, std::vector<std::vector<double>>& x,
                      std::vector<int>& y) {
        for (int r : rows) {
            x.push_back(data.x[r]);
            y.push_back(data.y[r]);
        }
    };

    std::vector<std::vector<double>> train_x, val_x;
    std::vector<int> train_y, val_y;
    gather(fold.train, train_x, train_y);

    switch (kind) {
        case ClassifierKind::Dnn: {
            gather(fold.val, val_x, val_y);
            mlp::MlpConfig c = config.mlp;
            c.num_classes = data.num_classes;
            c.seed = fit_seed;
            auto fitted = std::make_unique<FittedMlp>();
            fitted->model = mlp::train_mlp(c, train_x, train_y, val_x, val_y);
            return fitted;
        }
        case ClassifierKind::Svm: {
            svm::SvmConfig c = config.svm;
            c.seed = fit_seed;
            auto fitted = std::make_unique<FittedSvm>();
            fitted->model = svm::fit_svm(train_x, train_y, c);
            return fitted;
        }
        case ClassifierKind::AbCart: {
            abcart::AbCartConfig c = config.abcart;
            c.seed = fit_seed;
            auto fitted = std::make_unique<FittedAbCart>();
            fitted->model = abcart::fit_adaboost(train_x, train_y, c);
            return fitted;
        }
    }
    throw EvalError(Kind::BadInput, "unknown classifier kind");
}

MetricSummary summarize(const std::vector<std::optional<double>>& values) {
    MetricSummary s;
    if (values.empty()) return s;
    for (const auto& v : values)
        if (!v) return s;  // any undefined fold leaves the summary undefined
    double mean = 0.0;
    for (const auto& v : values) mean += *v;
    mean /= static_cast<double>(values.size());
    double sq = 0.0;
    for (const auto& v : values) sq += (*v - mean) * (*v - mean);
    const double sd = values.size() > 1
                          ? std::sqrt(sq / (static_cast<double>(values.size()) - 1.0))
                          : 0.0;
    s.mean = mean;
    s.std_error = sd / std::sqrt(static_cast<double>(values.size()));
    return s;
}

}  // namespace

EvalReport run_experiment(const std::vector<SubjectSample>& subjects,
                          const ExperimentConfig& config) {
    if (config.classifiers.empty()) throw EvalError(Kind::BadInput, "no classifiers requested");
    const TaskData data = build_task_data(subjects, config);
    const std::vector<FoldSplit> folds = make_folds(data.y, config.num_folds, config.seed);

    EvalReport report;
    report.task = config.task;
    report.seed = config.seed;
    report.num_folds = config.num_folds;
    report.num_subjects = static_cast<int>(data.subject_index.size());

    for (std::size_t ci = 0; ci < config.classifiers.size(); ++ci) {
        const ClassifierKind kind = config.classifiers[ci];
        ClassifierResult result;
        result.kind = kind;
        result.cumulative = ConfusionMatrix(data.num_classes);

        std::vector<std::optional<double>> sens, spec, acc;
        for (const FoldSplit& fold : folds) {
            const std::uint64_t fit_seed =
                mix64(config.seed ^ mix64(fold.index * 8 + static_cast<int>(kind) + 1));
            const std::unique_ptr<Fitted> model =
                fit_classifier(kind, config, data, fold, fit_seed);

            ConfusionMatrix confusion(data.num_classes);
            for (int r : fold.test)
                ++confusion.at(data.y[r], model->predict(data.x[r]));

            BinaryMetrics fm;
            if (data.num_classes == 2) {
                fm = binary_metrics(confusion, 1);
            } else {
                fm.accuracy = multiclass_accuracy(confusion);
            }
            sens.push_back(fm.sensitivity);
            spec.push_back(fm.specificity);
            acc.push_back(fm.accuracy);
            result.fold_metrics.push_back(fm);
            result.cumulative.add(confusion);
            result.fold_confusions.push_back(std::move(confusion));
        }
        result.sensitivity = summarize(sens);
        result.specificity = summarize(spec);
        result.accuracy = summarize(acc);
        report.classifiers.push_back(std::move(result));
    }

    // ANOVA and pairwise comparisons across classifiers, per metric
    if (config.classifiers.size() >= 2) {
        auto metric_grid = [&](auto getter) -> std::optional<std::vector<std::vector<double>>> {
            std::vector<std::vector<double>> grid(config.num_folds,
                                                  std::vector<double>(config.classifiers.size()));
            for (std::size_t ci = 0; ci < config.classifiers.size(); ++ci)
                for (int f = 0; f < config.num_folds; ++f) {
                    const std::optional<double> v = getter(report.classifiers[ci].fold_metrics[f]);
                    if (!v) return std::nullopt;
                    grid[f][ci] = *v;
                }
            return grid;
        };

        std::vector<std::pair<std::string, std::function<std::optional<double>(
                                               const BinaryMetrics&)>>> metrics;
        metrics.emplace_back("accuracy", [](const BinaryMetrics& m) { return m.accuracy; });
        if (data.num_classes == 2) {
            metrics.emplace_back("sensitivity",
                                 [](const BinaryMetrics& m) { return m.sensitivity; });
            metrics.emplace_back("specificity",
                                 [](const BinaryMetrics& m) { return m.specificity; });
        }
        for (const auto& [name, getter] : metrics) {
            if (auto grid = metric_grid(getter)) {
                AnovaBlock block;
                block.anova = rm_anova(*grid);
                block.pairwise = pairwise_compare(*grid);
                report.anova[name] = std::move(block);
            }
        }
    }
    return report;
}

// --- rendering -----------------------------------------------------------

namespace {

nlohmann::json opt_json(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

nlohmann::json confusion_json(const ConfusionMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.k; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.k; ++j) row.push_back(m.at(i, j));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

nlohmann::json report_to_json(const EvalReport& report) {
    nlohmann::json j;
    j["task"] = task_name(report.task);
    j["seed"] = report.seed;
    j["folds"] = report.num_folds;
    j["subjects"] = report.num_subjects;

    nlohmann::json cls = nlohmann::json::object();
    for (const ClassifierResult& r : report.classifiers) {
        nlohmann::json c;
        nlohmann::json fold_metrics = nlohmann::json::array();
        for (const BinaryMetrics& m : r.fold_metrics)
            fold_metrics.push_back({{"sensitivity", opt_json(m.sensitivity)},
                                    {"specificity", opt_json(m.specificity)},
                                    {"accuracy", opt_json(m.accuracy)}});
        c["fold_metrics"] = fold_metrics;
        nlohmann::json fold_confusions = nlohmann::json::array();
        for (const ConfusionMatrix& m : r.fold_confusions)
            fold_confusions.push_back(confusion_json(m));
        c["fold_confusions"] = fold_confusions;
        c["cumulative_confusion"] = confusion_json(r.cumulative);
        c["mean"] = {{"sensitivity", opt_json(r.sensitivity.mean)},
                     {"specificity", opt_json(r.specificity.mean)},
                     {"accuracy", opt_json(r.accuracy.mean)}};
        c["std_error"] = {{"sensitivity", opt_json(r.sensitivity.std_error)},
                          {"specificity", opt_json(r.specificity.std_error)},
                          {"accuracy", opt_json(r.accuracy.std_error)}};
        cls[classifier_name(r.kind)] = std::move(c);
    }
    j["classifiers"] = std::move(cls);

    nlohmann::json anova = nlohmann::json::object();
    for (const auto& [metric, block] : report.anova) {
        nlohmann::json a;
        if (block.anova) {
            a["F"] = block.anova->f;
            a["df_between"] = block.anova->df_between;
            a["df_error"] = block.anova->df_error;
            a["p"] = block.anova->p;
        }
        nlohmann::json pw = nlohmann::json::object();
        for (std::size_t x = 0; x < block.pairwise.size(); ++x) {
            for (std::size_t y = x + 1; y < block.pairwise.size(); ++y) {
                const std::string key =
                    std::string(classifier_name(report.classifiers[x].kind)) + "_vs_" +
                    classifier_name(report.classifiers[y].kind);
                pw[key] = opt_json(block.pairwise[x][y]);
            }
        }
        a["pairwise"] = std::move(pw);
        anova[metric] = std::move(a);
    }
    j["anova"] = std::move(anova);
    return j;
}

namespace {

std::string pct_cell(const MetricSummary& s) {
    if (!s.mean) return "       --       ";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%6.2f ± %5.2f", *s.mean * 100.0,
                  s.std_error ? *s.std_error * 100.0 : 0.0);
    return buf;
}

}  // namespace

std::string render_tables(const EvalReport& report) {
    std::ostringstream out;
    out << "=== task " << task_name(report.task) << ": " << report.num_folds << "-fold, "
        << report.num_subjects << " subjects, seed " << report.seed << " ===\n";

    if (report.task != Task::FourClass) {
        out << "\nmean +/- standard error (%)\n";
        out << "metric      ";
        for (const ClassifierResult& r : report.classifiers) {
            char buf[32];
            std::snprintf(buf, sizeof buf, " %-14s", classifier_name(r.kind));
            out << buf;
        }
        out << '\n';
        const std::array<std::pair<const char*, MetricSummary ClassifierResult::*>, 3> rows = {
            std::pair{"sensitivity", &ClassifierResult::sensitivity},
            std::pair{"specificity", &ClassifierResult::specificity},
            std::pair{"accuracy", &ClassifierResult::accuracy}};
        for (const auto& [name, member] : rows) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%-12s", name);
            out << buf;
            for (const ClassifierResult& r : report.classifiers) out << ' ' << pct_cell(r.*member);
            out << '\n';
        }
    } else {
        const char* names[4] = {"no", "mild", "mod", "severe"};
        for (const ClassifierResult& r : report.classifiers) {
            out << "\n--- " << classifier_name(r.kind) << ": cumulative confusion (accuracy ";
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.2f%%",
                          multiclass_accuracy(r.cumulative) * 100.0);
            out << buf << ") ---\n";
            out << "actual\\pred      no    mild     mod  severe\n";
            for (int a = 0; a < 4; ++a) {
                char rowbuf[128];
                std::snprintf(rowbuf, sizeof rowbuf, "%-12s %6lld  %6lld  %6lld  %6lld\n",
                              names[a], r.cumulative.at(a, 0), r.cumulative.at(a, 1),
                              r.cumulative.at(a, 2), r.cumulative.at(a, 3));
                out << rowbuf;
            }
        }
    }

    for (const auto& [metric, block] : report.anova) {
        if (!block.anova) continue;
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "\nrepeated-measures ANOVA on %s: F(%d, %d) = %.3f, p = %.4g\n",
                      metric.c_str(), block.anova->df_between, block.anova->df_error,
                      block.anova->f, block.anova->p);
        out << buf;
        for (std::size_t x = 0; x < block.pairwise.size(); ++x) {
            for (std::size_t y = x + 1; y < block.pairwise.size(); ++y) {
                out << "  " << classifier_name(report.classifiers[x].kind) << " vs "
                    << classifier_name(report.classifiers[y].kind) << ": p = ";
                if (block.pairwise[x][y]) {
                    std::snprintf(buf, sizeof buf, "%.4g", *block.pairwise[x][y]);
                    out << buf;
                } else {
                    out << "undefined";
                }
                out << '\n';
            }
        }
    }
    return out.str();
}

}  // namespace sahs::eval
