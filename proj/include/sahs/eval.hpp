#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sahs/abcart.hpp"
#include "sahs/features.hpp"
#include "sahs/mlp.hpp"
#include "sahs/svm.hpp"

namespace sahs::eval {

struct EvalError : std::runtime_error {
    enum class Kind { TooFewSubjects, IncompleteGrid, InvalidCutoff, BadInput };
    Kind kind;
    EvalError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

// --- severity ------------------------------------------------------------

enum class Severity { No = 0, Mild = 1, Moderate = 2, Severe = 3 };

// no < 5, mild 5..15, moderate 15..30, severe >= 30 (events/hour)
Severity label_from_ahi(double ahi);
const char* severity_name(Severity s);
Severity severity_from_name(const std::string& name);

// positive (SAHS-affected) iff ahi >= cutoff; cutoff must be 5, 15 or 30
bool binarize(double ahi, double cutoff);

// --- subjects and the feature table --------------------------------------

struct SubjectSample {
    std::string id;
    std::array<double, features::FeatureVector::kCount> feature_values{};
    double ahi = 0.0;
    Severity label = Severity::No;
};

// CSV `subject_id,f1..f17,ahi,label`, rows ordered by subject id, numbers
// with 12 significant digits.
void write_feature_csv(const std::string& path, std::vector<SubjectSample> subjects);
std::vector<SubjectSample> read_feature_csv(const std::string& path);

// --- folds ----------------------------------------------------------------

struct FoldSplit {
    int index = 0;
    std::vector<int> train;
    std::vector<int> val;
    std::vector<int> test;
};

// Stratified k-fold: per-class chunks with staggered remainders so fold
// sizes differ by at most one; the held-out tenth is the test set, the
// next tenth (cyclically) the validation set, the rest the training set.
std::vector<FoldSplit> make_folds(const std::vector<int>& labels, int k, std::uint64_t seed);

// --- metrics ----------------------------------------------------------------

struct ConfusionMatrix {
    int k = 0;
    std::vector<long long> cells;  // row = actual, column = predicted

    ConfusionMatrix() = default;
    explicit ConfusionMatrix(int classes)
        : k(classes), cells(static_cast<std::size_t>(classes) * classes, 0) {}

    long long& at(int actual, int predicted) {
        return cells[static_cast<std::size_t>(actual) * k + predicted];
    }
    long long at(int actual, int predicted) const {
        return cells[static_cast<std::size_t>(actual) * k + predicted];
    }
    long long total() const;
    long long diagonal() const;
    void add(const ConfusionMatrix& other);
};

struct BinaryMetrics {
    std::optional<double> sensitivity;  // TP / (TP + FN)
    std::optional<double> specificity;  // TN / (TN + FP)
    std::optional<double> accuracy;
};

// Zero denominators yield empty optionals, never a crash.
BinaryMetrics binary_metrics(const ConfusionMatrix& m, int positive_class);

double multiclass_accuracy(const ConfusionMatrix& m);

// --- repeated-measures ANOVA ----------------------------------------------

struct AnovaResult {
    double f = 0.0;
    int df_between = 0;
    int df_error = 0;
    double p = 1.0;
};

// One-way within-subject ANOVA on a folds x classifiers grid; rows are the
// blocking factor.
AnovaResult rm_anova(const std::vector<std::vector<double>>& grid);

// Paired t-tests per column pair, Bonferroni-adjusted (times the number of
// pairs, capped at 1). Zero-variance differences give p = 1 when the
// columns are identical and an empty optional otherwise.
std::vector<std::vector<std::optional<double>>> pairwise_compare(
    const std::vector<std::vector<double>>& grid);

// --- experiments ------------------------------------------------------------

enum class Task { Binary5, Binary15, Binary30, FourClass };
const char* task_name(Task t);
Task task_from_name(const std::string& name);

enum class ClassifierKind { Svm, AbCart, Dnn };
const char* classifier_name(ClassifierKind c);
ClassifierKind classifier_from_name(const std::string& name);

struct ExperimentConfig {
    Task task = Task::Binary15;
    std::vector<ClassifierKind> classifiers = {ClassifierKind::Svm, ClassifierKind::AbCart,
                                               ClassifierKind::Dnn};
    std::uint64_t seed = 0;
    int num_folds = 10;
    mlp::MlpConfig mlp;
    svm::SvmConfig svm;
    abcart::AbCartConfig abcart;
    // four-class task balances the cohort down to these per-class counts
    std::array<int, 4> fourclass_counts = {70, 70, 70, 60};
};

struct MetricSummary {
    std::optional<double> mean;
    std::optional<double> std_error;  // sample std of fold values / sqrt(folds)
};

struct ClassifierResult {
    ClassifierKind kind;
    std::vector<ConfusionMatrix> fold_confusions;
    std::vector<BinaryMetrics> fold_metrics;  // accuracy only for four-class runs
    ConfusionMatrix cumulative;
    MetricSummary sensitivity, specificity, accuracy;
};

struct AnovaBlock {
    std::optional<AnovaResult> anova;
    std::vector<std::vector<std::optional<double>>> pairwise;
};

struct EvalReport {
    Task task;
    std::uint64_t seed = 0;
    int num_folds = 0;
    int num_subjects = 0;
    std::vector<ClassifierResult> classifiers;
    std::map<std::string, AnovaBlock> anova;  // keyed by metric name
};

// Runs the task under stratified cross-validation. The DNN consumes the
// train/validation/test partitions; SVM and AB-CART train on the 80%
// training partition and are evaluated on the same test partition.
// Deterministic given config.seed.
EvalReport run_experiment(const std::vector<SubjectSample>& subjects,
                          const ExperimentConfig& config);

nlohmann::json report_to_json(const EvalReport& report);

// Aligned text tables: per-metric mean +/- standard error for binary runs,
// cumulative confusion blocks for the four-class run.
std::string render_tables(const EvalReport& report);

}  // namespace sahs::eval
