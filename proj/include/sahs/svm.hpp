#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sahs/standardize.hpp"

namespace sahs::svm {

struct SvmError : std::runtime_error {
    enum class Kind { SingleClassTrainingSet, DimensionMismatch };
    Kind kind;
    SvmError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

struct SvmConfig {
    double c = 1.0;               // hinge penalty weight
    int epochs = 100;
    bool balanced_weights = true; // class weight N / (K * N_k)
    std::uint64_t seed = 0;
};

// Linear soft-margin machines, one-vs-rest for multiclass. The trainer is
// epoch-shuffled Pegasos-style subgradient descent on
//   0.5*||w||^2 + C * sum_i c_{y_i} * hinge(y_i, w.x_i + b)
// over standardized features.
struct LinearSvmModel {
    SvmConfig config;
    int dim = 0;
    std::vector<int> classes;               // sorted class labels
    std::vector<std::vector<double>> w;     // one weight vector per class
    std::vector<double> b;
    std::vector<double> class_weight;       // penalty weight per class index
    Standardizer scaler;
};

LinearSvmModel fit_svm(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                       const SvmConfig& config);

// Per-class decision value w_k . standardized(x) + b_k.
double decision_value(const LinearSvmModel& model, int class_index,
                      std::span<const double> features);

// argmax decision value; ties resolve to the lowest class label.
int predict_svm(const LinearSvmModel& model, std::span<const double> features);

// Primal objective of the model on a dataset, using the model's scaler and
// class weights. Exposed so tests can compare against an independent
// optimizer.
double objective(const LinearSvmModel& model, const std::vector<std::vector<double>>& x,
                 const std::vector<int>& y);

void save_svm(const LinearSvmModel& model, const std::string& path);
LinearSvmModel load_svm(const std::string& path);

}  // namespace sahs::svm
