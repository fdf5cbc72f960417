#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sahs::abcart {

struct CartError : std::runtime_error {
    enum class Kind { EmptySampleSet, SingleClassTrainingSet, DimensionMismatch };
    Kind kind;
    CartError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

// CART node; leaves carry a class label, internal nodes a (feature,
// threshold) test routing x[feature] < threshold to the left child.
struct CartNode {
    int feature = -1;
    double threshold = 0.0;
    int label = -1;
    std::unique_ptr<CartNode> left;
    std::unique_ptr<CartNode> right;

    bool is_leaf() const { return feature < 0; }
};

struct CartTree {
    std::unique_ptr<CartNode> root;
    int max_depth = 0;
    int dim = 0;
};

// Gini impurity 1 - sum_k p_k^2 of a node given per-class weight sums.
double gini_impurity(const std::vector<double>& class_weight_sums);

// Stage weight of SAMME boosting: ln((1-err)/err) + ln(K-1), capped at
// ln(1e12) for a perfect round.
double samme_alpha(double err, int num_classes);

// Greedy weighted-Gini splitting. Candidate thresholds are midpoints
// between consecutive distinct sorted feature values; splitting stops at
// max_depth, on pure nodes, or when no split reduces impurity. Ties pick
// the lowest feature index, then the lowest threshold; leaf ties pick the
// lowest class label.
CartTree fit_cart(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                  const std::vector<double>& sample_weights, int max_depth, int num_classes);

int predict_cart(const CartTree& tree, std::span<const double> features);

struct AbCartConfig {
    int num_rounds = 50;
    int max_depth = 3;
    std::uint64_t seed = 0;  // accepted for interface symmetry; the fit is deterministic
};

struct CartStage {
    CartTree tree;
    double alpha = 0.0;
};

struct AbCartModel {
    AbCartConfig config;
    std::vector<int> classes;
    std::vector<CartStage> stages;
    int dim = 0;
};

struct BoostTrace {
    std::vector<double> errors;       // weighted error per accepted round
    std::vector<double> alphas;
    std::vector<double> weight_sums;  // sample-weight total after reweighting
};

// SAMME boosting over CART trees. Round t reweights misclassified samples
// by exp(alpha_t) with alpha_t = ln((1-e)/e) + ln(K-1); rounds at or above
// the chance error 1 - 1/K are discarded and boosting stops, a perfect
// round is kept with alpha capped at ln(1e12).
AbCartModel fit_adaboost(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                         const AbCartConfig& config, BoostTrace* trace = nullptr);

// Weighted vote argmax; ties resolve to the lowest class label.
int predict_abcart(const AbCartModel& model, std::span<const double> features);

void save_abcart(const AbCartModel& model, const std::string& path);
AbCartModel load_abcart(const std::string& path);

}  // namespace sahs::abcart
