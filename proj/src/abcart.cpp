#include "sahs/abcart.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "json.hpp"

namespace sahs::abcart {

namespace {

using Kind = CartError::Kind;

constexpr double kAlphaCap = 27.631021115928547;  // ln(1e12)

// gini_impurity scaled by the node weight, so split scores can be summed
double weighted_gini(const std::vector<double>& class_weight_sum, double total) {
    if (total <= 0.0) return 0.0;
    double acc = 0.0;
    for (double c : class_weight_sum) {
        const double p = c / total;
        acc += p * p;
    }
    return total * (1.0 - acc);
}

int majority_label(const std::vector<double>& class_weight_sum) {
    int best = 0;
    for (int k = 1; k < static_cast<int>(class_weight_sum.size()); ++k)
        if (class_weight_sum[k] > class_weight_sum[best]) best = k;  // ties keep lowest
    return best;
}

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double score = 0.0;  // summed weighted Gini of the two children
};

SplitChoice best_split(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                       const std::vector<double>& w, const std::vector<int>& idx,
                       int num_classes, int dim) {
    SplitChoice best;
    std::vector<int> sorted = idx;

    std::vector<double> left(num_classes), right(num_classes);
    for (int f = 0; f < dim; ++f) {
        std::stable_sort(sorted.begin(), sorted.end(),
                         [&](int a, int b) { return x[a][f] < x[b][f]; });

        std::fill(left.begin(), left.end(), 0.0);
        std::fill(right.begin(), right.end(), 0.0);
        double wl = 0.0, wr = 0.0;
        for (int i : sorted) {
            right[y[i]] += w[i];
            wr += w[i];
        }

        for (std::size_t at = 0; at + 1 < sorted.size(); ++at) {
            const int i = sorted[at];
            left[y[i]] += w[i];
            wl += w[i];
            right[y[i]] -= w[i];
            wr -= w[i];
            const double v = x[i][f];
            const double vnext = x[sorted[at + 1]][f];
            if (vnext <= v) continue;  // only boundaries between distinct values
            const double threshold = (v + vnext) / 2.0;
            const double score = weighted_gini(left, wl) + weighted_gini(right, wr);
            // strict < keeps the first candidate on ties, i.e. the lowest
            // feature index then the lowest threshold
            if (!best.found || score < best.score) {
                best.found = true;
                best.feature = f;
                best.threshold = threshold;
                best.score = score;
            }
        }
    }
    return best;
}

std::unique_ptr<CartNode> grow(const std::vector<std::vector<double>>& x,
                               const std::vector<int>& y, const std::vector<double>& w,
                               std::vector<int> idx, int depth, int max_depth, int num_classes,
                               int dim) {
    std::vector<double> class_sum(num_classes, 0.0);
    double total = 0.0;
    for (int i : idx) {
        class_sum[y[i]] += w[i];
        total += w[i];
    }

    auto node = std::make_unique<CartNode>();
    const double node_impurity = weighted_gini(class_sum, total);
    const bool pure = std::count_if(class_sum.begin(), class_sum.end(),
                                    [](double c) { return c > 0.0; }) <= 1;
    if (depth >= max_depth || pure) {
        node->label = majority_label(class_sum);
        return node;
    }

    const SplitChoice split = best_split(x, y, w, idx, num_classes, dim);
    if (!split.found || !(split.score < node_impurity)) {
        node->label = majority_label(class_sum);
        return node;
    }

    std::vector<int> lidx, ridx;
    for (int i : idx) {
        if (x[i][split.feature] < split.threshold)
            lidx.push_back(i);
        else
            ridx.push_back(i);
    }
    node->feature = split.feature;
    node->threshold = split.threshold;
    node->left = grow(x, y, w, std::move(lidx), depth + 1, max_depth, num_classes, dim);
    node->right = grow(x, y, w, std::move(ridx), depth + 1, max_depth, num_classes, dim);
    return node;
}

}  // namespace

double gini_impurity(const std::vector<double>& class_weight_sums) {
    double total = 0.0;
    for (double c : class_weight_sums) total += c;
    if (total <= 0.0) return 0.0;
    double acc = 0.0;
    for (double c : class_weight_sums) {
        const double p = c / total;
        acc += p * p;
    }
    return 1.0 - acc;
}

double samme_alpha(double err, int num_classes) {
    if (err <= 0.0) return kAlphaCap;
    return std::log((1.0 - err) / err) + std::log(static_cast<double>(num_classes - 1));
}

CartTree fit_cart(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                  const std::vector<double>& sample_weights, int max_depth, int num_classes) {
    if (x.empty()) throw CartError(Kind::EmptySampleSet, "no samples");
    if (x.size() != y.size() || x.size() != sample_weights.size())
        throw CartError(Kind::DimensionMismatch, "samples, labels and weights must align");

    double wsum = 0.0;
    for (double w : sample_weights) wsum += w;
    if (wsum <= 0.0) throw CartError(Kind::EmptySampleSet, "sample weights sum to zero");
    std::vector<double> w(sample_weights);
    for (double& v : w) v /= wsum;

    CartTree tree;
    tree.max_depth = max_depth;
    tree.dim = static_cast<int>(x[0].size());
    std::vector<int> idx(x.size());
    std::iota(idx.begin(), idx.end(), 0);
    tree.root = grow(x, y, w, std::move(idx), 0, max_depth, num_classes, tree.dim);
    return tree;
}

int predict_cart(const CartTree& tree, std::span<const double> features) {
    if (static_cast<int>(features.size()) != tree.dim)
        throw CartError(Kind::DimensionMismatch,
                        "got " + std::to_string(features.size()) + " features, expected " +
                            std::to_string(tree.dim));
    const CartNode* node = tree.root.get();
    while (!node->is_leaf())
        node = features[node->feature] < node->threshold ? node->left.get() : node->right.get();
    return node->label;
}

AbCartModel fit_adaboost(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                         const AbCartConfig& config, BoostTrace* trace) {
    if (x.empty()) throw CartError(Kind::EmptySampleSet, "no samples");
    std::set<int> labels(y.begin(), y.end());
    if (labels.size() < 2)
        throw CartError(Kind::SingleClassTrainingSet, "training set has a single class");

    AbCartModel model;
    model.config = config;
    model.classes.assign(labels.begin(), labels.end());
    model.dim = static_cast<int>(x[0].size());
    const int k = static_cast<int>(model.classes.size());

    // dense class indices for the trees
    std::vector<int> yidx(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        yidx[i] = static_cast<int>(
            std::lower_bound(model.classes.begin(), model.classes.end(), y[i]) -
            model.classes.begin());

    const int n = static_cast<int>(x.size());
    std::vector<double> w(n, 1.0 / n);
    const double chance = 1.0 - 1.0 / k;

    for (int round = 0; round < config.num_rounds; ++round) {
        CartTree tree = fit_cart(x, yidx, w, config.max_depth, k);

        std::vector<char> wrong(n, 0);
        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            if (predict_cart(tree, x[i]) != yidx[i]) {
                wrong[i] = 1;
                err += w[i];
            }
        }

        if (err >= chance) {
            // no better than chance: drop this round and stop boosting;
            // keep the first tree anyway so the model can still predict
            if (model.stages.empty()) model.stages.push_back({std::move(tree), 1.0});
            break;
        }

        const bool perfect = err <= 0.0;
        const double alpha = samme_alpha(err, k);
        model.stages.push_back({std::move(tree), alpha});
        if (trace) {
            trace->errors.push_back(err);
            trace->alphas.push_back(alpha);
        }
        if (perfect) {
            if (trace) trace->weight_sums.push_back(1.0);
            break;
        }

        double wsum = 0.0;
        for (int i = 0; i < n; ++i) {
            if (wrong[i]) w[i] *= std::exp(alpha);
            wsum += w[i];
        }
        for (double& v : w) v /= wsum;
        if (trace) {
            double check = 0.0;
            for (double v : w) check += v;
            trace->weight_sums.push_back(check);
        }
    }
    return model;
}

int predict_abcart(const AbCartModel& model, std::span<const double> features) {
    if (static_cast<int>(features.size()) != model.dim)
        throw CartError(Kind::DimensionMismatch,
                        "got " + std::to_string(features.size()) + " features, expected " +
                            std::to_string(model.dim));
    std::vector<double> votes(model.classes.size(), 0.0);
    for (const CartStage& stage : model.stages)
        votes[predict_cart(stage.tree, features)] += stage.alpha;
    int best = 0;
    for (int kk = 1; kk < static_cast<int>(votes.size()); ++kk)
        if (votes[kk] > votes[best]) best = kk;
    return model.classes[best];
}

// --- serialization ------------------------------------------------------

namespace {

using nlohmann::json;

json node_to_json(const CartNode& n) {
    if (n.is_leaf()) return json{{"label", n.label}};
    return json{{"feature", n.feature},
                {"threshold", n.threshold},
                {"left", node_to_json(*n.left)},
                {"right", node_to_json(*n.right)}};
}

std::unique_ptr<CartNode> node_from_json(const json& j) {
    auto node = std::make_unique<CartNode>();
    if (j.contains("label")) {
        node->label = j.at("label").get<int>();
        return node;
    }
    node->feature = j.at("feature").get<int>();
    node->threshold = j.at("threshold").get<double>();
    node->left = node_from_json(j.at("left"));
    node->right = node_from_json(j.at("right"));
    return node;
}

}  // namespace

void save_abcart(const AbCartModel& model, const std::string& path) {
    json j;
    j["format"] = "sahs.abcart.v1";
    j["config"] = {{"num_rounds", model.config.num_rounds},
                   {"max_depth", model.config.max_depth},
                   {"seed", model.config.seed}};
    j["classes"] = model.classes;
    j["dim"] = model.dim;
    j["stages"] = json::array();
    for (const CartStage& s : model.stages)
        j["stages"].push_back({{"alpha", s.alpha},
                               {"max_depth", s.tree.max_depth},
                               {"root", node_to_json(*s.tree.root)}});
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot create '" + path + "'");
    out << j.dump(1) << '\n';
}

AbCartModel load_abcart(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    json j = json::parse(in);
    if (j.at("format") != "sahs.abcart.v1")
        throw std::runtime_error("unexpected model format tag " + j.at("format").dump());
    AbCartModel m;
    m.config.num_rounds = j.at("config").at("num_rounds").get<int>();
    m.config.max_depth = j.at("config").at("max_depth").get<int>();
    m.config.seed = j.at("config").at("seed").get<std::uint64_t>();
    m.classes = j.at("classes").get<std::vector<int>>();
    m.dim = j.at("dim").get<int>();
    for (const auto& s : j.at("stages")) {
        CartStage stage;
        stage.alpha = s.at("alpha").get<double>();
        stage.tree.max_depth = s.at("max_depth").get<int>();
        stage.tree.dim = m.dim;
        stage.tree.root = node_from_json(s.at("root"));
        m.stages.push_back(std::move(stage));
    }
    return m;
}

}  // namespace sahs::abcart
