#include "sahs/svm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include "json.hpp"
#include "sahs/prng.hpp"

namespace sahs::svm {

namespace {

using Kind = SvmError::Kind;

}  // namespace

LinearSvmModel fit_svm(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                       const SvmConfig& config) {
    if (x.empty() || x.size() != y.size())
        throw SvmError(Kind::DimensionMismatch, "features and labels must align");

    LinearSvmModel m;
    m.config = config;
    m.dim = static_cast<int>(x[0].size());

    std::map<int, int> counts;
    for (int label : y) ++counts[label];
    if (counts.size() < 2)
        throw SvmError(Kind::SingleClassTrainingSet, "training set has a single class");
    for (const auto& [label, cnt] : counts) m.classes.push_back(label);

    const int k = static_cast<int>(m.classes.size());
    const int n = static_cast<int>(x.size());
    m.class_weight.assign(k, 1.0);
    if (config.balanced_weights) {
        for (int ci = 0; ci < k; ++ci)
            m.class_weight[ci] = static_cast<double>(n) / (k * counts[m.classes[ci]]);
    }

    m.scaler.fit(x);
    std::vector<std::vector<double>> xs(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (static_cast<int>(x[i].size()) != m.dim)
            throw SvmError(Kind::DimensionMismatch, "inconsistent feature dimensions");
        xs[i] = m.scaler.apply(x[i]);
    }

    // class index per sample, for the weight lookup
    std::vector<int> yidx(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        yidx[i] = static_cast<int>(std::lower_bound(m.classes.begin(), m.classes.end(), y[i]) -
                                   m.classes.begin());

    m.w.assign(k, std::vector<double>(m.dim, 0.0));
    m.b.assign(k, 0.0);

    // subgradient iterations do not descend monotonically, so each machine
    // keeps its best-objective iterate, measured at epoch boundaries
    std::vector<std::vector<double>> best_w = m.w;
    std::vector<double> best_b = m.b;
    std::vector<double> best_j(k);

    auto machine_objective = [&](int mk) {
        double sq = 0.0;
        for (double v : m.w[mk]) sq += v * v;
        double hinge = 0.0;
        for (int i = 0; i < n; ++i) {
            const double ysign = (yidx[i] == mk) ? 1.0 : -1.0;
            double margin = m.b[mk];
            for (int j = 0; j < m.dim; ++j) margin += m.w[mk][j] * xs[i][j];
            hinge += m.class_weight[yidx[i]] * std::max(0.0, 1.0 - ysign * margin);
        }
        return 0.5 * sq + config.c * hinge;
    };
    for (int mk = 0; mk < k; ++mk) best_j[mk] = machine_objective(mk);

    const double lambda = 1.0 / (config.c * n);
    Rng rng(mix64(config.seed ^ 0x53564d5f66697421ull));
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    // All machines see the samples in the same shuffled order with a shared
    // step counter, which makes the two-class one-vs-rest pair exact
    // mirrors of a single binary machine.
    long long t = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        for (int idx : order) {
            ++t;
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            const std::vector<double>& xi = xs[idx];
            const double ci = m.class_weight[yidx[idx]];
            for (int mk = 0; mk < k; ++mk) {
                std::vector<double>& w = m.w[mk];
                const double ysign = (yidx[idx] == mk) ? 1.0 : -1.0;
                double margin = m.b[mk];
                for (int j = 0; j < m.dim; ++j) margin += w[j] * xi[j];
                margin *= ysign;

                const double shrink = 1.0 - eta * lambda;
                if (margin < 1.0) {
                    const double step = eta * ci * ysign;
                    for (int j = 0; j < m.dim; ++j) w[j] = shrink * w[j] + step * xi[j];
                    m.b[mk] += step;
                } else {
                    for (int j = 0; j < m.dim; ++j) w[j] *= shrink;
                }
            }
        }
        for (int mk = 0; mk < k; ++mk) {
            const double j = machine_objective(mk);
            if (j < best_j[mk]) {
                best_j[mk] = j;
                best_w[mk] = m.w[mk];
                best_b[mk] = m.b[mk];
            }
        }
    }
    m.w = std::move(best_w);
    m.b = std::move(best_b);
    return m;
}

double decision_value(const LinearSvmModel& model, int class_index,
                      std::span<const double> features) {
    if (static_cast<int>(features.size()) != model.dim)
        throw SvmError(Kind::DimensionMismatch,
                       "got " + std::to_string(features.size()) + " features, expected " +
                           std::to_string(model.dim));
    std::vector<double> xs(model.dim);
    model.scaler.apply(features.data(), xs.data(), model.dim);
    double v = model.b[class_index];
    for (int j = 0; j < model.dim; ++j) v += model.w[class_index][j] * xs[j];
    return v;
}

int predict_svm(const LinearSvmModel& model, std::span<const double> features) {
    // strict > keeps the lowest class label on ties
    int best = 0;
    double best_v = decision_value(model, 0, features);
    for (int kk = 1; kk < static_cast<int>(model.classes.size()); ++kk) {
        const double v = decision_value(model, kk, features);
        if (v > best_v) {
            best_v = v;
            best = kk;
        }
    }
    return model.classes[best];
}

double objective(const LinearSvmModel& model, const std::vector<std::vector<double>>& x,
                 const std::vector<int>& y) {
    const int k = static_cast<int>(model.classes.size());
    double total = 0.0;
    for (int mk = 0; mk < k; ++mk) {
        double sq = 0.0;
        for (double wv : model.w[mk]) sq += wv * wv;
        double hinge_sum = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const int yi = static_cast<int>(
                std::lower_bound(model.classes.begin(), model.classes.end(), y[i]) -
                model.classes.begin());
            const double ysign = (yi == mk) ? 1.0 : -1.0;
            std::vector<double> xs = model.scaler.apply(x[i]);
            double margin = model.b[mk];
            for (int j = 0; j < model.dim; ++j) margin += model.w[mk][j] * xs[j];
            hinge_sum += model.class_weight[yi] * std::max(0.0, 1.0 - ysign * margin);
        }
        total += 0.5 * sq + model.config.c * hinge_sum;
    }
    return total;
}

// --- serialization ------------------------------------------------------

void save_svm(const LinearSvmModel& model, const std::string& path) {
    nlohmann::json j;
    j["format"] = "sahs.svm.v1";
    j["config"] = {{"c", model.config.c},
                   {"epochs", model.config.epochs},
                   {"balanced_weights", model.config.balanced_weights},
                   {"seed", model.config.seed}};
    j["dim"] = model.dim;
    j["classes"] = model.classes;
    j["w"] = model.w;
    j["b"] = model.b;
    j["class_weight"] = model.class_weight;
    j["scaler"] = {{"mean", model.scaler.mean}, {"stddev", model.scaler.stddev}};
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot create '" + path + "'");
    out << j.dump(1) << '\n';
}

LinearSvmModel load_svm(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.at("format") != "sahs.svm.v1")
        throw std::runtime_error("unexpected model format tag " + j.at("format").dump());
    LinearSvmModel m;
    m.config.c = j.at("config").at("c").get<double>();
    m.config.epochs = j.at("config").at("epochs").get<int>();
    m.config.balanced_weights = j.at("config").at("balanced_weights").get<bool>();
    m.config.seed = j.at("config").at("seed").get<std::uint64_t>();
    m.dim = j.at("dim").get<int>();
    m.classes = j.at("classes").get<std::vector<int>>();
    m.w = j.at("w").get<std::vector<std::vector<double>>>();
    m.b = j.at("b").get<std::vector<double>>();
    m.class_weight = j.at("class_weight").get<std::vector<double>>();
    m.scaler.mean = j.at("scaler").at("mean").get<std::vector<double>>();
    m.scaler.stddev = j.at("scaler").at("stddev").get<std::vector<double>>();
    return m;
}

}  // namespace sahs::svm
