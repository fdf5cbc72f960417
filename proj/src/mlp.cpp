#include "sahs/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "json.hpp"
#include "sahs/prng.hpp"

namespace sahs::mlp {

namespace {

using kernels::Exec;
using Kind = MlpError::Kind;

constexpr double kLogFloor = 1e-12;

std::vector<int> layer_sizes(const MlpConfig& c) {
    std::vector<int> sizes;
    sizes.push_back(c.input_dim);
    sizes.insert(sizes.end(), c.hidden_sizes.begin(), c.hidden_sizes.end());
    sizes.push_back(c.num_classes);
    return sizes;
}

void validate_config(const MlpConfig& c) {
    if (c.input_dim <= 0 || c.num_classes < 2)
        throw MlpError(Kind::DimensionMismatch, "input_dim and num_classes must be positive");
    for (int hsz : c.hidden_sizes)
        if (hsz <= 0) throw MlpError(Kind::DimensionMismatch, "hidden sizes must be positive");
    if (c.learning_rate <= 0.0 || c.rms_decay <= 0.0 || c.rms_decay >= 1.0 || c.batch_size <= 0)
        throw MlpError(Kind::DimensionMismatch, "bad optimizer settings");
}

// row-wise softmax with the usual max shift
void softmax_rows(Matrix& z) {
    for (int i = 0; i < z.rows; ++i) {
        double* row = z.row(i);
        double mx = row[0];
        for (int j = 1; j < z.cols; ++j) mx = std::max(mx, row[j]);
        double sum = 0.0;
        for (int j = 0; j < z.cols; ++j) {
            row[j] = std::exp(row[j] - mx);
            sum += row[j];
        }
        for (int j = 0; j < z.cols; ++j) row[j] /= sum;
    }
}

// standardized batch matrix from raw samples
Matrix standardized_batch(const MlpModel& m, const std::vector<std::vector<double>>& x) {
    const int dim = m.config.input_dim;
    Matrix out(static_cast<int>(x.size()), dim);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (static_cast<int>(x[i].size()) != dim)
            throw MlpError(Kind::DimensionMismatch,
                           "sample has " + std::to_string(x[i].size()) + " features, expected " +
                               std::to_string(dim));
        m.scaler.apply(x[i].data(), out.row(static_cast<int>(i)), dim);
    }
    return out;
}

// forward pass keeping every activation; activations[0] is the input
std::vector<Matrix> forward_batch(const MlpModel& m, Matrix input) {
    std::vector<Matrix> acts;
    acts.reserve(m.num_layers() + 1);
    acts.push_back(std::move(input));
    for (int l = 0; l < m.num_layers(); ++l) {
        const Matrix& w = m.weights[l];
        const Matrix& a = acts.back();
        Matrix z(a.rows, w.rows);
        kernels::matmul_nt(a.data.data(), w.data.data(), z.data.data(), a.rows, w.cols, w.rows,
                           Exec::Parallel);
        kernels::add_row_vector(z.data.data(), m.biases[l].data(), z.rows, z.cols,
                                Exec::Parallel);
        if (l + 1 < m.num_layers())
            kernels::tanh_forward(z.data.data(), z.data.size(), Exec::Parallel);
        else
            softmax_rows(z);
        acts.push_back(std::move(z));
    }
    return acts;
}

}  // namespace

MlpModel init_model(const MlpConfig& config) {
    validate_config(config);
    MlpModel m;
    m.config = config;
    m.scaler.mean.assign(config.input_dim, 0.0);
    m.scaler.stddev.assign(config.input_dim, 1.0);

    Rng rng(config.seed);
    const std::vector<int> sizes = layer_sizes(config);
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const int fan_in = sizes[l];
        const int fan_out = sizes[l + 1];
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        Matrix w(fan_out, fan_in);
        for (double& v : w.data) v = rng.uniform(-bound, bound);
        m.weights.push_back(std::move(w));
        m.biases.emplace_back(fan_out, 0.0);
        m.rms_w.emplace_back(fan_out, fan_in);
        m.rms_b.emplace_back(fan_out, 0.0);
    }
    return m;
}

std::vector<double> forward(const MlpModel& model, std::span<const double> features) {
    if (static_cast<int>(features.size()) != model.config.input_dim)
        throw MlpError(Kind::DimensionMismatch,
                       "got " + std::to_string(features.size()) + " features, expected " +
                           std::to_string(model.config.input_dim));
    std::vector<std::vector<double>> batch{std::vector<double>(features.begin(), features.end())};
    const std::vector<Matrix> acts = forward_batch(model, standardized_batch(model, batch));
    const Matrix& probs = acts.back();
    return {probs.row(0), probs.row(0) + probs.cols};
}

int predict_class(const MlpModel& model, std::span<const double> features) {
    const std::vector<double> p = forward(model, features);
    return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

double batch_loss(const MlpModel& model, const std::vector<std::vector<double>>& x,
                  const std::vector<int>& y) {
    const std::vector<Matrix> acts = forward_batch(model, standardized_batch(model, x));
    const Matrix& probs = acts.back();
    double loss = 0.0;
    for (int i = 0; i < probs.rows; ++i)
        loss -= std::log(std::max(probs(i, y[i]), kLogFloor));
    return loss / probs.rows;
}

Gradients backprop(const MlpModel& model, const std::vector<std::vector<double>>& x,
                   const std::vector<int>& y) {
    if (x.empty() || x.size() != y.size())
        throw MlpError(Kind::DimensionMismatch, "batch features and labels must align");
    const int batch = static_cast<int>(x.size());
    const int layers = model.num_layers();
    for (int label : y)
        if (label < 0 || label >= model.config.num_classes)
            throw MlpError(Kind::DimensionMismatch, "label out of range");

    std::vector<Matrix> acts = forward_batch(model, standardized_batch(model, x));

    Gradients g;
    g.dw.resize(layers);
    g.db.resize(layers);

    // softmax + cross-entropy: dZ = (P - Y) / batch
    Matrix dz = acts.back();
    for (int i = 0; i < batch; ++i) dz(i, y[i]) -= 1.0;
    for (double& v : dz.data) v /= batch;

    for (int l = layers - 1; l >= 0; --l) {
        const Matrix& a_prev = acts[l];
        const Matrix& w = model.weights[l];

        g.dw[l] = Matrix(w.rows, w.cols);
        kernels::matmul_tn(dz.data.data(), a_prev.data.data(), g.dw[l].data.data(), dz.rows,
                           dz.cols, a_prev.cols, Exec::Parallel);
        g.db[l].assign(w.rows, 0.0);
        kernels::col_sum(dz.data.data(), g.db[l].data(), dz.rows, dz.cols, Exec::Parallel);

        if (l > 0) {
            Matrix dprev(batch, w.cols);
            kernels::matmul(dz.data.data(), w.data.data(), dprev.data.data(), dz.rows, dz.cols,
                            w.cols, Exec::Parallel);
            kernels::tanh_backward(acts[l].data.data(), dprev.data.data(), dprev.data.size(),
                                   Exec::Parallel);
            dz = std::move(dprev);
        }
    }
    return g;
}

void rmsprop_step(MlpModel& model, const Gradients& grads) {
    const MlpConfig& c = model.config;
    for (int l = 0; l < model.num_layers(); ++l) {
        if (grads.dw[l].rows != model.weights[l].rows ||
            grads.dw[l].cols != model.weights[l].cols)
            throw MlpError(Kind::DimensionMismatch, "gradient shape mismatch");
        kernels::rmsprop_update(model.weights[l].data.data(), model.rms_w[l].data.data(),
                                grads.dw[l].data.data(), model.weights[l].data.size(),
                                c.learning_rate, c.rms_decay, c.epsilon, Exec::Parallel);
        kernels::rmsprop_update(model.biases[l].data(), model.rms_b[l].data(),
                                grads.db[l].data(), model.biases[l].size(), c.learning_rate,
                                c.rms_decay, c.epsilon, Exec::Parallel);
    }
}

namespace {

double validation_accuracy(const MlpModel& m, const std::vector<std::vector<double>>& x,
                           const std::vector<int>& y) {
    if (x.empty()) return 0.0;
    const std::vector<Matrix> acts = forward_batch(m, standardized_batch(m, x));
    const Matrix& probs = acts.back();
    int hits = 0;
    for (int i = 0; i < probs.rows; ++i) {
        const double* row = probs.row(i);
        int best = 0;
        for (int j = 1; j < probs.cols; ++j)
            if (row[j] > row[best]) best = j;
        if (best == y[i]) ++hits;
    }
    return static_cast<double>(hits) / probs.rows;
}

}  // namespace

MlpModel train_mlp(const MlpConfig& config, const std::vector<std::vector<double>>& train_x,
                   const std::vector<int>& train_y, const std::vector<std::vector<double>>& val_x,
                   const std::vector<int>& val_y, TrainTrace* trace) {
    if (train_x.empty()) throw MlpError(Kind::EmptyTrainingSet, "empty training set");
    if (train_x.size() != train_y.size() || val_x.size() != val_y.size())
        throw MlpError(Kind::DimensionMismatch, "features and labels must align");

    MlpModel model = init_model(config);
    model.scaler.fit(train_x);

    TrainTrace local;
    TrainTrace& tr = trace ? *trace : local;
    tr = TrainTrace{};
    tr.single_class_warning =
        std::adjacent_find(train_y.begin(), train_y.end(), std::not_equal_to<>()) ==
        train_y.end();

    Rng rng(mix64(config.seed ^ 0x5a5a5a5a5a5a5a5aull));
    std::vector<int> order(train_x.size());
    std::iota(order.begin(), order.end(), 0);

    MlpModel best = model;
    double best_acc = -1.0;

    for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t at = 0; at < order.size(); at += config.batch_size) {
            const std::size_t end =
                std::min(at + static_cast<std::size_t>(config.batch_size), order.size());
            std::vector<std::vector<double>> bx;
            std::vector<int> by;
            bx.reserve(end - at);
            by.reserve(end - at);
            for (std::size_t i = at; i < end; ++i) {
                bx.push_back(train_x[order[i]]);
                by.push_back(train_y[order[i]]);
            }
            rmsprop_step(model, backprop(model, bx, by));
        }
        tr.train_loss.push_back(batch_loss(model, train_x, train_y));
        const double acc = validation_accuracy(model, val_x, val_y);
        tr.val_accuracy.push_back(acc);
        if (acc > best_acc) {
            best_acc = acc;
            best = model;
            tr.best_epoch = epoch;
        }
    }
    if (tr.best_epoch < 0) best = model;  // no epochs ran
    return best;
}

// --- serialization ------------------------------------------------------

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix matrix_from_json(const json& j) {
    Matrix m(j.at("rows").get<int>(), j.at("cols").get<int>());
    m.data = j.at("data").get<std::vector<double>>();
    return m;
}

}  // namespace

void save_mlp(const MlpModel& model, const std::string& path) {
    json j;
    j["format"] = "sahs.mlp.v1";
    j["config"] = {{"input_dim", model.config.input_dim},
                   {"hidden_sizes", model.config.hidden_sizes},
                   {"num_classes", model.config.num_classes},
                   {"learning_rate", model.config.learning_rate},
                   {"rms_decay", model.config.rms_decay},
                   {"epsilon", model.config.epsilon},
                   {"batch_size", model.config.batch_size},
                   {"max_epochs", model.config.max_epochs},
                   {"seed", model.config.seed}};
    j["scaler"] = {{"mean", model.scaler.mean}, {"stddev", model.scaler.stddev}};
    j["weights"] = json::array();
    j["biases"] = json::array();
    j["rms_w"] = json::array();
    j["rms_b"] = json::array();
    for (int l = 0; l < model.num_layers(); ++l) {
        j["weights"].push_back(matrix_to_json(model.weights[l]));
        j["biases"].push_back(model.biases[l]);
        j["rms_w"].push_back(matrix_to_json(model.rms_w[l]));
        j["rms_b"].push_back(model.rms_b[l]);
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot create '" + path + "'");
    out << j.dump(1) << '\n';
}

MlpModel load_mlp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    json j = json::parse(in);
    if (j.at("format") != "sahs.mlp.v1")
        throw std::runtime_error("unexpected model format tag " + j.at("format").dump());
    MlpModel m;
    const json& c = j.at("config");
    m.config.input_dim = c.at("input_dim").get<int>();
    m.config.hidden_sizes = c.at("hidden_sizes").get<std::vector<int>>();
    m.config.num_classes = c.at("num_classes").get<int>();
    m.config.learning_rate = c.at("learning_rate").get<double>();
    m.config.rms_decay = c.at("rms_decay").get<double>();
    m.config.epsilon = c.at("epsilon").get<double>();
    m.config.batch_size = c.at("batch_size").get<int>();
    m.config.max_epochs = c.at("max_epochs").get<int>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.scaler.mean = j.at("scaler").at("mean").get<std::vector<double>>();
    m.scaler.stddev = j.at("scaler").at("stddev").get<std::vector<double>>();
    for (const auto& w : j.at("weights")) m.weights.push_back(matrix_from_json(w));
    for (const auto& b : j.at("biases")) m.biases.push_back(b.get<std::vector<double>>());
    for (const auto& w : j.at("rms_w")) m.rms_w.push_back(matrix_from_json(w));
    for (const auto& b : j.at("rms_b")) m.rms_b.push_back(b.get<std::vector<double>>());
    return m;
}

}  // namespace sahs::mlp
