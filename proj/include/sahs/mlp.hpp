#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sahs/kernels.hpp"
#include "sahs/standardize.hpp"

namespace sahs::mlp {

struct MlpError : std::runtime_error {
    enum class Kind { DimensionMismatch, EmptyTrainingSet };
    Kind kind;
    MlpError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

// Fully-connected stack with tanh hidden activations and a softmax output,
// trained with RMSprop on mean cross-entropy.
struct MlpConfig {
    int input_dim = 17;
    std::vector<int> hidden_sizes = {1024, 512, 256, 128, 64, 32, 16, 8, 4};
    int num_classes = 2;
    double learning_rate = 0.001;
    double rms_decay = 0.9;
    double epsilon = 1e-8;
    int batch_size = 32;
    int max_epochs = 200;
    std::uint64_t seed = 0;
};

struct MlpModel {
    MlpConfig config;
    Standardizer scaler;
    std::vector<Matrix> weights;              // layer l: [out x in]
    std::vector<std::vector<double>> biases;  // layer l: [out]
    std::vector<Matrix> rms_w;                // RMSprop squared-gradient state
    std::vector<std::vector<double>> rms_b;

    int num_layers() const { return static_cast<int>(weights.size()); }
};

struct Gradients {
    std::vector<Matrix> dw;
    std::vector<std::vector<double>> db;
};

// Glorot-uniform weights, zero biases, zero RMSprop state.
MlpModel init_model(const MlpConfig& config);

// Class probabilities for one sample (standardization applied internally).
std::vector<double> forward(const MlpModel& model, std::span<const double> features);

int predict_class(const MlpModel& model, std::span<const double> features);

// Mean cross-entropy over the batch; used by training and by tests.
double batch_loss(const MlpModel& model, const std::vector<std::vector<double>>& x,
                  const std::vector<int>& y);

// Gradients of the mean cross-entropy loss over the batch.
Gradients backprop(const MlpModel& model, const std::vector<std::vector<double>>& x,
                   const std::vector<int>& y);

// accum <- rho*accum + (1-rho)*g^2 ; theta <- theta - lr*g/(sqrt(accum)+eps)
void rmsprop_step(MlpModel& model, const Gradients& grads);

struct TrainTrace {
    std::vector<double> train_loss;    // per epoch, after updates
    std::vector<double> val_accuracy;  // per epoch
    int best_epoch = -1;
    bool single_class_warning = false;
};

// Mini-batch training; returns the snapshot with the best validation
// accuracy (earliest epoch on ties). Standardization is fit on the
// training set only. Deterministic given config.seed.
MlpModel train_mlp(const MlpConfig& config, const std::vector<std::vector<double>>& train_x,
                   const std::vector<int>& train_y, const std::vector<std::vector<double>>& val_x,
                   const std::vector<int>& val_y, TrainTrace* trace = nullptr);

// Self-describing JSON container, exact round-trip.
void save_mlp(const MlpModel& model, const std::string& path);
MlpModel load_mlp(const std::string& path);

}  // namespace sahs::mlp
