#pragma once

#include <cmath>
#include <vector>

namespace sahs {

// Per-feature z-score parameters, always fit on training data only.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev;  // constant features keep stddev 1

    void fit(const std::vector<std::vector<double>>& x) {
        const std::size_t dim = x.empty() ? 0 : x[0].size();
        mean.assign(dim, 0.0);
        stddev.assign(dim, 1.0);
        if (x.empty()) return;
        for (const auto& row : x)
            for (std::size_t j = 0; j < dim; ++j) mean[j] += row[j];
        for (std::size_t j = 0; j < dim; ++j) mean[j] /= static_cast<double>(x.size());
        std::vector<double> sq(dim, 0.0);
        for (const auto& row : x)
            for (std::size_t j = 0; j < dim; ++j) sq[j] += (row[j] - mean[j]) * (row[j] - mean[j]);
        for (std::size_t j = 0; j < dim; ++j) {
            const double s = std::sqrt(sq[j] / static_cast<double>(x.size()));
            stddev[j] = s > 0.0 ? s : 1.0;
        }
    }

    void apply(const double* in, double* out, std::size_t dim) const {
        for (std::size_t j = 0; j < dim; ++j) out[j] = (in[j] - mean[j]) / stddev[j];
    }

    std::vector<double> apply(const std::vector<double>& in) const {
        std::vector<double> out(in.size());
        apply(in.data(), out.data(), in.size());
        return out;
    }
};

}  // namespace sahs
