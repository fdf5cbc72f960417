#pragma once

#include <cstddef>
#include <vector>

namespace sahs {

// Dense row-major matrix, minimal on purpose.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
    double* row(int i) { return data.data() + static_cast<std::size_t>(i) * cols; }
    const double* row(int i) const { return data.data() + static_cast<std::size_t>(i) * cols; }
};

namespace kernels {

// Every kernel has a serial and an OpenMP variant. Both run the same
// per-row routine, so the parallel results are bit-identical to the serial
// ones for any thread count: each output element is written by exactly one
// thread and its inner accumulation order is fixed.
enum class Exec { Serial, Parallel };

// C[m x n] = A[m x k] * B[k x n]
void matmul(const double* a, const double* b, double* c, int m, int k, int n, Exec ex);

// C[m x n] = A[m x k] * B[n x k]^T   (B stored row-major with n rows)
void matmul_nt(const double* a, const double* b, double* c, int m, int k, int n, Exec ex);

// C[k x n] = A[m x k]^T * B[m x n]
void matmul_tn(const double* a, const double* b, double* c, int m, int k, int n, Exec ex);

// mat[i,:] += v for every row i
void add_row_vector(double* mat, const double* v, int rows, int cols, Exec ex);

// out[j] = sum_i mat[i,j]
void col_sum(const double* mat, double* out, int rows, int cols, Exec ex);

// x[i] = tanh(x[i])
void tanh_forward(double* x, std::size_t n, Exec ex);

// grad[i] *= 1 - act[i]^2, where act already holds tanh values
void tanh_backward(const double* act, double* grad, std::size_t n, Exec ex);

// accum = rho*accum + (1-rho)*g^2 ; param -= lr * g / (sqrt(accum) + eps)
void rmsprop_update(double* param, double* accum, const double* grad, std::size_t n,
                    double lr, double rho, double eps, Exec ex);

}  // namespace kernels
}  // namespace sahs
