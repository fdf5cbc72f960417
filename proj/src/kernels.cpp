#include "sahs/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace sahs::kernels {

namespace {

// Work below this many flops is not worth a parallel region.
constexpr long long kParallelCutoff = 16384;

// noinline keeps one compiled copy of each row routine, so the serial and
// parallel drivers produce bit-identical output no matter how the compiler
// contracts or vectorizes the surrounding loops.
#define SAHS_NOINLINE __attribute__((noinline))

SAHS_NOINLINE void matmul_row(const double* arow, const double* b, double* crow, int k, int n) {
    std::fill(crow, crow + n, 0.0);
    for (int kk = 0; kk < k; ++kk) {
        const double av = arow[kk];
        const double* brow = b + static_cast<std::size_t>(kk) * n;
        for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
}

SAHS_NOINLINE void matmul_nt_row(const double* arow, const double* b, double* crow, int k, int n) {
    // four fixed accumulators break the serial dependence of the dot
    // product; the summation order stays deterministic
    for (int j = 0; j < n; ++j) {
        const double* brow = b + static_cast<std::size_t>(j) * k;
        double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
        int kk = 0;
        for (; kk + 4 <= k; kk += 4) {
            a0 += arow[kk] * brow[kk];
            a1 += arow[kk + 1] * brow[kk + 1];
            a2 += arow[kk + 2] * brow[kk + 2];
            a3 += arow[kk + 3] * brow[kk + 3];
        }
        double acc = (a0 + a1) + (a2 + a3);
        for (; kk < k; ++kk) acc += arow[kk] * brow[kk];
        crow[j] = acc;
    }
}

// row r of C[k x n] = sum_i A[i,r] * B[i,:]
SAHS_NOINLINE void matmul_tn_row(const double* a, const double* b, double* crow, int m, int k, int n,
                          int r) {
    std::fill(crow, crow + n, 0.0);
    for (int i = 0; i < m; ++i) {
        const double av = a[static_cast<std::size_t>(i) * k + r];
        const double* brow = b + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
}

}  // namespace

void matmul(const double* a, const double* b, double* c, int m, int k, int n, Exec ex) {
    const long long work = 1LL * m * k * n;
    if (ex == Exec::Parallel && work >= kParallelCutoff) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < m; ++i)
            matmul_row(a + static_cast<std::size_t>(i) * k, b, c + static_cast<std::size_t>(i) * n,
                       k, n);
    } else {
        for (int i = 0; i < m; ++i)
            matmul_row(a + static_cast<std::size_t>(i) * k, b, c + static_cast<std::size_t>(i) * n,
                       k, n);
    }
}

void matmul_nt(const double* a, const double* b, double* c, int m, int k, int n, Exec ex) {
    const long long work = 1LL * m * k * n;
    if (ex == Exec::Parallel && work >= kParallelCutoff) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < m; ++i)
            matmul_nt_row(a + static_cast<std::size_t>(i) * k, b,
                          c + static_cast<std::size_t>(i) * n, k, n);
    } else {
        for (int i = 0; i < m; ++i)
            matmul_nt_row(a + static_cast<std::size_t>(i) * k, b,
                          c + static_cast<std::size_t>(i) * n, k, n);
    }
}

void matmul_tn(const double* a, const double* b, double* c, int m, int k, int n, Exec ex) {
    const long long work = 1LL * m * k * n;
    if (ex == Exec::Parallel && work >= kParallelCutoff) {
#pragma omp parallel for schedule(static)
        for (int r = 0; r < k; ++r)
            matmul_tn_row(a, b, c + static_cast<std::size_t>(r) * n, m, k, n, r);
    } else {
        for (int r = 0; r < k; ++r)
            matmul_tn_row(a, b, c + static_cast<std::size_t>(r) * n, m, k, n, r);
    }
}

void add_row_vector(double* mat, const double* v, int rows, int cols, Exec ex) {
    const long long work = 1LL * rows * cols;
    if (ex == Exec::Parallel && work >= kParallelCutoff) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < rows; ++i) {
            double* r = mat + static_cast<std::size_t>(i) * cols;
            for (int j = 0; j < cols; ++j) r[j] += v[j];
        }
    } else {
        for (int i = 0; i < rows; ++i) {
            double* r = mat + static_cast<std::size_t>(i) * cols;
            for (int j = 0; j < cols; ++j) r[j] += v[j];
        }
    }
}

void col_sum(const double* mat, double* out, int rows, int cols, Exec ex) {
    const long long work = 1LL * rows * cols;
    if (ex == Exec::Parallel && work >= kParallelCutoff) {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < cols; ++j) {
            double acc = 0.0;
            for (int i = 0; i < rows; ++i) acc += mat[static_cast<std::size_t>(i) * cols + j];
            out[j] = acc;
        }
    } else {
        for (int j = 0; j < cols; ++j) {
            double acc = 0.0;
            for (int i = 0; i < rows; ++i) acc += mat[static_cast<std::size_t>(i) * cols + j];
            out[j] = acc;
        }
    }
}

void tanh_forward(double* x, std::size_t n, Exec ex) {
    if (ex == Exec::Parallel && static_cast<long long>(n) >= kParallelCutoff) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i) x[i] = std::tanh(x[i]);
    } else {
        for (std::size_t i = 0; i < n; ++i) x[i] = std::tanh(x[i]);
    }
}

void tanh_backward(const double* act, double* grad, std::size_t n, Exec ex) {
    if (ex == Exec::Parallel && static_cast<long long>(n) >= kParallelCutoff) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            grad[i] *= 1.0 - act[i] * act[i];
    } else {
        for (std::size_t i = 0; i < n; ++i) grad[i] *= 1.0 - act[i] * act[i];
    }
}

void rmsprop_update(double* param, double* accum, const double* grad, std::size_t n, double lr,
                    double rho, double eps, Exec ex) {
    if (ex == Exec::Parallel && static_cast<long long>(n) >= kParallelCutoff) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            accum[i] = rho * accum[i] + (1.0 - rho) * grad[i] * grad[i];
            param[i] -= lr * grad[i] / (std::sqrt(accum[i]) + eps);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            accum[i] = rho * accum[i] + (1.0 - rho) * grad[i] * grad[i];
            param[i] -= lr * grad[i] / (std::sqrt(accum[i]) + eps);
        }
    }
}

}  // namespace sahs::kernels
