#include "veracity/nn/kernels.hpp"

#include "veracity/error.hpp"

namespace veracity::nn::kernels {

namespace {

void check(bool ok, const char* op, const Tensor& a, const Tensor& b) {
    if (!ok) throw ShapeError(std::string(op) + ": incompatible shapes " + shape_string(a) + " and " + shape_string(b));
}

long work(std::size_t m, std::size_t n, std::size_t k) { return static_cast<long>(m * n * k); }

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
    check(a.cols() == b.rows(), "matmul", a, b);
    const std::size_t m = a.rows(), n = b.cols(), k = a.cols();
    Tensor c(m, n);
    const auto rows = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static) if (work(m, n, k) > kParallelThreshold)
    for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        double* out = &c(i, 0);
        for (std::size_t p = 0; p < k; ++p) {
            const double av = a(i, p);
            const double* br = b.row(p).data();
            for (std::size_t j = 0; j < n; ++j) out[j] += av * br[j];
        }
    }
    return c;
}

Tensor matmul_tn(const Tensor& a, const Tensor& b) {
    check(a.rows() == b.rows(), "matmul_tn", a, b);
    const std::size_t m = a.cols(), n = b.cols(), k = a.rows();
    Tensor c(m, n);
    const auto rows = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static) if (work(m, n, k) > kParallelThreshold)
    for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        double* out = &c(i, 0);
        for (std::size_t p = 0; p < k; ++p) {
            const double av = a(p, i);
            const double* br = b.row(p).data();
            for (std::size_t j = 0; j < n; ++j) out[j] += av * br[j];
        }
    }
    return c;
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
    check(a.cols() == b.cols(), "matmul_nt", a, b);
    const std::size_t m = a.rows(), n = b.rows(), k = a.cols();
    Tensor c(m, n);
    const auto rows = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static) if (work(m, n, k) > kParallelThreshold)
    for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const double* ar = a.row(i).data();
        for (std::size_t j = 0; j < n; ++j) {
            const double* br = b.row(j).data();
            double s = 0.0;
            for (std::size_t p = 0; p < k; ++p) s += ar[p] * br[p];
            c(i, j) = s;
        }
    }
    return c;
}

namespace reference {

Tensor matmul(const Tensor& a, const Tensor& b) {
    check(a.cols() == b.rows(), "matmul", a, b);
    Tensor c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (std::size_t p = 0; p < a.cols(); ++p) s += a(i, p) * b(p, j);
            c(i, j) = s;
        }
    }
    return c;
}

Tensor matmul_tn(const Tensor& a, const Tensor& b) {
    check(a.rows() == b.rows(), "matmul_tn", a, b);
    Tensor c(a.cols(), b.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (std::size_t p = 0; p < a.rows(); ++p) s += a(p, i) * b(p, j);
            c(i, j) = s;
        }
    }
    return c;
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
    check(a.cols() == b.cols(), "matmul_nt", a, b);
    Tensor c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.rows(); ++j) {
            double s = 0.0;
            for (std::size_t p = 0; p < a.cols(); ++p) s += a(i, p) * b(j, p);
            c(i, j) = s;
        }
    }
    return c;
}

}  // namespace reference

}  // namespace veracity::nn::kernels
