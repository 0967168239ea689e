#pragma once

// Data-parallel inner loops. Every kernel exists twice with the same
// signature: `serial` is the reference used by the tests, `parallel` is the
// OpenMP version used by the library. Results agree to round-off (the
// parallel loops split work by output index, never by reduction order,
// except where noted).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ncsoliton::kernels {

template <typename T>
struct RowMajorMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<T> data;

    RowMajorMatrix() = default;
    RowMajorMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    T& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    std::span<const T> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
};

using ComplexMatrix = RowMajorMatrix<std::complex<double>>;

#define NCSOLITON_KERNEL_DECLS                                                                   \
    /* out = L0 v on sites 0..X with v(X+1) = 0. */                                              \
    void apply_l0(std::span<const double> v, std::span<double> out);                             \
    /* out[x] = psi_{-a}(x) by per-site quadrature. */                                           \
    void psi_profile(double a, std::span<double> out);                                           \
    /* out = R v with R(x1,x2) = phi(min) psi(max); O(X^2). */                                   \
    void direct_resolvent(std::span<const double> phi, std::span<const double> psi,              \
                          std::span<const double> v, std::span<double> out);                     \
    /* out = m v. */                                                                             \
    void matvec(const ComplexMatrix& m, std::span<const std::complex<double>> v,                 \
                std::span<std::complex<double>> out);

namespace serial {
NCSOLITON_KERNEL_DECLS
}  // namespace serial

namespace parallel {
NCSOLITON_KERNEL_DECLS
}  // namespace parallel

#undef NCSOLITON_KERNEL_DECLS

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int max_threads();

}  // namespace ncsoliton::kernels
