#include <cassert>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ncsoliton/kernels.hpp"
#include "ncsoliton/specfun.hpp"

namespace ncsoliton::kernels {

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace parallel {

void apply_l0(std::span<const double> v, std::span<double> out) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(v.size());
    assert(out.size() == v.size());
    if (n == 0) return;
    out[0] = v[0] - (n > 1 ? v[1] : 0.0);
#pragma omp parallel for schedule(static) if (n > 4096)
    for (std::ptrdiff_t x = 1; x < n; ++x) {
        const double xd = static_cast<double>(x);
        const double next = (x + 1 < n) ? v[x + 1] : 0.0;
        out[x] = -(xd + 1.0) * next + (2.0 * xd + 1.0) * v[x] - xd * v[x - 1];
    }
}

void psi_profile(double a, std::span<double> out) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t x = 0; x < n; ++x) {
        try {
            out[x] = specfun::laplace_integral(a, static_cast<std::size_t>(x), 1);
        } catch (...) {
#pragma omp critical(ncsoliton_psi_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

void direct_resolvent(std::span<const double> phi, std::span<const double> psi,
                      std::span<const double> v, std::span<double> out) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(v.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t x = 0; x < n; ++x) {
        double s = 0.0;
        for (std::ptrdiff_t y = 0; y < n; ++y) {
            s += (x <= y ? phi[x] * psi[y] : phi[y] * psi[x]) * v[y];
        }
        out[x] = s;
    }
}

void matvec(const ComplexMatrix& m, std::span<const std::complex<double>> v,
            std::span<std::complex<double>> out) {
    const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(m.rows);
#pragma omp parallel for schedule(static) if (m.rows * m.cols > 65536)
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
        std::complex<double> s = 0.0;
        const auto r = m.row(static_cast<std::size_t>(i));
        for (std::size_t j = 0; j < m.cols; ++j) s += r[j] * v[j];
        out[i] = s;
    }
}

}  // namespace parallel
}  // namespace ncsoliton::kernels
