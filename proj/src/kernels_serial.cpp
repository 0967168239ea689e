#include <cassert>

#include "ncsoliton/kernels.hpp"
#include "ncsoliton/specfun.hpp"

namespace ncsoliton::kernels::serial {

void apply_l0(std::span<const double> v, std::span<double> out) {
    const std::size_t n = v.size();
    assert(out.size() == n);
    if (n == 0) return;
    out[0] = v[0] - (n > 1 ? v[1] : 0.0);
    for (std::size_t x = 1; x < n; ++x) {
        const double xd = static_cast<double>(x);
        const double next = (x + 1 < n) ? v[x + 1] : 0.0;
        out[x] = -(xd + 1.0) * next + (2.0 * xd + 1.0) * v[x] - xd * v[x - 1];
    }
}

void psi_profile(double a, std::span<double> out) {
    for (std::size_t x = 0; x < out.size(); ++x) out[x] = specfun::laplace_integral(a, x, 1);
}

void direct_resolvent(std::span<const double> phi, std::span<const double> psi,
                      std::span<const double> v, std::span<double> out) {
    const std::size_t n = v.size();
    for (std::size_t x = 0; x < n; ++x) {
        double s = 0.0;
        for (std::size_t y = 0; y < n; ++y) {
            s += (x <= y ? phi[x] * psi[y] : phi[y] * psi[x]) * v[y];
        }
        out[x] = s;
    }
}

void matvec(const ComplexMatrix& m, std::span<const std::complex<double>> v,
            std::span<std::complex<double>> out) {
    for (std::size_t i = 0; i < m.rows; ++i) {
        std::complex<double> s = 0.0;
        const auto r = m.row(i);
        for (std::size_t j = 0; j < m.cols; ++j) s += r[j] * v[j];
        out[i] = s;
    }
}

}  // namespace ncsoliton::kernels::serial
