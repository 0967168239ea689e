#include "ncsoliton/quadrature.hpp"

#include <numbers>

namespace ncsoliton::quadrature {

GaussLegendre::GaussLegendre(int n) : nodes_(n), weights_(n) {
    // Newton iteration on P_n from the Chebyshev-like initial guesses.
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        nodes_[i] = -z;
        nodes_[n - 1 - i] = z;
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights_[i] = w;
        weights_[n - 1 - i] = w;
    }
}

const GaussLegendre& gauss_legendre_64() {
    static const GaussLegendre rule(64);
    return rule;
}

}  // namespace ncsoliton::quadrature
