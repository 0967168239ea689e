#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace ncsoliton::quadrature {

/// n-point Gauss-Legendre rule on [-1, 1].
class GaussLegendre {
public:
    explicit GaussLegendre(int n);

    int order() const { return static_cast<int>(nodes_.size()); }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }

    /// Single panel on [lo, hi].
    template <typename F>
    double integrate(F&& f, double lo, double hi) const {
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            sum += weights_[i] * f(mid + half * nodes_[i]);
        }
        return half * sum;
    }

    /// `panels` equal panels on [lo, hi].
    template <typename F>
    double integrate_panels(F&& f, double lo, double hi, int panels) const {
        const double h = (hi - lo) / panels;
        double sum = 0.0;
        for (int k = 0; k < panels; ++k) {
            sum += integrate(f, lo + k * h, (k + 1 == panels) ? hi : lo + (k + 1) * h);
        }
        return sum;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Shared 64-point rule.
const GaussLegendre& gauss_legendre_64();

struct PanelResult {
    double value = 0.0;
    int panels = 0;  // panels per segment at acceptance
    bool converged = false;
};

/// Composite 64-point Gauss-Legendre over the segments delimited by
/// `breaks` (sorted), doubling the panel count per segment until two
/// successive totals agree to `rel_tol`.
template <typename F>
PanelResult integrate_doubling(F&& f, std::span<const double> breaks, double rel_tol,
                               int max_doublings = 14) {
    const auto& rule = gauss_legendre_64();
    auto total = [&](int panels) {
        double s = 0.0;
        for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
            if (breaks[k + 1] > breaks[k]) {
                s += rule.integrate_panels(f, breaks[k], breaks[k + 1], panels);
            }
        }
        return s;
    };
    PanelResult r;
    int panels = 1;
    double prev = total(panels);
    for (int d = 0; d < max_doublings; ++d) {
        panels *= 2;
        const double next = total(panels);
        r.value = next;
        r.panels = panels;
        if (std::abs(next - prev) <= rel_tol * std::abs(next)) {
            r.converged = true;
            return r;
        }
        prev = next;
    }
    return r;
}

}  // namespace ncsoliton::quadrature
