#include "ncsoliton/operator.hpp"

#include <cmath>
#include <string>

#include "ncsoliton/error.hpp"
#include "ncsoliton/kernels.hpp"

namespace ncsoliton {

LatticeVector apply_l0(const LatticeVector& v) {
    LatticeVector out(v.truncation());
    kernels::parallel::apply_l0(v.view(), out.view());
    return out;
}

double boundary_leakage(const LatticeVector& v) {
    if (v.values.empty()) return 0.0;
    return static_cast<double>(v.truncation() + 1) * std::abs(v.values.back());
}

ResolventKernel build_kernel(double a, std::size_t truncation) {
    if (!(a > 0.0)) throw DomainError("build_kernel: a must be positive");
    if (truncation < 1) throw DomainError("build_kernel: truncation must be >= 1");
    ResolventKernel k;
    k.a_ = a;
    k.truncation_ = truncation;
    const std::size_t n = truncation + 2;  // sites 0..X+1

    k.log_phi_ = specfun::laguerre_log_phi(a, n - 1);
    k.phi_ = specfun::EigenfunctionProfile{specfun::ProfileKind::phi, a, std::vector<double>(n)};
    for (std::size_t x = 0; x < n; ++x) {
        k.phi_.values[x] = std::exp(k.log_phi_[x]);
        if (!std::isfinite(k.phi_.values[x])) {
            throw OverflowError("build_kernel: phi_{-a} overflows at x=" + std::to_string(x) +
                                " for a=" + std::to_string(a) + "; reduce the truncation");
        }
    }
    k.psi_ = *specfun::cached_resolvent_psi(a, n - 1);
    for (std::size_t x = 0; x < n; ++x) {
        if (!(k.psi_.values[x] > 0.0)) {
            throw OverflowError("build_kernel: psi_{-a} underflows at x=" + std::to_string(x) +
                                " for a=" + std::to_string(a) + "; reduce the truncation");
        }
    }

    k.rho_.resize(n);
    k.decay_.resize(n - 1);
    for (std::size_t x = 0; x < n; ++x) k.rho_[x] = k.phi_.values[x] * k.psi_.values[x];
    for (std::size_t x = 0; x + 1 < n; ++x) k.decay_[x] = std::exp(k.log_phi_[x] - k.log_phi_[x + 1]);

    for (std::size_t x = 0; x <= truncation; ++x) {
        const double defect = std::abs(k.wronskian(x) - 1.0);
        k.max_wronskian_defect_ = std::max(k.max_wronskian_defect_, defect);
        if (!(defect <= ResolventKernel::kWronskianTolerance)) {
            throw Error("build_kernel: Wronskian normalization broken at x=" + std::to_string(x) +
                        " (a=" + std::to_string(a) + ", defect " + std::to_string(defect) + ")");
        }
    }
    k.psi_tail_estimate_ = specfun::psi_tail_asymptote_integral(a, static_cast<double>(truncation));
    return k;
}

double ResolventKernel::entry(std::size_t x1, std::size_t x2) const {
    const std::size_t lo = std::min(x1, x2);
    const std::size_t hi = std::max(x1, x2);
    // phi(lo) psi(hi) = rho(hi) exp(g(lo) - g(hi))
    return rho_.at(hi) * std::exp(log_phi_[lo] - log_phi_[hi]);
}

double ResolventKernel::wronskian(std::size_t x) const {
    const double xd = static_cast<double>(x);
    // phi(x+1) psi(x) = rho(x) / decay(x);  phi(x) psi(x+1) = rho(x+1) decay(x)
    return (xd + 1.0) * (rho_.at(x) / decay_.at(x) - rho_.at(x + 1) * decay_.at(x));
}

double ResolventKernel::psi_tail_l1() const {
    const std::size_t X = truncation_;
    return static_cast<double>(X + 1) * (psi_.values[X] - psi_.values[X + 1]) / a_;
}

LatticeVector apply_resolvent(const ResolventKernel& k, const LatticeVector& v) {
    const std::size_t X = k.truncation_;
    if (v.truncation() != X || v.values.empty()) {
        throw DomainError("apply_resolvent: vector truncation " + std::to_string(v.truncation()) +
                          " does not match kernel truncation " + std::to_string(X));
    }
    LatticeVector out(X);
    // Forward: A(x) = sum_{y<=x} exp(g(y) - g(x)) v(y), so psi(x) sum phi v = rho(x) A(x).
    double fwd = 0.0;
    double fwd_abs = 0.0;
    for (std::size_t x = 0; x <= X; ++x) {
        if (x > 0) {
            fwd *= k.decay_[x - 1];
            fwd_abs *= k.decay_[x - 1];
        }
        fwd += v[x];
        fwd_abs += std::abs(v[x]);
        out[x] = k.rho_[x] * fwd;
    }
    // Backward: B(x) = sum_{y>x} rho(y) exp(g(x) - g(y)) v(y) = phi(x) sum_{y>x} psi(y) v(y).
    double bwd = 0.0;
    for (std::size_t x = X + 1; x-- > 0;) {
        out[x] += bwd;
        if (x > 0) bwd = k.decay_[x - 1] * (k.rho_[x] * v[x] + bwd);
    }
    // Mass beyond X: sum_{x>X} psi(x) * sum_y phi(y)|v(y)|, with the psi tail exact.
    const double tail_psi_scaled =
        static_cast<double>(X + 1) * (k.rho_[X] - k.decay_[X] * k.rho_[X + 1]) / k.a_;
    out.tail_l1 = fwd_abs * tail_psi_scaled;
    return out;
}

LatticeVector projected_resolvent(const ResolventKernel& k, const LatticeVector& v) {
    return project_off_origin(apply_resolvent(k, v));
}

Eigen::MatrixXd SymmetricTridiagonal::dense() const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diagonal[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        m(i, i + 1) = off_diagonal[static_cast<std::size_t>(i)];
        m(i + 1, i) = off_diagonal[static_cast<std::size_t>(i)];
    }
    return m;
}

std::vector<double> SymmetricTridiagonal::multiply(std::span<const double> v) const {
    const std::size_t n = size();
    if (v.size() != n) throw DomainError("SymmetricTridiagonal::multiply: size mismatch");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = diagonal[i] * v[i];
        if (i > 0) s += off_diagonal[i - 1] * v[i - 1];
        if (i + 1 < n) s += off_diagonal[i] * v[i + 1];
        out[i] = s;
    }
    return out;
}

SymmetricTridiagonal truncated_matrix(std::size_t n) {
    if (n < 2) throw DomainError("truncated_matrix: need at least 2 sites");
    SymmetricTridiagonal m;
    m.diagonal.resize(n);
    m.off_diagonal.resize(n - 1);
    for (std::size_t x = 0; x < n; ++x) m.diagonal[x] = 2.0 * static_cast<double>(x) + 1.0;
    for (std::size_t x = 0; x + 1 < n; ++x) m.off_diagonal[x] = -(static_cast<double>(x) + 1.0);
    return m;
}

}  // namespace ncsoliton
