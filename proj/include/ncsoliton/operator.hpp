#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ncsoliton/lattice_vector.hpp"
#include "ncsoliton/specfun.hpp"

namespace ncsoliton {

/// L0 v on sites 0..X, reading v(X+1) = 0 at the last row:
///   (L0 v)(0) = v(0) - v(1)
///   (L0 v)(x) = -(x+1) v(x+1) + (2x+1) v(x) - x v(x-1),  x > 0.
LatticeVector apply_l0(const LatticeVector& v);

/// (X+1)|v(X)|: the size of the term the last row of apply_l0 would pick
/// up from site X+1 if v did not vanish there. Rows 0..X-1 are exact.
double boundary_leakage(const LatticeVector& v);

/// Sturm-Liouville resolvent of L0 at z = -a, R(x1, x2) = phi(min) psi(max),
/// with phi = phi_{-a}, psi = psi_{-a}, normalized so that
/// (x+1)[phi(x+1) psi(x) - phi(x) psi(x+1)] = 1 for every x.
///
/// Applications work with log phi and the bounded products phi(x) psi(x),
/// so kernel entries are never formed from an overflowing phi.
class ResolventKernel {
public:
    static constexpr double kWronskianTolerance = 1e-10;

    double a() const { return a_; }
    /// Last lattice site X of the vectors this kernel acts on.
    std::size_t truncation() const { return truncation_; }

    /// phi_{-a} on 0..X+1.
    const specfun::EigenfunctionProfile& phi() const { return phi_; }
    /// psi_{-a} on 0..X+1.
    const specfun::EigenfunctionProfile& psi() const { return psi_; }
    const std::vector<double>& log_phi() const { return log_phi_; }

    /// R_{-a}(x1, x2) for x1, x2 <= X + 1.
    double entry(std::size_t x1, std::size_t x2) const;

    /// (x+1)[phi(x+1) psi(x) - phi(x) psi(x+1)], x <= X.
    double wronskian(std::size_t x) const;
    double max_wronskian_defect() const { return max_wronskian_defect_; }

    /// Exact l1 mass of psi beyond X: (X+1)(psi(X) - psi(X+1)) / a.
    double psi_tail_l1() const;
    /// psi_tail_asymptote_integral(a, X): the closed-form estimate of the same mass.
    double psi_tail_estimate() const { return psi_tail_estimate_; }

private:
    friend ResolventKernel build_kernel(double a, std::size_t truncation);
    friend LatticeVector apply_resolvent(const ResolventKernel& k, const LatticeVector& v);

    double a_ = 0.0;
    std::size_t truncation_ = 0;
    specfun::EigenfunctionProfile phi_;
    specfun::EigenfunctionProfile psi_;
    std::vector<double> log_phi_;
    std::vector<double> rho_;    // phi(x) psi(x)
    std::vector<double> decay_;  // phi(x) / phi(x+1)
    double max_wronskian_defect_ = 0.0;
    double psi_tail_estimate_ = 0.0;
};

/// Builds the kernel on 0..X and checks the Wronskian normalization at every
/// site; throws Error if it fails anywhere.
ResolventKernel build_kernel(double a, std::size_t truncation);

/// R_{-a} v in O(X):
///   (R v)(x) = psi(x) sum_{y<=x} phi(y) v(y) + phi(x) sum_{y>x} psi(y) v(y).
/// v is taken as zero beyond X; the result is the exact infinite-lattice
/// resolvent at sites 0..X, and its `tail_l1` bounds the l1 mass of R|v|
/// beyond X.
LatticeVector apply_resolvent(const ResolventKernel& k, const LatticeVector& v);

/// P R_{-a} v: apply_resolvent with site 0 zeroed.
LatticeVector projected_resolvent(const ResolventKernel& k, const LatticeVector& v);

/// Symmetric tridiagonal truncation of L0 to sites 0..n-1.
struct SymmetricTridiagonal {
    std::vector<double> diagonal;
    std::vector<double> off_diagonal;  // entry x couples x and x+1

    std::size_t size() const { return diagonal.size(); }
    Eigen::MatrixXd dense() const;
    std::vector<double> multiply(std::span<const double> v) const;
};

/// Diagonal 2x+1, off-diagonal -(x+1). Requires n >= 2.
SymmetricTridiagonal truncated_matrix(std::size_t n);

}  // namespace ncsoliton
