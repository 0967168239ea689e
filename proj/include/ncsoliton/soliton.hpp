#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ncsoliton/lattice_vector.hpp"
#include "ncsoliton/operator.hpp"

namespace ncsoliton {

/// How many lattice sites the construction keeps.
struct TruncationPolicy {
    std::optional<std::size_t> fixed;  // --xmax; automatic when empty
    std::size_t minimum = 128;         // keeps a usable decay-fit window
    double psi_relative = 1e-16;       // psi_tail_asymptote(a, X) < psi_relative * psi(0)
};

/// Knobs of the ground-state construction for L0 u = -a u + u^p.
struct SolitonParams {
    double a = 0.0;  // spectral shift, written mu once above the threshold
    int p = 3;
    double iter_tol = 1e-12;
    double root_tol = 1e-12;
    int max_iters = 10000;
    TruncationPolicy truncation;

    /// Throws DomainError naming the violated precondition.
    void validate() const;
};

/// Regime markers. a1 is the smallest a >= a0 where s_-(a) < b_-(a) holds
/// (a sufficient condition for q(a,b) < b), so it may overestimate; mu_star
/// is the smallest mu >= a3 with s_-(mu) < b_-(mu) and is an upper bound on
/// the exact threshold.
struct Thresholds {
    int p = 3;
    double a0 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double mu_star = 0.0;
};

/// The two fixed points of h(a, s) = r(a)/a + s^p/a, r(a) = (a+1)^{1/(p-1)}.
struct BoundSequence {
    double a = 0.0;
    int p = 3;
    double s_minus = 0.0;
    double s_plus = 0.0;
    double s_min = 0.0;  // (a/p)^{1/(p-1)}, the minimizer of g = h - s
};

double majorant_map(double a, int p, double s);  // h(a, s)
double majorant_gap(double a, int p, double s);  // g(a, s) = h(a, s) - s
double majorant_min_gap(double a, int p);        // g(a, s_min(a))
double boundary_lower(double a, int p);          // b_-(a) = a^{1/(p-1)}
double boundary_upper(double a, int p);          // b_+(a) = (a+1)^{1/(p-1)}

/// Roots s_- < s_min < s_+ of g(a, .) by bisection; NoTwoRoots when
/// g(a, s_min(a)) >= 0, i.e. a <= a0.
BoundSequence bound_fixed_points(double a, int p, double tol = 1e-15);

Thresholds compute_thresholds(int p);

struct IterationDiagnostics {
    int iterations = 0;
    std::vector<double> l1_norms;     // ||u_n||_1 for n = 0..iterations
    std::vector<double> majorant;     // s_n(a), s_0 = 0
    std::vector<double> step_l1;      // ||u_{n+1} - u_n||_1
    std::vector<double> step_sup;     // ||u_{n+1} - u_n||_inf
    double min_increment = 0.0;       // min over n, x in [1, X] of u_{n+1}(x) - u_n(x)
    bool strictly_increasing = true;  // every such increment > 0
    bool majorant_respected = true;   // ||u_n||_1 <= s_n(a) at every step
};

struct TailSolution {
    LatticeVector u;  // u_*(a, b), with u(0) = 0
    IterationDiagnostics diagnostics;
};

/// u_{n+1} = psi_hat b^p + P R_{-a} u_n^p from u_0 = 0, until both the l1 and
/// sup step sizes fall below iter_tol. NonConvergence after max_iters;
/// RegimeViolation once ||u_n||_1 exceeds s_min(a).
TailSolution tail_iteration(const SolitonParams& params, double b, const ResolventKernel& kernel);

/// f_*(a, b) = b^p - (a+1) b + q(a, b) with q(a, b) = u_*(a, b; 1).
double boundary_function(const SolitonParams& params, double b, const ResolventKernel& kernel);

/// Unique root of f_* in [b_-(a), b_+(a)] by bisection, |f_*| <= root_tol.
/// BracketFailure when the end values do not straddle zero.
double solve_boundary(const SolitonParams& params, const ResolventKernel& kernel);

struct SolitonResult {
    LatticeVector alpha;  // tail_l1 holds the certified l1 mass beyond X
    double b_star = 0.0;
    double q_at_root = 0.0;
    double s_star = 0.0;  // s_-(mu)
    int iterations_used = 0;
    double residual_sup = 0.0;  // ||L0 alpha + mu alpha - alpha^p||_inf
    SolitonParams params;
    Thresholds thresholds;
    IterationDiagnostics diagnostics;  // of the final tail solve at b_star
};

/// Sites kept for a given parameter set.
std::size_t choose_truncation(const SolitonParams& params);

/// L0 u + a u - u^p on sites 0..X (u(X+1) = 0).
LatticeVector soliton_residual(const LatticeVector& u, double a, int p);

/// Certified bound on sum_{x>X} u(x) for a positive, decreasing solution:
/// (X+1) u(X) / (a - u(X)^{p-1}). Infinite when the bound does not apply.
double soliton_tail_bound(const LatticeVector& u, double a, int p);

/// Builds alpha_mu and checks its existence properties before returning.
/// RegimeViolation when mu <= mu_star(p).
SolitonResult construct_soliton(const SolitonParams& params);

/// As construct_soliton, but reuses precomputed thresholds.
SolitonResult construct_soliton(const SolitonParams& params, const Thresholds& thresholds);

/// Independent constructions over a grid of mu (OpenMP over grid points).
std::vector<SolitonResult> construct_sweep(const SolitonParams& base, const std::vector<double>& mus);

}  // namespace ncsoliton
