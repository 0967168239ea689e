#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ncsoliton/soliton.hpp"

namespace ncsoliton {

/// One named property check. `claim` quotes the property being tested.
struct Check {
    std::string name;
    std::string claim;
    bool pass = false;
    double measured = 0.0;
    double bound = 0.0;
    double tolerance = 0.0;
};

/// Least-squares fit of log u(x) + (1/2) log x = log c0 - c1 sqrt(x).
struct DecayFit {
    double c0_hat = 0.0;
    double c1_hat = 0.0;
    double fit_residual = 0.0;  // ||y - A c||_2 / ||y||_2
    std::size_t window_lo = 0;
    std::size_t window_hi = 0;
};

/// Quantities of the spatial decay envelope.
struct DecayAnalysis {
    DecayFit fit;
    std::size_t x_star = 0;            // smallest x with alpha(x)^{p-1} < mu/2
    double q_bar = 0.0;                // sup_{x > x_star} alpha(x)^{p-1}
    double envelope_constant = 0.0;    // sum_{y <= x_star} alpha(y)^p phi_{-mu+q}(y)
    double envelope_constant_literal = 0.0;  // sum_{y <= x_star} alpha(y) phi_{-mu+q}(y)
    double envelope_ratio = 0.0;       // max_{x > x_star} alpha(x) / (c psi_{-mu+q}(x))
    double envelope_ratio_literal = 0.0;
    double c1_lower = 0.0;             // fitter applied to psi_{-mu+q}
    double c1_upper = 0.0;             // fitter applied to psi_{-(mu+eps)}
    double c1_closed_lower = 0.0;      // 2 sqrt(mu - q)
    double c1_closed_upper = 0.0;      // 2 sqrt(mu + eps)
    double eps = 0.0;
};

struct VerificationReport {
    double mu = 0.0;
    int p = 3;
    std::size_t truncation = 0;
    double iter_tol = 0.0;
    double root_tol = 0.0;
    std::vector<Check> checks;
    std::optional<DecayAnalysis> decay;

    void append(Check c) { checks.push_back(std::move(c)); }
    void append(const std::vector<Check>& cs) { checks.insert(checks.end(), cs.begin(), cs.end()); }
    bool passed() const;
};

/// Positivity, strict decrease and certified l1 tail of alpha.
std::vector<Check> check_existence(const SolitonResult& result);

/// ||L0 alpha + mu alpha - alpha^p||_inf <= 10 (iter_tol + root_tol).
Check check_residual(const SolitonResult& result);

/// b_star strictly inside (mu^{1/(p-1)}, (mu+1)^{1/(p-1)}).
Check check_bracket(const SolitonResult& result);

/// Inline monotonicity of the tail iteration and the l1 majorant.
std::vector<Check> check_iteration(const SolitonResult& result);

/// l1 mass of alpha off the origin; bounded by s_-(mu) and, for p >= 3,
/// scaled by mu^{(p-2)/(p-1)} close to one. UnsupportedP for p = 2.
std::vector<Check> check_l1_bound(const SolitonResult& result);

struct L1BoundSweep {
    std::vector<double> mu;
    std::vector<double> l1_hat;
    std::vector<double> s_minus;
    std::vector<double> ratio;      // l1_hat * mu^{(p-2)/(p-1)}
    double fitted_constant = 0.0;   // smallest C with ratio <= 1 + C/mu on the grid
    std::vector<Check> checks;
};

/// As check_l1_bound along a grid, sorted by mu. The cap on the O-term
/// constant is `cap` (ratio <= 1 + cap/mu).
L1BoundSweep check_l1_bound_sweep(std::span<const SolitonResult> results, double cap = 5.0);

/// Summed difference form u(x+1) - u(x) = (x+1)^{-1} sum_{y<=x} V(u(y)),
/// V(r) = mu r - r^p, and the sign structure behind monotone decrease.
std::vector<Check> check_monotone_mechanism(const SolitonResult& result);

DecayFit fit_decay(std::span<const double> profile, std::size_t lo, std::size_t hi);

/// Window [X/4, 3X/4]. FitWindowTooSmall below 8 sites or when the profile
/// is not positive on the window.
DecayFit fit_decay(const SolitonResult& result);

DecayAnalysis analyze_decay(const SolitonResult& result);

/// Envelope and decay-rate checks; fills `analysis` when given.
std::vector<Check> check_decay(const SolitonResult& result, DecayAnalysis* analysis = nullptr);

/// Everything above that applies to a single result.
VerificationReport verify_soliton(const SolitonResult& result);

/// Fixed-width table with one line per check.
std::string format_table(const VerificationReport& report);

}  // namespace ncsoliton
