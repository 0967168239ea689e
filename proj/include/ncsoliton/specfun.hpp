#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace ncsoliton::specfun {

/// e^a E_1(a) for a > 0: power series below 1, continued fraction above.
double scaled_e1(double a);

/// The integral I(a, x, p) = int_0^1 s^x (1-s)^(p-2) exp(-a s/(1-s)) ds.
///
/// After t = 1/(1-s) this is e^a int_1^inf e^{-at} t^{-p} (1 - 1/t)^x dt, so
/// I(a, 0, p) = e^a E_p(a) and I(a, x, 1) = psi_{-a}(x). All integrands are
/// positive, so no cancellation occurs.
double laplace_integral(double a, std::size_t x, int p, double rel_tol = 1e-12);

/// e^a E_p(a) by direct quadrature.
double scaled_exp_integral_quadrature(int p, double a);

/// Generalized exponential integral E_p(a) = int_1^inf e^{-at} t^{-p} dt.
double exp_integral(int p, double a);

/// e^a E_p(a), free of the e^{-a} underflow.
double scaled_exp_integral(int p, double a);

/// E_1(a), ..., E_length(a) for a fixed a.
///
/// Built from E_1 by the upward recurrence n E_{n+1} = e^{-a} - a E_n, with a
/// running estimate of the propagated relative error; any index where that
/// estimate would exceed `kRecurrenceGuard` is recomputed by quadrature.
class ExpIntegralTable {
public:
    static constexpr double kRecurrenceGuard = 1e-13;

    ExpIntegralTable(double a, std::size_t length);

    double a() const { return a_; }
    std::size_t length() const { return scaled_.size(); }

    /// E_n(a), n = 1..length.
    double value(int n) const;
    /// e^a E_n(a).
    double scaled(int n) const { return scaled_.at(static_cast<std::size_t>(n - 1)); }

    /// Entry k holds E_{k+1}(a).
    std::vector<double> values() const;
    std::span<const double> scaled_values() const { return scaled_; }

    /// Indices recomputed by quadrature because the recurrence lost precision.
    std::span<const int> quadrature_fallbacks() const { return fallbacks_; }

private:
    double a_;
    std::vector<double> scaled_;
    std::vector<int> fallbacks_;
};

enum class ProfileKind { phi, psi };

/// A generalized eigenfunction or resolvent vector sampled on x = 0..x_max.
struct EigenfunctionProfile {
    ProfileKind kind = ProfileKind::phi;
    double a = 0.0;
    std::vector<double> values;

    std::size_t length() const { return values.size(); }
    double operator[](std::size_t x) const { return values[x]; }
};

/// phi_{-a}(x) for 0 <= x <= x_max via the forward three-term recurrence
/// (x+1) phi(x+1) = (2x+1+a) phi(x) - x phi(x-1), phi(0) = 1.
/// Throws OverflowError once phi leaves the double range.
EigenfunctionProfile laguerre_phi(double a, std::size_t x_max);

/// log phi_{-a}(x) via the ratio form of the same recurrence; never overflows.
std::vector<double> laguerre_log_phi(double a, std::size_t x_max);

/// psi_{-a}(x) = (R_{-a} chi_0)(x) by per-site quadrature of the positive
/// integral representation (OpenMP across sites).
EigenfunctionProfile resolvent_psi(double a, std::size_t x_max);

/// psi_{-a}(x) by backward (Miller) recurrence normalized to psi(0) = e^a E_1(a).
EigenfunctionProfile resolvent_psi_backward(double a, std::size_t x_max);

/// Cached resolvent_psi; profiles are immutable and shared.
std::shared_ptr<const EigenfunctionProfile> cached_resolvent_psi(double a, std::size_t x_max);

/// Closed large-x form e^{a/2} sqrt(pi) (a x)^{-1/4} exp(-2 sqrt(a x)).
double psi_tail_asymptote(double a, double x);

/// Integral of psi_tail_asymptote over [x, inf); estimate of sum_{y > x} psi(y).
double psi_tail_asymptote_integral(double a, double x);

/// Smallest X >= 1 with psi_tail_asymptote(a, X) < rel * psi_{-a}(0).
std::size_t asymptotic_truncation(double a, double rel = 1e-16);

}  // namespace ncsoliton::specfun
