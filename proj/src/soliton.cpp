#include "ncsoliton/soliton.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <string>

#include "ncsoliton/error.hpp"
#include "ncsoliton/specfun.hpp"
#include "ncsoliton/verify.hpp"

namespace ncsoliton {

namespace {

double inv_pm1(int p) { return 1.0 / static_cast<double>(p - 1); }

double ipow(double v, int p) {
    double r = 1.0;
    for (int k = 0; k < p; ++k) r *= v;
    return r;
}

std::string fmt_num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// Smallest a >= start (up to bisection precision) from which
// s_-(a) < b_-(a) holds; the predicate is monotone in a.
double first_satisfying(double start, int p) {
    auto holds = [p](double a) {
        try {
            return bound_fixed_points(a, p).s_minus < boundary_lower(a, p);
        } catch (const NoTwoRoots&) {
            return false;
        }
    };
    if (holds(start * (1.0 + 1e-9))) return start;
    double prev = start;
    double cur = start;
    for (int k = 0; k < 4000; ++k) {
        prev = cur;
        cur *= 1.05;
        if (holds(cur)) {
            double lo = prev;
            double hi = cur;
            for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (holds(mid)) hi = mid; else lo = mid;
            }
            return hi;
        }
    }
    throw NonConvergence("compute_thresholds: predicate s_-(a) < b_-(a) never satisfied");
}

}  // namespace

void SolitonParams::validate() const {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("a (mu) must be positive, got " + fmt_num(a));
    if (p < 2) throw DomainError("p must be an integer >= 2, got " + std::to_string(p));
    if (!(iter_tol > 0.0 && iter_tol < 1.0)) throw DomainError("iter_tol must lie in (0, 1)");
    if (!(root_tol > 0.0 && root_tol < 1.0)) throw DomainError("root_tol must lie in (0, 1)");
    if (max_iters < 1) throw DomainError("max_iters must be >= 1");
    if (truncation.fixed && *truncation.fixed < 2) throw DomainError("xmax must be >= 2");
}

double majorant_map(double a, int p, double s) {
    return std::pow(a + 1.0, inv_pm1(p)) / a + ipow(s, p) / a;
}

double majorant_gap(double a, int p, double s) { return majorant_map(a, p, s) - s; }

double majorant_min_gap(double a, int p) {
    // g(a, s_min(a)) = a^{-1}(a+1)^{1/(p-1)} - a^{1/(p-1)} p^{-1/(p-1)} (1 - 1/p)
    const double e = inv_pm1(p);
    return std::pow(a + 1.0, e) / a - std::pow(a, e) * std::pow(static_cast<double>(p), -e) * (1.0 - 1.0 / p);
}

double boundary_lower(double a, int p) { return std::pow(a, inv_pm1(p)); }
double boundary_upper(double a, int p) { return std::pow(a + 1.0, inv_pm1(p)); }

BoundSequence bound_fixed_points(double a, int p, double tol) {
    if (!(a > 0.0)) throw DomainError("bound_fixed_points: a must be positive");
    if (p < 2) throw DomainError("bound_fixed_points: p must be >= 2");
    BoundSequence out;
    out.a = a;
    out.p = p;
    out.s_min = std::pow(a / p, inv_pm1(p));
    const double g_min = majorant_gap(a, p, out.s_min);
    if (!(g_min < 0.0)) {
        throw NoTwoRoots("g(a, s) has no two positive roots at a = " + fmt_num(a) +
                         " (g(a, s_min) = " + fmt_num(g_min) + "); a must exceed a0");
    }
    auto bisect = [&](double lo, double hi) {
        // g(lo) and g(hi) have opposite signs.
        const bool lo_positive = majorant_gap(a, p, lo) > 0.0;
        for (int it = 0; it < 400 && hi - lo > tol * std::max(1.0, hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((majorant_gap(a, p, mid) > 0.0) == lo_positive) lo = mid; else hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    out.s_minus = bisect(0.0, out.s_min);
    double upper = 2.0 * out.s_min;
    while (majorant_gap(a, p, upper) <= 0.0) upper *= 2.0;
    out.s_plus = bisect(out.s_min, upper);
    return out;
}

Thresholds compute_thresholds(int p) {
    if (p < 2) throw DomainError("compute_thresholds: p must be >= 2");
    Thresholds t;
    t.p = p;
    // g(a, s_min(a)) is strictly decreasing in a, +inf at 0+ and -inf at inf.
    double lo = 1e-8;
    double hi = 1.0;
    while (majorant_min_gap(hi, p) > 0.0) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (majorant_min_gap(mid, p) > 0.0) lo = mid; else hi = mid;
    }
    t.a0 = hi;
    t.a1 = first_satisfying(t.a0, p);
    t.a2 = inv_pm1(p);
    t.a3 = std::max(t.a1, t.a2);
    t.mu_star = first_satisfying(t.a3, p);
    return t;
}

TailSolution tail_iteration(const SolitonParams& params, double b, const ResolventKernel& kernel) {
    const double a = kernel.a();
    const int p = params.p;
    const std::size_t X = kernel.truncation();
    const double b_lo = boundary_lower(a, p);
    const double b_hi = boundary_upper(a, p);
    const double slack = 1e-12 * b_hi;
    if (!(b >= b_lo - slack && b <= b_hi + slack)) {
        throw DomainError("tail_iteration: b = " + fmt_num(b) + " outside [b_-, b_+] = [" + fmt_num(b_lo) +
                          ", " + fmt_num(b_hi) + "]");
    }
    const BoundSequence bounds = bound_fixed_points(a, p);

    const double bp = ipow(b, p);
    LatticeVector source(X);
    for (std::size_t x = 1; x <= X; ++x) source[x] = kernel.psi()[x] * bp;
    const double source_tail = kernel.psi_tail_l1() * bp;

    TailSolution sol;
    auto& diag = sol.diagnostics;
    LatticeVector u(X);
    double s = 0.0;
    diag.l1_norms.push_back(0.0);
    diag.majorant.push_back(0.0);
    diag.min_increment = std::numeric_limits<double>::infinity();

    for (int n = 0; n < params.max_iters; ++n) {
        const LatticeVector image = projected_resolvent(kernel, pointwise_pow(u, p));
        LatticeVector next(X);
        double step_l1 = 0.0;
        double step_sup = 0.0;
        for (std::size_t x = 1; x <= X; ++x) {
            next[x] = source[x] + image[x];
            const double inc = next[x] - u[x];
            diag.min_increment = std::min(diag.min_increment, inc);
            if (!(inc > 0.0)) diag.strictly_increasing = false;
            step_l1 += std::abs(inc);
            step_sup = std::max(step_sup, std::abs(inc));
        }
        next.tail_l1 = source_tail + image.tail_l1;
        s = majorant_map(a, p, s);
        const double l1 = norm_l1(next) + next.tail_l1;
        diag.l1_norms.push_back(l1);
        diag.majorant.push_back(s);
        diag.step_l1.push_back(step_l1);
        diag.step_sup.push_back(step_sup);
        if (l1 > s) diag.majorant_respected = false;
        diag.iterations = n + 1;
        if (l1 > bounds.s_min) {
            throw RegimeViolation("tail_iteration: ||u_n||_1 = " + fmt_num(l1) + " left the contraction basin s < s_min = " +
                                  fmt_num(bounds.s_min) + " at a = " + fmt_num(a));
        }
        u = std::move(next);
        if (step_l1 <= params.iter_tol && step_sup <= params.iter_tol) {
            sol.u = std::move(u);
            return sol;
        }
    }
    throw NonConvergence("tail_iteration: no convergence to " + fmt_num(params.iter_tol) + " within " +
                         std::to_string(params.max_iters) + " iterations at a = " + fmt_num(a));
}

double boundary_function(const SolitonParams& params, double b, const ResolventKernel& kernel) {
    const double a = kernel.a();
    const TailSolution tail = tail_iteration(params, b, kernel);
    return ipow(b, params.p) - (a + 1.0) * b + tail.u[1];
}

double solve_boundary(const SolitonParams& params, const ResolventKernel& kernel) {
    const double a = kernel.a();
    double lo = boundary_lower(a, params.p);
    double hi = boundary_upper(a, params.p);
    double f_lo = boundary_function(params, lo, kernel);
    double f_hi = boundary_function(params, hi, kernel);
    if (!(f_lo < 0.0 && f_hi > 0.0)) {
        throw BracketFailure("solve_boundary: f_*(b_-) = " + fmt_num(f_lo) + ", f_*(b_+) = " + fmt_num(f_hi) +
                             " do not bracket a root at a = " + fmt_num(a) + " (a <= a3 or tolerance mismatch)");
    }
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = boundary_function(params, mid, kernel);
        if (std::abs(f_mid) <= params.root_tol) return mid;
        if (f_mid < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    }
    const double best = (std::abs(f_lo) < std::abs(f_hi)) ? lo : hi;
    if (std::min(std::abs(f_lo), std::abs(f_hi)) <= params.root_tol) return best;
    throw BracketFailure("solve_boundary: bracket collapsed with |f_*| = " +
                         fmt_num(std::min(std::abs(f_lo), std::abs(f_hi))) + " above root_tol = " +
                         fmt_num(params.root_tol));
}

std::size_t choose_truncation(const SolitonParams& params) {
    if (params.truncation.fixed) return *params.truncation.fixed;
    const double a = params.a;
    std::size_t X = specfun::asymptotic_truncation(a, params.truncation.psi_relative);
    // psi tail times b_+^p below iter_tol / 10.
    const double scale = ipow(boundary_upper(a, params.p), params.p);
    auto small_enough = [&](std::size_t x) {
        return scale * specfun::psi_tail_asymptote_integral(a, static_cast<double>(x)) < params.iter_tol / 10.0;
    };
    std::size_t hi = std::max<std::size_t>(X, 1);
    while (!small_enough(hi)) hi *= 2;
    std::size_t lo = hi / 2;
    while (lo >= 1 && hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (small_enough(mid)) hi = mid; else lo = mid;
    }
    // Far sites decay like exp(-2 sqrt(a x)); keep them well above underflow.
    const auto underflow_cap = static_cast<std::size_t>(90000.0 / a);
    return std::max({X, hi, std::min(params.truncation.minimum, underflow_cap)});
}

LatticeVector soliton_residual(const LatticeVector& u, double a, int p) {
    LatticeVector r = apply_l0(u);
    for (std::size_t x = 0; x < u.size(); ++x) r[x] += a * u[x] - ipow(u[x], p);
    return r;
}

double soliton_tail_bound(const LatticeVector& u, double a, int p) {
    if (u.values.empty()) return std::numeric_limits<double>::infinity();
    const double last = u.values.back();
    const double denom = a - ipow(last, p - 1);
    if (last < 0.0 || !(denom > 0.0)) return std::numeric_limits<double>::infinity();
    return static_cast<double>(u.truncation() + 1) * last / denom;
}

SolitonResult construct_soliton(const SolitonParams& params) {
    params.validate();
    return construct_soliton(params, compute_thresholds(params.p));
}

SolitonResult construct_soliton(const SolitonParams& params, const Thresholds& thresholds) {
    params.validate();
    if (!(params.a > thresholds.mu_star)) {
        throw RegimeViolation("mu = " + fmt_num(params.a) + " <= mu_star = " + fmt_num(thresholds.mu_star) +
                              " for p = " + std::to_string(params.p));
    }
    const std::size_t X = choose_truncation(params);
    const ResolventKernel kernel = build_kernel(params.a, X);

    SolitonResult result;
    result.params = params;
    result.thresholds = thresholds;
    result.b_star = solve_boundary(params, kernel);
    TailSolution tail = tail_iteration(params, result.b_star, kernel);
    result.alpha = std::move(tail.u);
    result.alpha[0] = result.b_star;
    result.alpha.tail_l1 = soliton_tail_bound(result.alpha, params.a, params.p);
    result.q_at_root = result.alpha[1];
    result.s_star = bound_fixed_points(params.a, params.p).s_minus;
    result.iterations_used = tail.diagnostics.iterations;
    result.diagnostics = std::move(tail.diagnostics);
    result.residual_sup = norm_sup(soliton_residual(result.alpha, params.a, params.p));

    for (const auto& check : check_existence(result)) {
        if (!check.pass) {
            throw Error("construct_soliton: constructed profile fails '" + check.name + "' (measured " +
                        fmt_num(check.measured) + ", bound " + fmt_num(check.bound) + ")");
        }
    }
    return result;
}

std::vector<SolitonResult> construct_sweep(const SolitonParams& base, const std::vector<double>& mus) {
    base.validate();
    const Thresholds thresholds = compute_thresholds(base.p);
    std::vector<SolitonResult> results(mus.size());
    std::vector<std::exception_ptr> failures(mus.size());
    const auto n = static_cast<std::ptrdiff_t>(mus.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            SolitonParams params = base;
            params.a = mus[static_cast<std::size_t>(i)];
            results[static_cast<std::size_t>(i)] = construct_soliton(params, thresholds);
        } catch (...) {
            failures[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }
    return results;
}

}  // namespace ncsoliton
