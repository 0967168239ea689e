#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ncsoliton/error.hpp"
#include "ncsoliton/specfun.hpp"
#include "ncsoliton/verify.hpp"

using namespace ncsoliton;

namespace {

const Thresholds& cubic() {
    static const Thresholds t = compute_thresholds(3);
    return t;
}

SolitonResult build(double mu) {
    SolitonParams p;
    p.a = mu;
    return construct_soliton(p, cubic());
}

const SolitonResult& reference() {
    static const SolitonResult r = build(2.0 * cubic().mu_star);
    return r;
}

const Check& find(const std::vector<Check>& checks, const std::string& name) {
    const auto it = std::find_if(checks.begin(), checks.end(), [&](const Check& c) { return c.name == name; });
    REQUIRE(it != checks.end());
    return *it;
}

}  // namespace

TEST_CASE("the constructed soliton passes every check") {
    const auto report = verify_soliton(reference());
    for (const auto& c : report.checks) {
        CAPTURE(c.name);
        CHECK(c.pass);
        CHECK(!c.claim.empty());
    }
    CHECK(report.passed());
    REQUIRE(report.decay.has_value());
    CHECK(report.decay->x_star >= 1);
    CHECK(report.decay->q_bar < report.mu);
    CHECK(format_table(report).find("all checks passed") != std::string::npos);
}

TEST_CASE("negative control: zero vector fails positivity") {
    SolitonResult r = reference();
    std::fill(r.alpha.values.begin(), r.alpha.values.end(), 0.0);
    CHECK_FALSE(find(check_existence(r), "existence.positive").pass);
}

TEST_CASE("negative control: an interior bump fails monotone decrease") {
    SolitonResult r = reference();
    r.alpha[10] = 2.0 * r.alpha[9];
    CHECK_FALSE(find(check_existence(r), "existence.decreasing").pass);
    CHECK_FALSE(verify_soliton(r).passed());
}

TEST_CASE("negative control: +10% at one site breaks the residual") {
    for (std::size_t site : {0u, 1u, 5u}) {
        SolitonResult r = reference();
        r.alpha[site] *= 1.1;
        CHECK_FALSE(check_residual(r).pass);
    }
}

TEST_CASE("bracket check and its negative control") {
    CHECK(check_bracket(reference()).pass);
    SolitonResult r = reference();
    r.alpha[0] = boundary_upper(r.params.a, 3) + 1e-3;
    CHECK_FALSE(check_bracket(r).pass);
}

TEST_CASE("iteration diagnostics are re-checked") {
    const auto checks = check_iteration(reference());
    REQUIRE(checks.size() == 2);
    CHECK(checks[0].pass);
    CHECK(checks[1].pass);
    SolitonResult r = reference();
    r.diagnostics.l1_norms[2] = r.diagnostics.majorant[2] + 1.0;
    CHECK_FALSE(find(check_iteration(r), "iteration.majorant").pass);
    r.diagnostics = {};
    CHECK(check_iteration(r).empty());
}

TEST_CASE("monotonicity mechanism") {
    const auto checks = check_monotone_mechanism(reference());
    for (const auto& c : checks) {
        CAPTURE(c.name);
        CHECK(c.pass);
    }
    CHECK(find(checks, "monotone.summed_identity").measured <= 1e-9);
    SolitonResult r = reference();
    r.alpha[3] *= 1.05;
    CHECK_FALSE(find(check_monotone_mechanism(r), "monotone.summed_identity").pass);
}

TEST_CASE("l1 bound at a single point, and p = 2 is rejected") {
    const auto checks = check_l1_bound(reference());
    CHECK(find(checks, "l1_bound.majorant").pass);
    CHECK(find(checks, "l1_bound.scaled").pass);
    SolitonResult r = reference();
    r.params.p = 2;
    CHECK_THROWS_AS(check_l1_bound(r), UnsupportedP);
}

TEST_CASE("l1 bound along a mu grid: cap, trend and fitted constant") {
    std::vector<SolitonResult> results;
    for (double f : {16.0, 2.0, 8.0, 4.0}) results.push_back(build(f * cubic().mu_star));
    const auto sweep = check_l1_bound_sweep(results);
    CHECK(std::is_sorted(sweep.mu.begin(), sweep.mu.end()));
    for (const auto& c : sweep.checks) {
        CAPTURE(c.name);
        CHECK(c.pass);
    }
    double c = -1e300;
    for (std::size_t i = 0; i < sweep.mu.size(); ++i) {
        CHECK(sweep.l1_hat[i] <= sweep.s_minus[i]);
        CHECK(sweep.ratio[i] == doctest::Approx(sweep.l1_hat[i] * std::sqrt(sweep.mu[i])));
        c = std::max(c, (sweep.ratio[i] - 1.0) * sweep.mu[i]);
    }
    CHECK(sweep.fitted_constant == c);
    CHECK(sweep.fitted_constant <= 5.0);
}

TEST_CASE("decay fit calibrates on psi_{-1}") {
    const auto psi = specfun::resolvent_psi(1.0, 400);
    const auto fit = fit_decay(psi.values, 100, 400);
    CHECK(std::abs(fit.c1_hat - 2.0) / 2.0 < 0.05);
    CHECK(fit.fit_residual < 1e-2);
    CHECK_THROWS_AS(fit_decay(psi.values, 100, 105), FitWindowTooSmall);
    CHECK_THROWS_AS(fit_decay(psi.values, 100, 401), FitWindowTooSmall);
}

TEST_CASE("decay fit on an exact model recovers its constants") {
    std::vector<double> v(200);
    for (std::size_t x = 1; x < v.size(); ++x) {
        const double xd = static_cast<double>(x);
        v[x] = 3.0 / std::sqrt(xd) * std::exp(-4.5 * std::sqrt(xd));
    }
    const auto fit = fit_decay(v, 20, 150);
    CHECK(fit.c1_hat == doctest::Approx(4.5).epsilon(1e-12));
    CHECK(fit.c0_hat == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(fit.fit_residual < 1e-14);
}

TEST_CASE("decay envelope and rate bracket") {
    DecayAnalysis d;
    const auto checks = check_decay(reference(), &d);
    CHECK(find(checks, "decay.envelope").pass);
    CHECK(find(checks, "decay.rate").pass);
    CHECK(d.fit.window_lo == reference().alpha.truncation() / 4);
    CHECK(d.envelope_ratio <= 1.0);
    CHECK(d.c1_lower < d.c1_upper);
    CHECK(d.c1_closed_lower < d.c1_closed_upper);
    // The constant without the potential factor is too small for an envelope.
    CHECK(d.envelope_ratio_literal > 1.0);
}

TEST_CASE("fitted decay rate increases with mu") {
    double prev = 0.0;
    for (double f : {1.5, 2.0, 4.0, 8.0, 16.0}) {
        const auto fit = fit_decay(build(f * cubic().mu_star));
        CHECK(fit.c1_hat > prev);
        prev = fit.c1_hat;
    }
}

TEST_CASE("short truncations are reported") {
    SolitonParams p;
    p.a = 6.0;
    p.truncation.fixed = 12;
    p.iter_tol = 1e-10;
    SolitonResult r;
    r.params = p;
    r.alpha = LatticeVector(12);
    for (std::size_t x = 0; x <= 12; ++x) r.alpha[x] = std::exp(-static_cast<double>(x));
    CHECK_THROWS_AS(fit_decay(r), FitWindowTooSmall);
    const auto checks = check_decay(r);
    REQUIRE(checks.size() == 1);
    CHECK_FALSE(checks[0].pass);
}

TEST_CASE("report bookkeeping") {
    VerificationReport rep;
    CHECK(rep.passed());
    rep.append(Check{"a", "claim", true, 0, 0, 0});
    CHECK(rep.passed());
    rep.append(Check{"b", "claim", false, 1, 0, 0});
    CHECK_FALSE(rep.passed());
    CHECK(rep.checks.size() == 2);
    CHECK(format_table(rep).find("FAIL") != std::string::npos);
}
