// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ncsoliton/dnls.hpp"
#include "ncsoliton/error.hpp"
#include "ncsoliton/kernels.hpp"
#include "ncsoliton/operator.hpp"
#include "ncsoliton/soliton.hpp"
#include "ncsoliton/specfun.hpp"
#include "ncsoliton/verify.hpp"

using namespace ncsoliton;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s (%.2f s)%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), secs,
                o.detail.str().c_str());
    std::fflush(stdout);
}

double rel(double x, double y) { return std::abs(x - y) / std::abs(y); }

const Thresholds& cubic() {
    static const Thresholds t = compute_thresholds(3);
    return t;
}

// Constructed solitons keyed by the multiple of mu_star.
std::map<double, SolitonResult>& solitons() {
    static std::map<double, SolitonResult> m;
    return m;
}

const SolitonResult& soliton_at(double factor) {
    auto& m = solitons();
    auto it = m.find(factor);
    if (it == m.end()) {
        SolitonParams p;
        p.a = factor * cubic().mu_star;
        it = m.emplace(factor, construct_soliton(p, cubic())).first;
    }
    return it->second;
}

const std::vector<double> kResidualGrid = {1.5, 2.0, 4.0, 8.0};

}  // namespace

int main() {
    criterion(1, "||psi_{-a}||_1 = 1/a within 1e-8 relative", [](Outcome& o) {
        double worst = 0.0;
        for (double a : {0.5, 1.0, 5.0, 20.0}) {
            const std::size_t X = specfun::asymptotic_truncation(a, 1e-14) + 10;
            const auto k = build_kernel(a, X);
            const double head = std::accumulate(k.psi().values.begin(),
                                                k.psi().values.begin() + static_cast<long>(X) + 1, 0.0);
            worst = std::max(worst, rel(head + k.psi_tail_l1(), 1.0 / a));
        }
        o.detail << " max rel err " << worst;
        o.require(worst <= 1e-8, "sum");
    });

    criterion(2, "1/(a+n) < e^a E_n(a) < 1/(a+n-1), n <= 60", [](Outcome& o) {
        double lower_margin = 1e300, upper_margin = 1e300;
        for (double a : {0.1, 1.0, 10.0}) {
            const specfun::ExpIntegralTable t(a, 60);
            for (int n = 1; n <= 60; ++n) {
                const double s = t.scaled(n);
                lower_margin = std::min(lower_margin, s - 1.0 / (a + n));
                upper_margin = std::min(upper_margin, 1.0 / (a + n - 1) - s);
            }
        }
        o.detail << " min margins " << lower_margin << ", " << upper_margin;
        o.require(lower_margin > 0.0 && upper_margin > 0.0, "strict sandwich");
    });

    criterion(3, "Wronskian defect <= 1e-10 for x <= 500", [](Outcome& o) {
        double worst = 0.0;
        for (double a : {1.0, 10.0}) {
            const auto phi = specfun::laguerre_phi(a, 501);
            const auto psi = specfun::resolvent_psi(a, 501);
            for (std::size_t x = 0; x <= 500; ++x) {
                const double w = static_cast<double>(x + 1) * (phi[x + 1] * psi[x] - phi[x] * psi[x + 1]);
                worst = std::max(worst, std::abs(w - 1.0));
            }
        }
        o.detail << " max defect " << worst;
        o.require(worst <= 1e-10, "defect");
    });

    criterion(4, "(L0 + a) R v = v to 1e-8 ||v||_inf, 100 seeded vectors, X = 400", [](Outcome& o) {
        std::mt19937_64 rng(20240601);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        const std::size_t X = 400;
        double worst = 0.0;
        for (double a : {1.0, 10.0}) {
            const auto k = build_kernel(a, X);
            for (int trial = 0; trial < 50; ++trial) {
                LatticeVector v(X);
                for (auto& z : v.values) z = dist(rng);
                const auto r = apply_resolvent(k, v);
                // R v at X+1 closes the stencil at the last site.
                LatticeVector ext(X + 1);
                std::copy(r.values.begin(), r.values.end(), ext.values.begin());
                double sum = 0.0;
                for (std::size_t y = 0; y <= X; ++y) sum += k.phi()[y] * v[y];
                ext[X + 1] = k.psi()[X + 1] * sum;
                const auto lv = apply_l0(ext);
                double d = 0.0;
                for (std::size_t x = 0; x <= X; ++x) d = std::max(d, std::abs(lv[x] + a * ext[x] - v[x]));
                worst = std::max(worst, d / norm_sup(v));
            }
        }
        o.detail << " max relative defect " << worst;
        o.require(worst <= 1e-8, "identity");
    });

    criterion(5, "soliton residual <= 1e-6 at mu_star * {1.5, 2, 4, 8}", [](Outcome& o) {
        o.detail << " mu_star " << cubic().mu_star << ";";
        for (double f : kResidualGrid) {
            const auto& r = soliton_at(f);
            o.detail << " mu=" << r.params.a << ": " << r.residual_sup;
            o.require(r.residual_sup <= 1e-6, "residual");
        }
    });

    criterion(6, "positive, strictly decreasing, certified l1 tail < 1e-10", [](Outcome& o) {
        for (double f : kResidualGrid) {
            const auto& r = soliton_at(f);
            const auto& a = r.alpha;
            double pos = 1e300, diff = -1e300;
            for (std::size_t x = 0; x < a.size(); ++x) {
                pos = std::min(pos, a[x]);
                if (x + 1 < a.size()) diff = std::max(diff, a[x + 1] - a[x]);
            }
            const double tail = soliton_tail_bound(a, r.params.a, r.params.p);
            o.detail << " mu=" << r.params.a << ": min " << pos << ", max diff " << diff << ", tail " << tail << ";";
            o.require(pos > 0.0, "positivity");
            o.require(diff < 0.0, "decrease");
            o.require(tail < 1e-10, "tail");
        }
    });

    criterion(7, "||alpha_hat||_1 <= s_-(mu) and ||alpha_hat||_1 mu^{1/2} <= 1 + 5/mu", [](Outcome& o) {
        std::vector<SolitonResult> sweep;
        for (double f : {2.0, 4.0, 8.0, 16.0}) sweep.push_back(soliton_at(f));
        for (const auto& r : sweep) {
            // alpha_hat is alpha with the origin removed.
            const double l1 = norm_l1(r.alpha) - r.alpha[0] + r.alpha.tail_l1;
            o.detail << " mu=" << r.params.a << ": " << l1 << " <= " << r.s_star << ";";
            o.require(l1 <= r.s_star, "majorant at mu=" + std::to_string(r.params.a));
            o.require(l1 * std::sqrt(r.params.a) <= 1.0 + 5.0 / r.params.a,
                      "scaled bound at mu=" + std::to_string(r.params.a));
        }
        const auto s = check_l1_bound_sweep(sweep);
        o.detail << " ratios";
        for (double x : s.ratio) o.detail << " " << x;
        o.detail << "; fitted C " << s.fitted_constant;
        o.require(s.fitted_constant <= 5.0, "fitted constant");
        for (const auto& c : s.checks) o.require(c.pass, c.name);
    });

    criterion(8, "b_star strictly inside (mu^{1/2}, (mu+1)^{1/2})", [](Outcome& o) {
        for (double f : kResidualGrid) {
            const auto& r = soliton_at(f);
            const double lo = boundary_lower(r.params.a, 3), hi = boundary_upper(r.params.a, 3);
            o.detail << " mu=" << r.params.a << ": " << lo << " < " << r.b_star << " < " << hi << ";";
            o.require(lo < r.b_star && r.b_star < hi, "bracket");
        }
    });

    criterion(9, "upper envelope beyond x_star; fit on psi_{-1} gives c1 = 2 within 5%", [](Outcome& o) {
        for (double f : kResidualGrid) {
            const auto& r = soliton_at(f);
            const auto d = analyze_decay(r);
            o.detail << " mu=" << r.params.a << ": ratio " << d.envelope_ratio << ";";
            o.require(d.envelope_ratio <= 1.0, "envelope");
        }
        const auto psi = specfun::resolvent_psi(1.0, 400);
        const auto fit = fit_decay(psi.values, 100, 400);
        o.detail << " c1_hat " << fit.c1_hat;
        o.require(std::abs(fit.c1_hat - 2.0) / 2.0 <= 0.05, "calibration");
    });

    criterion(10, "iterates strictly increase and respect s_n(mu)", [](Outcome& o) {
        for (double f : kResidualGrid) {
            const auto& r = soliton_at(f);
            const auto& d = r.diagnostics;
            o.detail << " mu=" << r.params.a << ": " << d.iterations << " iters, min increment " << d.min_increment
                     << ";";
            o.require(d.iterations > 0 && d.strictly_increasing, "monotone");
            o.require(d.majorant_respected, "majorant");
        }
    });

    criterion(11, "DNLS stationarity at mu = 2 mu_star, with negative control", [](Outcome& o) {
        const auto& r = soliton_at(2.0);
        const double mu = r.params.a;
        const auto basis = dnls::SpectralBasis::of(truncated_matrix(r.alpha.size()));
        dnls::EvolutionOptions opt;
        opt.dt = 1e-3 / mu;
        opt.t_final = 10.0 / mu;
        opt.record_every = 10;
        const auto run = dnls::evolve(dnls::to_complex(r.alpha), opt, &basis);
        double dev = 0.0;
        for (const auto& rec : run.records) dev = std::max(dev, rec.sup_amp_dev);
        const double zeta = dnls::phase_track(run.records, opt.t_final);
        const auto half = dnls::evolve(dnls::to_complex(r.alpha, 0.5), opt, &basis);
        const double control = half.records.back().sup_amp_dev;
        o.detail << " amp dev " << dev << ", l2 drift " << run.max_ell2_drift << ", zeta_hat " << zeta
                 << ", control dev " << control;
        o.require(dev <= 1e-6, "stationarity");
        o.require(run.max_ell2_drift <= 1e-9, "l2 drift");
        o.require(std::abs(zeta + mu) / mu <= 1e-4, "phase slope");
        o.require(control > 1e-2, "negative control");
    });

    criterion(12, "prefix-sum = direct kernel sum (1e-12, X = 200); quadrature psi = backward psi (1e-9)", [](Outcome& o) {
        std::mt19937_64 rng(77);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        const std::size_t X = 200;
        double worst_kernel = 0.0;
        for (double a : {0.5, 3.0, 20.0}) {
            const auto k = build_kernel(a, X);
            for (int trial = 0; trial < 10; ++trial) {
                LatticeVector v(X);
                for (auto& z : v.values) z = dist(rng);
                const auto fast = apply_resolvent(k, v);
                std::vector<double> direct(X + 1);
                kernels::serial::direct_resolvent(k.phi().values, k.psi().values, v.values, direct);
                double scale = 0.0, d = 0.0;
                for (std::size_t x = 0; x <= X; ++x) {
                    scale = std::max(scale, std::abs(direct[x]));
                    d = std::max(d, std::abs(fast[x] - direct[x]));
                }
                worst_kernel = std::max(worst_kernel, d / scale);
            }
        }
        double worst_psi = 0.0;
        for (double a : {0.5, 1.0, 5.0, 20.0}) {
            const auto q = specfun::resolvent_psi(a, 500);
            const auto b = specfun::resolvent_psi_backward(a, 500);
            for (std::size_t x = 0; x <= 500; ++x) worst_psi = std::max(worst_psi, rel(b[x], q[x]));
        }
        o.detail << " kernel rel diff " << worst_kernel << ", psi rel diff " << worst_psi;
        o.require(worst_kernel <= 1e-12, "kernel");
        o.require(worst_psi <= 1e-9, "psi");
    });

    std::printf("%s: %d of 12 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
