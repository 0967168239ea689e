#include "ncsoliton/specfun.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "ncsoliton/error.hpp"
#include "ncsoliton/kernels.hpp"
#include "ncsoliton/quadrature.hpp"

namespace ncsoliton::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// e^{y^2} erfc(y) without overflow.
double erfcx(double y) {
    // Both factors stay inside the double range up to y = 26.
    if (y < 26.0) return std::exp(y * y) * std::erfc(y);
    const double inv = 1.0 / (2.0 * y * y);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 8; ++k) {
        term *= -(2.0 * k - 1.0) * inv;
        sum += term;
    }
    return sum / (y * std::sqrt(std::numbers::pi));
}

void require_positive(double a, const char* what) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw DomainError(std::string(what) + ": spectral shift a must be positive and finite, got " +
                          std::to_string(a));
    }
}

}  // namespace

double scaled_e1(double a) {
    require_positive(a, "scaled_e1");
    if (a < 1.0) {
        double sum = 0.0;
        double term = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= -a / k;
            const double contrib = term / k;
            sum += contrib;
            if (std::abs(contrib) < kEps * std::abs(sum)) break;
        }
        return std::exp(a) * (-std::numbers::egamma - std::log(a) - sum);
    }
    // Modified Lentz evaluation of the continued fraction for e^a E_1(a).
    constexpr double tiny = 1e-300;
    double b = a + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw NonConvergence("scaled_e1: continued fraction did not converge");
}

double laplace_integral(double a, std::size_t x, int p, double rel_tol) {
    require_positive(a, "laplace_integral");
    const double xd = static_cast<double>(x);
    const double pw = static_cast<double>(p - 2);
    auto log_integrand = [=](double s) {
        const double u = 1.0 - s;
        double log_f = -a * s / u;
        if (x > 0) log_f += xd * std::log(s);
        if (p != 2) log_f += pw * std::log(u);
        return log_f;
    };
    // Stationary point of log f: x/s - (p-2)/(1-s) - a/(1-s)^2 = 0.
    auto slope = [=](double s) {
        const double u = 1.0 - s;
        return xd / s - pw / u - a / (u * u);
    };
    double peak = 0.0;
    {
        double lo = 0.0;
        double hi = 1.0;
        const double start = (x > 0) ? 1.0 : slope(1e-300);
        if (start > 0.0) {
            for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (slope(std::max(mid, 1e-300)) > 0.0) lo = mid; else hi = mid;
            }
            peak = 0.5 * (lo + hi);
        }
    }
    const double u = 1.0 - peak;
    const double curvature = xd / std::max(peak * peak, 1e-300) + pw / (u * u) + 2.0 * a / (u * u * u);
    const double width = (curvature > 0.0) ? 1.0 / std::sqrt(curvature) : 0.25;

    std::vector<double> breaks{0.0};
    for (double k : {-16.0, -8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0, 16.0}) {
        const double b = peak + k * width;
        if (b > breaks.back() + 1e-12 && b < 1.0 - 1e-12) breaks.push_back(b);
    }
    breaks.push_back(1.0);

    // Integrate f / f(peak) so that tails far below the double range still
    // resolve; the scale is restored at the end.
    const double log_scale = log_integrand(peak);
    auto integrand = [=](double s) {
        if (!(1.0 - s > 0.0)) return 0.0;  // exp(-a s/u) wins over any power of u
        return std::exp(log_integrand(s) - log_scale);
    };
    const auto result = quadrature::integrate_doubling(integrand, breaks, rel_tol);
    if (!result.converged) {
        throw NonConvergence("laplace_integral: panel doubling did not reach tolerance (a=" +
                             std::to_string(a) + ", x=" + std::to_string(x) + ")");
    }
    return result.value * std::exp(log_scale);
}

double scaled_exp_integral_quadrature(int p, double a) {
    if (p < 1) throw DomainError("exp_integral: order p must be >= 1");
    return laplace_integral(a, 0, p);
}

ExpIntegralTable::ExpIntegralTable(double a, std::size_t length) : a_(a) {
    require_positive(a, "ExpIntegralTable");
    if (length == 0) throw DomainError("ExpIntegralTable: length must be positive");
    scaled_.resize(length);
    scaled_[0] = scaled_e1(a);
    // Relative error estimate of the current entry.
    double err = 4.0 * kEps;
    for (std::size_t k = 1; k < length; ++k) {
        const int n = static_cast<int>(k);  // computes S_{n+1} from S_n
        const double t = a * scaled_[k - 1];
        const double num = 1.0 - t;
        const double next_err = (num > 0.0) ? (t / num) * err + 2.0 * kEps
                                            : std::numeric_limits<double>::infinity();
        if (next_err > kRecurrenceGuard) {
            scaled_[k] = scaled_exp_integral_quadrature(n + 1, a);
            fallbacks_.push_back(n + 1);
            err = 1e-14;
        } else {
            scaled_[k] = num / n;
            err = next_err;
        }
    }
}

double ExpIntegralTable::value(int n) const { return std::exp(-a_) * scaled(n); }

std::vector<double> ExpIntegralTable::values() const {
    std::vector<double> out(scaled_.size());
    const double damp = std::exp(-a_);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = damp * scaled_[k];
    return out;
}

double scaled_exp_integral(int p, double a) {
    if (p < 1) throw DomainError("exp_integral: order p must be >= 1");
    require_positive(a, "exp_integral");
    if (p == 1) return scaled_e1(a);
    return ExpIntegralTable(a, static_cast<std::size_t>(p)).scaled(p);
}

double exp_integral(int p, double a) { return std::exp(-a) * scaled_exp_integral(p, a); }

EigenfunctionProfile laguerre_phi(double a, std::size_t x_max) {
    require_positive(a, "laguerre_phi");
    EigenfunctionProfile prof{ProfileKind::phi, a, std::vector<double>(x_max + 1)};
    auto& v = prof.values;
    v[0] = 1.0;
    if (x_max >= 1) v[1] = 1.0 + a;
    for (std::size_t x = 1; x < x_max; ++x) {
        const double xd = static_cast<double>(x);
        v[x + 1] = ((2.0 * xd + 1.0 + a) * v[x] - xd * v[x - 1]) / (xd + 1.0);
        if (!std::isfinite(v[x + 1])) {
            throw OverflowError("laguerre_phi: phi_{-a}(x) overflows at x=" + std::to_string(x + 1) +
                                " for a=" + std::to_string(a) + "; shrink x_max or use log form");
        }
    }
    return prof;
}

std::vector<double> laguerre_log_phi(double a, std::size_t x_max) {
    require_positive(a, "laguerre_log_phi");
    std::vector<double> g(x_max + 1);
    g[0] = 0.0;
    double ratio = 1.0 + a;  // phi(x+1)/phi(x)
    for (std::size_t x = 0; x < x_max; ++x) {
        if (x > 0) {
            const double xd = static_cast<double>(x);
            ratio = ((2.0 * xd + 1.0 + a) - xd / ratio) / (xd + 1.0);
        }
        g[x + 1] = g[x] + std::log(ratio);
    }
    return g;
}

EigenfunctionProfile resolvent_psi(double a, std::size_t x_max) {
    require_positive(a, "resolvent_psi");
    EigenfunctionProfile prof{ProfileKind::psi, a, std::vector<double>(x_max + 1)};
    kernels::parallel::psi_profile(a, prof.values);
    return prof;
}

EigenfunctionProfile resolvent_psi_backward(double a, std::size_t x_max) {
    require_positive(a, "resolvent_psi_backward");
    // Start far enough out that the dominant solution's contamination,
    // ~ exp(-4 (sqrt(a N) - sqrt(a x))), is below round-off.
    const double root = std::sqrt(static_cast<double>(x_max)) + 12.0 / std::sqrt(a) + 2.0;
    const std::size_t start = std::max<std::size_t>(x_max + 32, static_cast<std::size_t>(root * root));

    EigenfunctionProfile prof{ProfileKind::psi, a, std::vector<double>(x_max + 1)};
    auto& v = prof.values;
    double upper = 0.0;  // t(x+1)
    double cur = 1.0;    // t(x)
    for (std::size_t x = start; x >= 1; --x) {
        const double xd = static_cast<double>(x);
        const double lower = ((2.0 * xd + 1.0 + a) * cur - (xd + 1.0) * upper) / xd;
        if (x <= x_max) v[x] = cur;
        upper = cur;
        cur = lower;
        if (std::abs(cur) > 1e250) {
            constexpr double shrink = 1e-250;
            cur *= shrink;
            upper *= shrink;
            for (std::size_t y = x; y <= x_max; ++y) v[y] *= shrink;
        }
    }
    v[0] = cur;
    const double scale = scaled_e1(a) / v[0];
    for (auto& e : v) e *= scale;
    return prof;
}

std::shared_ptr<const EigenfunctionProfile> cached_resolvent_psi(double a, std::size_t x_max) {
    static std::mutex mutex;
    static std::map<std::pair<double, std::size_t>, std::shared_ptr<const EigenfunctionProfile>> cache;
    const auto key = std::make_pair(a, x_max);
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto prof = std::make_shared<const EigenfunctionProfile>(resolvent_psi(a, x_max));
    std::lock_guard lock(mutex);
    if (cache.size() > 512) cache.clear();
    return cache.emplace(key, std::move(prof)).first->second;
}

double psi_tail_asymptote(double a, double x) {
    require_positive(a, "psi_tail_asymptote");
    if (!(x >= 1.0)) throw DomainError("psi_tail_asymptote: x must be >= 1");
    const double ax = a * x;
    return std::exp(0.5 * a - 0.25 * std::log(ax) - 2.0 * std::sqrt(ax)) * std::sqrt(std::numbers::pi);
}

double psi_tail_asymptote_integral(double a, double x) {
    require_positive(a, "psi_tail_asymptote_integral");
    if (!(x >= 1.0)) throw DomainError("psi_tail_asymptote_integral: x must be >= 1");
    // y = sqrt(a x): int_Y^inf y^{1/2} e^{-2y} dy = 2^{-3/2} Gamma(3/2, 2Y).
    const double z = 2.0 * std::sqrt(a * x);
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    const double upper_gamma_scaled = std::sqrt(z) + 0.5 * sqrt_pi * erfcx(std::sqrt(z));
    // upper_gamma_scaled = e^{z} Gamma(3/2, z)
    return sqrt_pi * (2.0 / a) * std::pow(2.0, -1.5) * upper_gamma_scaled * std::exp(0.5 * a - z);
}

std::size_t asymptotic_truncation(double a, double rel) {
    const double target = rel * scaled_e1(a);
    auto below = [&](std::size_t x) { return psi_tail_asymptote(a, static_cast<double>(x)) < target; };
    std::size_t hi = 1;
    while (!below(hi)) {
        hi *= 2;
        if (hi > (std::size_t{1} << 40)) throw DomainError("asymptotic_truncation: no finite truncation");
    }
    std::size_t lo = hi / 2;
    if (lo == 0) return hi;
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (below(mid)) hi = mid; else lo = mid;
    }
    return hi;
}

}  // namespace ncsoliton::specfun
