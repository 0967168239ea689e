#include "ncsoliton/dnls.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "ncsoliton/error.hpp"

namespace ncsoliton::dnls {

namespace {

using cplx = std::complex<double>;

double ell2(std::span<const cplx> w) {
    double s = 0.0;
    for (const auto& z : w) s += std::norm(z);
    return std::sqrt(s);
}

double sup_abs(std::span<const cplx> w) {
    double s = 0.0;
    for (const auto& z : w) s = std::max(s, std::abs(z));
    return s;
}

void nonlinear_phase(std::span<cplx> w, double tau, double sigma) {
    for (auto& z : w) {
        const double n = std::pow(std::norm(z), sigma);
        z *= std::polar(1.0, tau * n);
    }
}

EvolutionRecord record_of(const EvolutionState& s, std::span<const cplx> w0) {
    EvolutionRecord r;
    r.t = s.t;
    r.ell2 = s.ell2_current;
    for (std::size_t x = 0; x < s.w.size(); ++x) {
        r.sup_amp_dev = std::max(r.sup_amp_dev, std::abs(std::abs(s.w[x]) - std::abs(w0[x])));
    }
    r.phase0 = std::arg(s.w[0]);
    r.amp0 = std::abs(s.w[0]);
    return r;
}

}  // namespace

SpectralBasis SpectralBasis::of(const SymmetricTridiagonal& m) {
    const auto n = static_cast<Eigen::Index>(m.size());
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(n - 1);
    for (Eigen::Index i = 0; i < n; ++i) diag[i] = m.diagonal[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i + 1 < n; ++i) sub[i] = m.off_diagonal[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw NonConvergence("tridiagonal eigensolver failed");
    return SpectralBasis{solver.eigenvalues(), solver.eigenvectors()};
}

LinearPropagator::LinearPropagator(const SpectralBasis& basis, double dt) : dt_(dt) {
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::VectorXcd phases(n);
    for (Eigen::Index k = 0; k < n; ++k) phases[k] = std::polar(1.0, -dt * basis.eigenvalues[k]);
    const Eigen::MatrixXcd v = basis.vectors.cast<cplx>();
    const Eigen::MatrixXcd u = v * phases.asDiagonal() * v.transpose();
    u_ = kernels::ComplexMatrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) u_(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = u(i, j);
    }
}

void LinearPropagator::apply(std::span<const cplx> in, std::span<cplx> out) const {
    kernels::parallel::matvec(u_, in, out);
}

LinearPropagator LinearPropagator::reversed() const {
    LinearPropagator r;
    r.dt_ = -dt_;
    r.u_ = u_;
    for (auto& z : r.u_.data) z = std::conj(z);
    return r;
}

EvolutionState EvolutionState::start(ComplexLatticeVector w0, double dt, double sigma) {
    if (!(dt > 0.0)) throw DomainError("evolution: dt must be positive");
    if (!(sigma >= 0.5) || std::floor(2.0 * sigma) != 2.0 * sigma) {
        throw DomainError("evolution: sigma must be a positive multiple of 1/2");
    }
    if (w0.size() < 2) throw DomainError("evolution: need at least two sites");
    const double sup = sup_abs(w0.view());
    if (!(sup > 0.0)) throw DomainError("evolution: initial data vanishes");
    const double edge = std::abs(w0.values.back());
    if (!(edge < 1e-12 * sup)) {
        throw TailLeak("evolution: |w(X)| = " + std::to_string(edge) +
                       " is not below 1e-12 ||w||_inf; increase the truncation");
    }
    if (std::floor(sigma) != sigma) {
        // Even p: |w|^{p-1} w agrees with u^p only from real initial data.
        for (const auto& z : w0.values) {
            if (z.imag() != 0.0) throw DomainError("evolution: even p requires real initial data");
        }
    }
    EvolutionState s;
    s.w = std::move(w0);
    s.dt = dt;
    s.sigma = sigma;
    s.ell2_initial = ell2(s.w.view());
    s.ell2_current = s.ell2_initial;
    return s;
}

void step_in_place(EvolutionState& state, const LinearPropagator& propagator, const StepOptions& options,
                   std::vector<cplx>& scratch) {
    if (propagator.size() != state.w.size()) throw DomainError("step: propagator size does not match the state");
    const double dt = propagator.dt();
    scratch.resize(state.w.size());
    if (!options.linear_only) nonlinear_phase(state.w.view(), 0.5 * dt, state.sigma);
    propagator.apply(state.w.view(), scratch);
    std::copy(scratch.begin(), scratch.end(), state.w.values.begin());
    if (!options.linear_only) nonlinear_phase(state.w.view(), 0.5 * dt, state.sigma);
    state.t += dt;
    state.ell2_current = ell2(state.w.view());
    const double sup = sup_abs(state.w.view());
    const double edge = std::abs(state.w.values.back());
    if (edge > options.leak_threshold * sup) {
        throw TailLeak("evolution: |w(X)| / ||w||_inf = " + std::to_string(edge / sup) + " at t = " +
                       std::to_string(state.t) + " exceeds " + std::to_string(options.leak_threshold) +
                       "; the truncation reflects, increase X or shorten T");
    }
}

EvolutionState step(const EvolutionState& state, const LinearPropagator& propagator, const StepOptions& options) {
    EvolutionState next = state;
    std::vector<cplx> scratch;
    step_in_place(next, propagator, options, scratch);
    return next;
}

EvolutionRun evolve(const ComplexLatticeVector& w0, const EvolutionOptions& options, const SpectralBasis* basis) {
    if (!(options.t_final >= 0.0)) throw DomainError("evolution: T must be nonnegative");
    if (options.record_every < 1) throw DomainError("evolution: record_every must be >= 1");
    SpectralBasis local;
    if (!basis) {
        local = SpectralBasis::of(truncated_matrix(w0.size()));
        basis = &local;
    }
    if (basis->size() != w0.size()) throw DomainError("evolution: basis size does not match the initial data");
    const LinearPropagator propagator(*basis, options.dt);
    const StepOptions step_options{options.linear_only, options.leak_threshold};

    EvolutionRun run;
    EvolutionState state = EvolutionState::start(w0, options.dt, options.sigma);
    const auto steps = static_cast<std::size_t>(std::ceil(options.t_final / options.dt - 1e-9));
    auto keep = [&](const EvolutionState& s) {
        run.records.push_back(record_of(s, w0.view()));
        run.max_ell2_drift = std::max(run.max_ell2_drift, std::abs(s.ell2_current - s.ell2_initial) / s.ell2_initial);
        if (options.keep_snapshots) run.snapshots.push_back(Snapshot{s.t, s.w});
    };
    keep(state);
    std::vector<cplx> scratch;
    for (std::size_t n = 1; n <= steps; ++n) {
        step_in_place(state, propagator, step_options, scratch);
        state.t = static_cast<double>(n) * options.dt;
        if (n % options.record_every == 0 || n == steps) keep(state);
    }
    run.final_state = std::move(state);
    return run;
}

double phase_track(std::span<const EvolutionRecord> records, double t_max) {
    std::vector<double> t;
    std::vector<double> phase;
    double unwrapped = 0.0;
    for (std::size_t i = 0; i < records.size() && records[i].t <= t_max * (1.0 + 1e-12); ++i) {
        if (!(records[i].amp0 > 0.0)) throw PhaseUnwrapFailure("phase_track: w(t, 0) vanishes at t = " + std::to_string(records[i].t));
        if (i == 0) {
            unwrapped = records[0].phase0;
        } else {
            const double d = std::remainder(records[i].phase0 - records[i - 1].phase0, 2.0 * std::numbers::pi);
            if (std::abs(d) > 0.5 * std::numbers::pi) {
                throw PhaseUnwrapFailure("phase_track: phase jumps by " + std::to_string(d) + " between samples at t = " +
                                         std::to_string(records[i].t) + "; record more often or reduce dt");
            }
            unwrapped += d;
        }
        t.push_back(records[i].t);
        phase.push_back(unwrapped);
    }
    if (t.size() < 3) throw PhaseUnwrapFailure("phase_track: fewer than three samples in [0, t_max]");
    const double n = static_cast<double>(t.size());
    double tm = 0.0;
    double pm = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        tm += t[i];
        pm += phase[i];
    }
    tm /= n;
    pm /= n;
    double stt = 0.0;
    double stp = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        stt += (t[i] - tm) * (t[i] - tm);
        stp += (t[i] - tm) * (phase[i] - pm);
    }
    return -stp / stt;
}

double sigma_from_p(int p) {
    if (p < 2) throw DomainError("evolution: p must be >= 2, got p = " + std::to_string(p));
    return 0.5 * (p - 1);
}

ComplexLatticeVector to_complex(const LatticeVector& v, double scale) {
    ComplexLatticeVector out(v.truncation());
    for (std::size_t x = 0; x < v.size(); ++x) out[x] = scale * v[x];
    return out;
}

ComplexLatticeVector delta_at_origin(std::size_t truncation) {
    ComplexLatticeVector out(truncation);
    out[0] = 1.0;
    return out;
}

ComplexLatticeVector gaussian_profile(std::size_t truncation, double center, double width, double amplitude) {
    if (!(width > 0.0)) throw DomainError("gaussian: width must be positive");
    ComplexLatticeVector out(truncation);
    for (std::size_t x = 0; x <= truncation; ++x) {
        const double z = (static_cast<double>(x) - center) / width;
        out[x] = amplitude * std::exp(-0.5 * z * z);
    }
    return out;
}

}  // namespace ncsoliton::dnls
