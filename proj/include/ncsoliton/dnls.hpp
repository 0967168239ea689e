#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ncsoliton/kernels.hpp"
#include "ncsoliton/lattice_vector.hpp"
#include "ncsoliton/operator.hpp"

namespace ncsoliton::dnls {

/// Eigendecomposition of a truncated L0; shareable read-only across runs
/// at the same truncation.
struct SpectralBasis {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd vectors;  // orthonormal columns

    std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
    static SpectralBasis of(const SymmetricTridiagonal& m);
};

/// exp(-i dt L0) on the truncation, stored densely.
class LinearPropagator {
public:
    LinearPropagator(const SpectralBasis& basis, double dt);

    double dt() const { return dt_; }
    std::size_t size() const { return u_.rows; }
    const kernels::ComplexMatrix& matrix() const { return u_; }

    void apply(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

    /// exp(+i dt L0), the exact inverse.
    LinearPropagator reversed() const;

private:
    LinearPropagator() = default;
    double dt_ = 0.0;
    kernels::ComplexMatrix u_;
};

struct EvolutionState {
    ComplexLatticeVector w;
    double t = 0.0;
    double dt = 0.0;
    double sigma = 1.0;
    double ell2_initial = 0.0;
    double ell2_current = 0.0;

    /// Checks |w(X)| < 1e-12 ||w||_inf (TailLeak otherwise).
    static EvolutionState start(ComplexLatticeVector w0, double dt, double sigma);
};

struct StepOptions {
    bool linear_only = false;
    double leak_threshold = 1e-8;  // TailLeak once |w(X)| > leak_threshold ||w||_inf
};

/// One Strang step: half nonlinear phase, exact linear step, half nonlinear
/// phase. The step length is the propagator's dt (negative when reversed).
EvolutionState step(const EvolutionState& state, const LinearPropagator& propagator, const StepOptions& options = {});

/// In-place form of `step`; `scratch` is resized as needed.
void step_in_place(EvolutionState& state, const LinearPropagator& propagator, const StepOptions& options,
                   std::vector<std::complex<double>>& scratch);

struct EvolutionOptions {
    double dt = 1e-3;
    double t_final = 1.0;
    std::size_t record_every = 1;
    double sigma = 1.0;
    bool linear_only = false;
    double leak_threshold = 1e-8;
    bool keep_snapshots = false;
};

struct EvolutionRecord {
    double t = 0.0;
    double ell2 = 0.0;
    double sup_amp_dev = 0.0;  // sup_x | |w(t,x)| - |w(0,x)| |
    double phase0 = 0.0;       // arg w(t, 0) in (-pi, pi]
    double amp0 = 0.0;         // |w(t, 0)|
};

struct Snapshot {
    double t = 0.0;
    ComplexLatticeVector w;
};

struct EvolutionRun {
    std::vector<EvolutionRecord> records;  // includes t = 0 and the final time
    std::vector<Snapshot> snapshots;
    EvolutionState final_state;
    double max_ell2_drift = 0.0;  // max relative drift over recorded times
};

/// ceil(t_final / dt) steps from w0. `basis` is computed when null.
EvolutionRun evolve(const ComplexLatticeVector& w0, const EvolutionOptions& options,
                    const SpectralBasis* basis = nullptr);

/// zeta_hat = -(slope of the unwrapped arg w(t, 0)) over records with
/// t <= t_max; w(t) = exp(-i zeta t) u. PhaseUnwrapFailure when consecutive
/// samples differ by more than pi/2 or |w(t,0)| vanishes.
double phase_track(std::span<const EvolutionRecord> records, double t_max);

/// sigma = (p-1)/2; half-integer for even p, which start() restricts to real
/// initial data.
double sigma_from_p(int p);

ComplexLatticeVector to_complex(const LatticeVector& v, double scale = 1.0);
ComplexLatticeVector delta_at_origin(std::size_t truncation);
ComplexLatticeVector gaussian_profile(std::size_t truncation, double center, double width, double amplitude = 1.0);

}  // namespace ncsoliton::dnls
