#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qseq/rng.hpp"

namespace qseq {

using Amplitude = std::complex<double>;

// Tolerances used throughout the state layer.
inline constexpr double kNormTol = 1e-9;    // state normalization
inline constexpr double kEntryTol = 1e-12;  // hermiticity / trace / entry comparisons
inline constexpr double kProbTol = 1e-12;   // probability clamping; branches below this never fire
inline constexpr double kEigenFloor = -1e-10;

// Normalized pure state on a 4^k-dimensional path⊗polarization space.
// Basis order for dim 4: 0 = |↔⟩r, 1 = |↕⟩r, 2 = |↔⟩s, 3 = |↕⟩s.
// Global phase is not canonicalized; two states are "equal" when |⟨a|b⟩|² = 1.
class StateVector {
public:
    // Normalizes the input. Throws std::invalid_argument on a zero or
    // non-finite amplitude list.
    static StateVector from_amplitudes(std::vector<Amplitude> amps);

    std::size_t dim() const { return amps_.size(); }
    const Amplitude& operator[](std::size_t i) const { return amps_[i]; }
    std::span<const Amplitude> amplitudes() const { return amps_; }

    double norm() const;

private:
    explicit StateVector(std::vector<Amplitude> amps) : amps_(std::move(amps)) {}
    std::vector<Amplitude> amps_;

    friend StateVector tensor(const StateVector&, const StateVector&);
    friend class Projector;
};

// ⟨a|b⟩, conjugate-linear in the first argument. Throws on dim mismatch.
Amplitude inner(const StateVector& a, const StateVector& b);

// |⟨a|b⟩|², clamped to [0,1].
double overlap2(const StateVector& a, const StateVector& b);

// Equality up to a global phase: |⟨a|b⟩|² = 1 within tol.
bool same_up_to_phase(const StateVector& a, const StateVector& b, double tol = kNormTol);

// The same ray, multiplied by a unit phase. Used by phase-invariance checks.
StateVector apply_phase(const StateVector& psi, Amplitude unit_phase);

// Kronecker product, first factor major. Dims must be powers of 4 and the
// product dim is capped at 4096.
StateVector tensor(const StateVector& a, const StateVector& b);

class DensityMatrix {
public:
    DensityMatrix(std::size_t dim, std::vector<Amplitude> entries);

    std::size_t dim() const { return dim_; }
    const Amplitude& at(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
    std::span<const Amplitude> entries() const { return entries_; }

    double trace_real() const;

    // Checks hermiticity (1e-12 entrywise), unit trace (1e-12) and eigenvalue
    // floor (−1e-10). Throws std::logic_error with a diagnostic on violation.
    void validate() const;

private:
    std::size_t dim_;
    std::vector<Amplitude> entries_;
};

// Σ wᵢ |ψᵢ⟩⟨ψᵢ|. Weights must be ≥ 0 and sum to 1 within 1e-12.
DensityMatrix mix(const std::vector<std::pair<StateVector, double>>& weighted);

// |ψ⟩⟨ψ|.
DensityMatrix pure_density(const StateVector& psi);

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// (1/2)Σ|eig(ρ−σ)|. Symmetric, zero iff ρ = σ. Intended for small dims (the
// dense eigensolver contract covers dim ≤ 64; larger mixtures go through the
// ensemble route in the analysis layer).
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// Eigenvalues of a Hermitian matrix given in row-major order, ascending.
// Cyclic complex Jacobi; accurate to well below 1e-9 at the dims used here.
std::vector<double> hermitian_eigenvalues(std::size_t dim, std::vector<Amplitude> entries);

// Hermitian idempotent measurement operator.
class Projector {
public:
    // Validates hermiticity and idempotence (1e-12).
    Projector(std::size_t dim, std::vector<Amplitude> entries);

    // Rank-1 projector |ψ⟩⟨ψ|.
    static Projector onto(const StateVector& psi);

    std::size_t dim() const { return dim_; }
    const Amplitude& at(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }

    Projector complement() const;  // I − P

    // P|ψ⟩, unnormalized.
    std::vector<Amplitude> apply(const StateVector& psi) const;

private:
    std::size_t dim_;
    std::vector<Amplitude> entries_;
};

// Bob's two analyzer settings at the end of path s (dim 4).
// P_s^A projects onto |↔⟩s; P_s^C projects onto |↗⟩s = (|↔⟩s + |↕⟩s)/√2.
Projector projector_pa();
Projector projector_pc();

// ⟨ψ|P|ψ⟩ clamped to [0,1] at 1e-12 tolerance. Throws on dim mismatch.
double born_probability(const Projector& p, const StateVector& psi);

enum class MeasureResult { Positive, Null };

struct MeasurementOutcome {
    MeasureResult result;
    StateVector post_state;
};

// Projective measurement {P, I−P} with Born-rule sampling. Branches with
// probability below 1e-12 are never taken, so a zero-probability branch can
// never be sampled and a near-zero vector is never renormalized.
MeasurementOutcome measure(const Projector& p, const StateVector& psi, Rng& rng);

enum class TestResult { Pass, Fail };

struct ExpectedStateOutcome {
    TestResult result;
    StateVector post_state;
};

// Pass probability for expected_state_test, |⟨expected|ψ⟩|².
double expected_pass_probability(const StateVector& expected, const StateVector& psi);

// Binary measurement {|expected⟩⟨expected|, complement}.
ExpectedStateOutcome expected_state_test(const StateVector& expected, const StateVector& psi,
                                         Rng& rng);

}  // namespace qseq
