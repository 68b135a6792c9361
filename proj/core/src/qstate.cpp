#include "qseq/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qseq {

namespace {

bool is_power_of_four(std::size_t n) {
    if (n == 0) return false;
    while (n % 4 == 0) n /= 4;
    return n == 1;
}

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

double clamp_probability(double p, const char* what) {
    if (p < -kProbTol || p > 1.0 + kProbTol) {
        throw std::logic_error(std::string(what) + ": probability outside [0,1]");
    }
    return std::min(1.0, std::max(0.0, p));
}

}  // namespace

StateVector StateVector::from_amplitudes(std::vector<Amplitude> amps) {
    require(!amps.empty(), "state: empty amplitude list");
    double norm2 = 0.0;
    for (const Amplitude& a : amps) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw std::invalid_argument("state: non-finite amplitude");
        }
        norm2 += std::norm(a);
    }
    if (norm2 <= 0.0) throw std::invalid_argument("state: all-zero amplitude list");
    const double inv = 1.0 / std::sqrt(norm2);
    for (Amplitude& a : amps) a *= inv;
    return StateVector(std::move(amps));
}

double StateVector::norm() const {
    double norm2 = 0.0;
    for (const Amplitude& a : amps_) norm2 += std::norm(a);
    return std::sqrt(norm2);
}

Amplitude inner(const StateVector& a, const StateVector& b) {
    require(a.dim() == b.dim(), "inner: dimension mismatch");
    Amplitude acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

double overlap2(const StateVector& a, const StateVector& b) {
    return clamp_probability(std::norm(inner(a, b)), "overlap2");
}

bool same_up_to_phase(const StateVector& a, const StateVector& b, double tol) {
    return std::abs(overlap2(a, b) - 1.0) <= tol;
}

StateVector apply_phase(const StateVector& psi, Amplitude unit_phase) {
    require(std::abs(std::abs(unit_phase) - 1.0) <= kEntryTol, "apply_phase: non-unit phase");
    std::vector<Amplitude> amps(psi.amplitudes().begin(), psi.amplitudes().end());
    for (Amplitude& a : amps) a *= unit_phase;
    return StateVector::from_amplitudes(std::move(amps));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    require(is_power_of_four(a.dim()) && is_power_of_four(b.dim()),
            "tensor: dims must be powers of 4");
    const std::size_t dim = a.dim() * b.dim();
    require(dim <= 4096, "tensor: product dim exceeds 4096");
    std::vector<Amplitude> amps(dim);
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) {
            amps[i * b.dim() + j] = a[i] * b[j];
        }
    }
    return StateVector(std::move(amps));
}

DensityMatrix::DensityMatrix(std::size_t dim, std::vector<Amplitude> entries)
    : dim_(dim), entries_(std::move(entries)) {
    require(dim_ > 0 && entries_.size() == dim_ * dim_, "density: bad entry count");
}

double DensityMatrix::trace_real() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += at(i, i).real();
    return t;
}

void DensityMatrix::validate() const {
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = i; j < dim_; ++j) {
            if (std::abs(at(i, j) - std::conj(at(j, i))) > kEntryTol) {
                throw std::logic_error("density: not Hermitian");
            }
        }
    }
    if (std::abs(trace_real() - 1.0) > kEntryTol) {
        throw std::logic_error("density: trace != 1");
    }
    std::vector<Amplitude> copy(entries_.begin(), entries_.end());
    const std::vector<double> eigs = hermitian_eigenvalues(dim_, std::move(copy));
    if (!eigs.empty() && eigs.front() < kEigenFloor) {
        throw std::logic_error("density: negative eigenvalue");
    }
}

DensityMatrix mix(const std::vector<std::pair<StateVector, double>>& weighted) {
    require(!weighted.empty(), "mix: empty ensemble");
    const std::size_t dim = weighted.front().first.dim();
    double total = 0.0;
    for (const auto& [psi, w] : weighted) {
        require(psi.dim() == dim, "mix: dimension mismatch");
        require(w >= 0.0, "mix: negative weight");
        total += w;
    }
    require(std::abs(total - 1.0) <= kEntryTol, "mix: weights must sum to 1");
    std::vector<Amplitude> entries(dim * dim, Amplitude{0.0, 0.0});
    for (const auto& [psi, w] : weighted) {
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                entries[i * dim + j] += w * psi[i] * std::conj(psi[j]);
            }
        }
    }
    // Restore exact hermiticity lost to rounding.
    for (std::size_t i = 0; i < dim; ++i) {
        entries[i * dim + i] = Amplitude{entries[i * dim + i].real(), 0.0};
        for (std::size_t j = i + 1; j < dim; ++j) {
            const Amplitude avg = 0.5 * (entries[i * dim + j] + std::conj(entries[j * dim + i]));
            entries[i * dim + j] = avg;
            entries[j * dim + i] = std::conj(avg);
        }
    }
    return DensityMatrix(dim, std::move(entries));
}

DensityMatrix pure_density(const StateVector& psi) { return mix({{psi, 1.0}}); }

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    const std::size_t dim = a.dim() * b.dim();
    require(dim <= 4096, "tensor: product dim exceeds 4096");
    std::vector<Amplitude> entries(dim * dim);
    for (std::size_t i1 = 0; i1 < a.dim(); ++i1)
        for (std::size_t j1 = 0; j1 < a.dim(); ++j1)
            for (std::size_t i2 = 0; i2 < b.dim(); ++i2)
                for (std::size_t j2 = 0; j2 < b.dim(); ++j2)
                    entries[(i1 * b.dim() + i2) * dim + (j1 * b.dim() + j2)] =
                        a.at(i1, j1) * b.at(i2, j2);
    return DensityMatrix(dim, std::move(entries));
}

std::vector<double> hermitian_eigenvalues(std::size_t dim, std::vector<Amplitude> a) {
    require(a.size() == dim * dim, "eigenvalues: bad entry count");
    if (dim == 1) return {a[0].real()};

    auto at = [&](std::size_t i, std::size_t j) -> Amplitude& { return a[i * dim + j]; };

    double scale = 0.0;
    for (const Amplitude& x : a) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) return std::vector<double>(dim, 0.0);
    const double stop = 1e-14 * scale;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < dim; ++p)
            for (std::size_t q = p + 1; q < dim; ++q) off = std::max(off, std::abs(at(p, q)));
        if (off <= stop) break;

        for (std::size_t p = 0; p + 1 < dim; ++p) {
            for (std::size_t q = p + 1; q < dim; ++q) {
                const double beta = std::abs(at(p, q));
                if (beta <= stop * 1e-2) continue;
                const Amplitude phase = at(p, q) / beta;
                const double app = at(p, p).real();
                const double aqq = at(q, q).real();
                const double tau = (aqq - app) / (2.0 * beta);
                // Smaller root of t² − 2τt − 1 = 0; zeroes the (p,q) entry.
                const double t = (tau >= 0.0 ? -1.0 : 1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // Columns: (Ap, Aq) ← (c·Ap + s·conj(φ)·Aq, −s·φ·Ap + c·Aq)
                for (std::size_t k = 0; k < dim; ++k) {
                    const Amplitude akp = at(k, p);
                    const Amplitude akq = at(k, q);
                    at(k, p) = c * akp + s * std::conj(phase) * akq;
                    at(k, q) = -s * phase * akp + c * akq;
                }
                // Rows: (Ap·, Aq·) ← (c·Ap· + s·φ·Aq·, −s·conj(φ)·Ap· + c·Aq·)
                for (std::size_t k = 0; k < dim; ++k) {
                    const Amplitude apk = at(p, k);
                    const Amplitude aqk = at(q, k);
                    at(p, k) = c * apk + s * phase * aqk;
                    at(q, k) = -s * std::conj(phase) * apk + c * aqk;
                }
            }
        }
    }

    std::vector<double> eigs(dim);
    for (std::size_t i = 0; i < dim; ++i) eigs[i] = at(i, i).real();
    std::sort(eigs.begin(), eigs.end());
    return eigs;
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require(rho.dim() == sigma.dim(), "trace_distance: dimension mismatch");
    const std::size_t dim = rho.dim();
    std::vector<Amplitude> diff(dim * dim);
    for (std::size_t i = 0; i < dim * dim; ++i) diff[i] = rho.entries()[i] - sigma.entries()[i];
    const std::vector<double> eigs = hermitian_eigenvalues(dim, std::move(diff));
    double sum = 0.0;
    for (double e : eigs) sum += std::abs(e);
    return std::min(1.0, 0.5 * sum);
}

Projector::Projector(std::size_t dim, std::vector<Amplitude> entries)
    : dim_(dim), entries_(std::move(entries)) {
    require(dim_ > 0 && entries_.size() == dim_ * dim_, "projector: bad entry count");
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            if (std::abs(at(i, j) - std::conj(at(j, i))) > kEntryTol) {
                throw std::invalid_argument("projector: not Hermitian");
            }
            Amplitude pij{0.0, 0.0};
            for (std::size_t k = 0; k < dim_; ++k) pij += at(i, k) * at(k, j);
            if (std::abs(pij - at(i, j)) > 10 * kEntryTol) {
                throw std::invalid_argument("projector: not idempotent");
            }
        }
    }
}

Projector Projector::onto(const StateVector& psi) {
    const std::size_t dim = psi.dim();
    std::vector<Amplitude> entries(dim * dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) entries[i * dim + j] = psi[i] * std::conj(psi[j]);
    return Projector(dim, std::move(entries));
}

Projector Projector::complement() const {
    std::vector<Amplitude> entries(dim_ * dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            entries[i * dim_ + j] = (i == j ? Amplitude{1.0, 0.0} : Amplitude{0.0, 0.0}) - at(i, j);
    return Projector(dim_, std::move(entries));
}

std::vector<Amplitude> Projector::apply(const StateVector& psi) const {
    require(psi.dim() == dim_, "projector: dimension mismatch");
    std::vector<Amplitude> out(dim_, Amplitude{0.0, 0.0});
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) out[i] += at(i, j) * psi[j];
    return out;
}

Projector projector_pa() {
    std::vector<Amplitude> entries(16, Amplitude{0.0, 0.0});
    entries[2 * 4 + 2] = 1.0;
    return Projector(4, std::move(entries));
}

Projector projector_pc() {
    std::vector<Amplitude> entries(16, Amplitude{0.0, 0.0});
    entries[2 * 4 + 2] = 0.5;
    entries[2 * 4 + 3] = 0.5;
    entries[3 * 4 + 2] = 0.5;
    entries[3 * 4 + 3] = 0.5;
    return Projector(4, std::move(entries));
}

double born_probability(const Projector& p, const StateVector& psi) {
    require(p.dim() == psi.dim(), "born_probability: dimension mismatch");
    const std::vector<Amplitude> pv = p.apply(psi);
    Amplitude acc{0.0, 0.0};
    for (std::size_t i = 0; i < psi.dim(); ++i) acc += std::conj(psi[i]) * pv[i];
    return clamp_probability(acc.real(), "born_probability");
}

namespace {

StateVector renormalized(std::vector<Amplitude> amps) {
    return StateVector::from_amplitudes(std::move(amps));
}

}  // namespace

MeasurementOutcome measure(const Projector& p, const StateVector& psi, Rng& rng) {
    const double prob = born_probability(p, psi);
    bool positive;
    if (prob < kProbTol) {
        positive = false;
    } else if (prob > 1.0 - kProbTol) {
        positive = true;
    } else {
        positive = rng.uniform01() < prob;
    }
    std::vector<Amplitude> projected = p.apply(psi);
    if (positive) {
        return {MeasureResult::Positive, renormalized(std::move(projected))};
    }
    std::vector<Amplitude> rest(psi.dim());
    for (std::size_t i = 0; i < psi.dim(); ++i) rest[i] = psi[i] - projected[i];
    return {MeasureResult::Null, renormalized(std::move(rest))};
}

double expected_pass_probability(const StateVector& expected, const StateVector& psi) {
    return overlap2(expected, psi);
}

ExpectedStateOutcome expected_state_test(const StateVector& expected, const StateVector& psi,
                                         Rng& rng) {
    require(expected.dim() == psi.dim(), "expected_state_test: dimension mismatch");
    const Amplitude coeff = inner(expected, psi);
    const double prob = clamp_probability(std::norm(coeff), "expected_state_test");
    bool pass;
    if (prob < kProbTol) {
        pass = false;
    } else if (prob > 1.0 - kProbTol) {
        pass = true;
    } else {
        pass = rng.uniform01() < prob;
    }
    if (pass) {
        std::vector<Amplitude> amps(expected.amplitudes().begin(), expected.amplitudes().end());
        const Amplitude phase = coeff / std::abs(coeff);
        for (Amplitude& a : amps) a *= phase;
        return {TestResult::Pass, renormalized(std::move(amps))};
    }
    std::vector<Amplitude> rest(psi.dim());
    for (std::size_t i = 0; i < psi.dim(); ++i) rest[i] = psi[i] - coeff * expected[i];
    return {TestResult::Fail, renormalized(std::move(rest))};
}

}  // namespace qseq
