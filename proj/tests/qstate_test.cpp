#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "qseq/codebook.hpp"
#include "qseq/qstate.hpp"
#include "qseq/rng.hpp"
#include "test_support.hpp"

using namespace qseq;

namespace {

StateVector state_from(const std::array<refq::cd, 4>& amps) {
    return StateVector::from_amplitudes({amps[0], amps[1], amps[2], amps[3]});
}

StateVector a_plus() { return state_from(refq::states()[0]); }
StateVector a_minus() { return state_from(refq::states()[1]); }
StateVector b_plus() { return state_from(refq::states()[2]); }
StateVector c_plus() { return state_from(refq::states()[4]); }
StateVector d_plus() { return state_from(refq::states()[6]); }

}  // namespace

TEST_CASE("make_state normalizes and keeps basis vectors") {
    const StateVector basis = StateVector::from_amplitudes({1.0, 0.0, 0.0, 0.0});
    CHECK(basis.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(basis[0].real() == doctest::Approx(1.0));

    const StateVector scaled = StateVector::from_amplitudes({2.0, 0.0, 0.0, 0.0});
    CHECK(same_up_to_phase(scaled, basis));
    CHECK(scaled[0].real() == doctest::Approx(1.0).epsilon(1e-12));

    const StateVector ap = a_plus();
    CHECK(ap[0].real() == doctest::Approx(refq::kInvSqrt2).epsilon(1e-15));
    CHECK(ap[2].real() == doctest::Approx(refq::kInvSqrt2).epsilon(1e-15));
}

TEST_CASE("make_state rejects degenerate input") {
    CHECK_THROWS_AS(StateVector::from_amplitudes({0.0, 0.0, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(StateVector::from_amplitudes({}), std::invalid_argument);
    const double nan = std::nan("");
    CHECK_THROWS_AS(StateVector::from_amplitudes({nan, 0.0}), std::invalid_argument);
}

TEST_CASE("inner products match the hand-expanded table") {
    CHECK(std::abs(inner(a_plus(), a_minus())) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(overlap2(a_plus(), b_plus()) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(std::abs(inner(a_plus(), a_plus()) - Amplitude{1.0, 0.0}) < 1e-12);

    // Conjugate linearity in the first argument.
    const StateVector psi = StateVector::from_amplitudes({{0.5, 0.5}, 0.0, {0.5, -0.5}, 0.0});
    const Amplitude lhs = inner(apply_phase(psi, Amplitude{0.0, 1.0}), a_plus());
    const Amplitude rhs = std::conj(Amplitude{0.0, 1.0}) * inner(psi, a_plus());
    CHECK(std::abs(lhs - rhs) < 1e-12);

    const StateVector small = StateVector::from_amplitudes({1.0});
    CHECK_THROWS_AS(inner(small, a_plus()), std::invalid_argument);
}

TEST_CASE("analyzer projectors reproduce the published statistics") {
    const Projector pa = projector_pa();
    const Projector pc = projector_pc();

    // Positive with a priori probability 1/4 on the other family's Tails states.
    CHECK(born_probability(pa, d_plus()) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(born_probability(pc, b_plus()) == doctest::Approx(0.25).epsilon(1e-12));
    // Null with a priori probability 1 on the own-family Tails states.
    CHECK(born_probability(pa, b_plus()) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(born_probability(pc, d_plus()) == doctest::Approx(0.0).epsilon(1e-12));
    // Heads states fire their matching analyzer half the time.
    CHECK(born_probability(pa, a_plus()) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(born_probability(pc, c_plus()) == doctest::Approx(0.5).epsilon(1e-12));

    // Every value agrees with the literal-matrix reference.
    for (int i = 0; i < 8; ++i) {
        const StateVector psi = state_from(refq::states()[i]);
        CHECK(born_probability(pa, psi) ==
              doctest::Approx(refq::born(refq::pa(), refq::states()[i])).epsilon(1e-12));
        CHECK(born_probability(pc, psi) ==
              doctest::Approx(refq::born(refq::pc(), refq::states()[i])).epsilon(1e-12));
    }
}

TEST_CASE("projector validation and complement") {
    const Projector pa = projector_pa();
    const Projector id_minus = pa.complement();
    const StateVector psi = c_plus();
    CHECK(born_probability(pa, psi) + born_probability(id_minus, psi) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // Not idempotent: 0.5·I on a 2-dim block.
    std::vector<Amplitude> half(16, Amplitude{0.0, 0.0});
    half[0] = 0.5;
    half[5] = 0.5;
    CHECK_THROWS_AS(Projector(4, half), std::invalid_argument);
}

TEST_CASE("born + complement born is one for random states") {
    Rng rng(321);
    const Projector pa = projector_pa();
    const Projector pc = projector_pc();
    const Projector ca = pa.complement();
    const Projector cc = pc.complement();
    for (int i = 0; i < 200; ++i) {
        std::vector<Amplitude> amps(4);
        for (Amplitude& a : amps) a = Amplitude{rng.uniform01() - 0.5, rng.uniform01() - 0.5};
        const StateVector psi = StateVector::from_amplitudes(std::move(amps));
        CHECK(born_probability(pa, psi) + born_probability(ca, psi) ==
              doctest::Approx(1.0).epsilon(1e-12));
        CHECK(born_probability(pc, psi) + born_probability(cc, psi) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("measure never samples an impossible branch") {
    Rng rng(7);
    const Projector pa = projector_pa();
    const Projector pc = projector_pc();

    for (int i = 0; i < 2000; ++i) {
        // P_s^C annihilates D+; the null branch leaves the state fixed.
        const MeasurementOutcome null_fixed = measure(pc, d_plus(), rng);
        CHECK(null_fixed.result == MeasureResult::Null);
        CHECK(same_up_to_phase(null_fixed.post_state, d_plus()));

        const MeasurementOutcome null_b = measure(pa, b_plus(), rng);
        CHECK(null_b.result == MeasureResult::Null);
        CHECK(same_up_to_phase(null_b.post_state, b_plus()));
    }
}

TEST_CASE("measure null branch renormalizes the projected remainder") {
    Rng rng(11);
    const Projector pa = projector_pa();
    // (I − P_s^A)|D+⟩ ∝ (1/√2)|↔⟩r + (1/2)|↕⟩s.
    const StateVector expected =
        StateVector::from_amplitudes({refq::kInvSqrt2, 0.0, 0.0, 0.5});
    bool saw_null = false;
    for (int i = 0; i < 64 && !saw_null; ++i) {
        const MeasurementOutcome mo = measure(pa, d_plus(), rng);
        if (mo.result == MeasureResult::Null) {
            saw_null = true;
            CHECK(same_up_to_phase(mo.post_state, expected));
            CHECK(mo.post_state.norm() == doctest::Approx(1.0).epsilon(1e-12));
        } else {
            // Positive branch projects onto |↔⟩s.
            const StateVector horiz_s = StateVector::from_amplitudes({0.0, 0.0, 1.0, 0.0});
            CHECK(same_up_to_phase(mo.post_state, horiz_s));
        }
    }
    CHECK(saw_null);
}

TEST_CASE("measure sampling frequency tracks the Born probability") {
    Rng rng(123);
    const Projector pa = projector_pa();
    const StateVector psi = d_plus();
    const double p = born_probability(pa, psi);
    const int trials = 100000;
    int positives = 0;
    for (int i = 0; i < trials; ++i) {
        if (measure(pa, psi, rng).result == MeasureResult::Positive) ++positives;
    }
    const double freq = static_cast<double>(positives) / trials;
    CHECK(std::abs(freq - p) <= refq::four_sigma(p, trials));
}

TEST_CASE("expected_state_test outcomes") {
    Rng rng(42);
    for (int i = 0; i < 500; ++i) {
        CHECK(expected_state_test(a_plus(), a_plus(), rng).result == TestResult::Pass);
        CHECK(expected_state_test(a_plus(), a_minus(), rng).result == TestResult::Fail);
    }

    // Cross-family pass probability (1 + 1/√2)²/4.
    const double expected_p = refq::overlap2(refq::states()[4], refq::states()[0]);
    CHECK(expected_pass_probability(c_plus(), a_plus()) ==
          doctest::Approx(expected_p).epsilon(1e-12));
    CHECK(expected_p == doctest::Approx(0.72855339059327373).epsilon(1e-12));

    const int trials = 100000;
    int passes = 0;
    for (int i = 0; i < trials; ++i) {
        if (expected_state_test(c_plus(), a_plus(), rng).result == TestResult::Pass) ++passes;
    }
    const double freq = static_cast<double>(passes) / trials;
    CHECK(std::abs(freq - expected_p) <= refq::four_sigma(expected_p, trials));
}

TEST_CASE("mix builds the published eavesdropper matrix") {
    std::vector<std::pair<StateVector, double>> family0;
    std::vector<std::pair<StateVector, double>> family1;
    for (int i = 0; i < 4; ++i) {
        family0.emplace_back(state_from(refq::states()[i]), 0.25);
        family1.emplace_back(state_from(refq::states()[4 + i]), 0.25);
    }
    const DensityMatrix rho0 = mix(family0);
    const DensityMatrix rho1 = mix(family1);
    rho0.validate();
    rho1.validate();

    const double expected_diag[4] = {0.5, 0.0, 0.25, 0.25};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const double want = i == j ? expected_diag[i] : 0.0;
            CHECK(std::abs(rho0.at(i, j) - Amplitude{want, 0.0}) < 1e-12);
            CHECK(std::abs(rho0.at(i, j) - rho1.at(i, j)) < 1e-12);
        }
    }

    const DensityMatrix pure = mix({{a_plus(), 1.0}});
    CHECK(std::abs(pure.at(0, 2) - Amplitude{0.5, 0.0}) < 1e-12);

    CHECK_THROWS_AS(mix({{a_plus(), 0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(mix({{a_plus(), -0.5}, {a_minus(), 1.5}}), std::invalid_argument);
}

TEST_CASE("trace distance basics") {
    const DensityMatrix rho = pure_density(a_plus());
    CHECK(trace_distance(rho, rho) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(trace_distance(pure_density(a_plus()), pure_density(a_minus())) ==
          doctest::Approx(1.0).epsilon(1e-9));

    std::vector<std::pair<StateVector, double>> family0;
    std::vector<std::pair<StateVector, double>> family1;
    for (int i = 0; i < 4; ++i) {
        family0.emplace_back(state_from(refq::states()[i]), 0.25);
        family1.emplace_back(state_from(refq::states()[4 + i]), 0.25);
    }
    CHECK(trace_distance(mix(family0), mix(family1)) < 1e-12);
}

namespace {

DensityMatrix random_density(Rng& rng) {
    std::vector<std::pair<StateVector, double>> ensemble;
    double weights[3];
    double total = 0.0;
    for (double& w : weights) {
        w = rng.uniform01() + 1e-3;
        total += w;
    }
    for (double w : weights) {
        std::vector<Amplitude> amps(4);
        for (Amplitude& a : amps) a = Amplitude{rng.uniform01() - 0.5, rng.uniform01() - 0.5};
        ensemble.emplace_back(StateVector::from_amplitudes(std::move(amps)), w / total);
    }
    return mix(ensemble);
}

}  // namespace

TEST_CASE("trace distance is symmetric and satisfies the triangle inequality") {
    Rng rng(2024);
    for (int i = 0; i < 60; ++i) {
        const DensityMatrix a = random_density(rng);
        const DensityMatrix b = random_density(rng);
        const DensityMatrix c = random_density(rng);
        const double ab = trace_distance(a, b);
        const double ba = trace_distance(b, a);
        CHECK(std::abs(ab - ba) < 1e-12);
        CHECK(ab <= trace_distance(a, c) + trace_distance(c, b) + 1e-9);
        CHECK(ab >= -1e-12);
        CHECK(ab <= 1.0 + 1e-12);
    }
}

TEST_CASE("hermitian eigenvalues agree with known spectra") {
    // Pure projector: eigenvalues {1, 0, 0, 0}.
    const DensityMatrix pure = pure_density(c_plus());
    std::vector<Amplitude> entries(pure.entries().begin(), pure.entries().end());
    const std::vector<double> eigs = hermitian_eigenvalues(4, std::move(entries));
    CHECK(eigs.back() == doctest::Approx(1.0).epsilon(1e-10));
    for (std::size_t i = 0; i + 1 < eigs.size(); ++i) {
        CHECK(std::abs(eigs[i]) < 1e-10);
    }

    // Trace and Frobenius norm are preserved for a random Hermitian matrix.
    Rng rng(5);
    const std::size_t dim = 6;
    std::vector<Amplitude> h(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        h[i * dim + i] = Amplitude{rng.uniform01() - 0.5, 0.0};
        for (std::size_t j = i + 1; j < dim; ++j) {
            const Amplitude v{rng.uniform01() - 0.5, rng.uniform01() - 0.5};
            h[i * dim + j] = v;
            h[j * dim + i] = std::conj(v);
        }
    }
    double trace = 0.0;
    double frob2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        trace += h[i * dim + i].real();
        for (std::size_t j = 0; j < dim; ++j) frob2 += std::norm(h[i * dim + j]);
    }
    const std::vector<double> spectrum = hermitian_eigenvalues(dim, std::move(h));
    double eig_sum = 0.0;
    double eig_sq = 0.0;
    for (double e : spectrum) {
        eig_sum += e;
        eig_sq += e * e;
    }
    CHECK(eig_sum == doctest::Approx(trace).epsilon(1e-10));
    CHECK(eig_sq == doctest::Approx(frob2).epsilon(1e-10));
}

TEST_CASE("tensor products") {
    const StateVector basis0 = StateVector::from_amplitudes({1.0, 0.0, 0.0, 0.0});
    const StateVector big = tensor(basis0, basis0);
    CHECK(big.dim() == 16);
    CHECK(big[0].real() == doctest::Approx(1.0));
    CHECK(big.norm() == doctest::Approx(1.0).epsilon(1e-12));

    const StateVector aa = tensor(a_plus(), a_plus());
    CHECK(aa[0].real() == doctest::Approx(0.5).epsilon(1e-12));

    // Scale guard: 4^5 ⊗ 4 = 4096 passes, one more factor does not.
    StateVector chain = basis0;
    for (int i = 0; i < 5; ++i) chain = tensor(chain, basis0);
    CHECK(chain.dim() == 4096);
    CHECK_THROWS_AS(tensor(chain, basis0), std::invalid_argument);

    const StateVector pair2 = StateVector::from_amplitudes({1.0, 0.0});
    CHECK_THROWS_AS(tensor(pair2, basis0), std::invalid_argument);
}

TEST_CASE("public predicates ignore global phase") {
    const Projector pa = projector_pa();
    const Amplitude phases[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (const Amplitude& phase : phases) {
        const StateVector rotated = apply_phase(d_plus(), phase);
        CHECK(born_probability(pa, rotated) ==
              doctest::Approx(born_probability(pa, d_plus())).epsilon(1e-12));
        CHECK(expected_pass_probability(c_plus(), rotated) ==
              doctest::Approx(expected_pass_probability(c_plus(), d_plus())).epsilon(1e-12));
        CHECK(trace_distance(pure_density(rotated), pure_density(d_plus())) < 1e-9);
        CHECK(same_up_to_phase(rotated, d_plus()));
    }
}
