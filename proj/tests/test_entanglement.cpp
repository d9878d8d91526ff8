#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cavityent/entanglement.hpp"
#include "cavityent/errors.hpp"
#include "cavityent/protocol.hpp"
#include "support.hpp"

using namespace cavityent;

namespace {

DensityMatrix4 projector(const Eigen::Vector4cd& v) {
    return v * v.adjoint();
}

} // namespace

TEST_SUITE("entanglement") {

TEST_CASE("Wootters concurrence of reference states") {
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(wootters(projector(Eigen::Vector4cd(r, 0, 0, r))) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(wootters(projector(Eigen::Vector4cd(0, r, complex(0, r), 0))) == doctest::Approx(1.0).epsilon(1e-14));

    const Eigen::Vector2cd a(0.6, complex(0.0, 0.8));
    const Eigen::Vector2cd b(std::cos(0.3), std::sin(0.3));
    Eigen::Vector4cd product;
    product << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
    CHECK(wootters(projector(product)) == 0.0);
    CHECK(wootters(DensityMatrix4::Identity() / 4.0) == 0.0);

    // Werner state p |Bell><Bell| + (1 - p) I / 4 has C = max(0, (3p - 1) / 2)
    const DensityMatrix4 bell = projector(Eigen::Vector4cd(r, 0, 0, r));
    for (double p : {0.2, 0.5, 0.8}) {
        const DensityMatrix4 werner = p * bell + (1.0 - p) * DensityMatrix4::Identity() / 4.0;
        CHECK(wootters(werner) == doctest::Approx(std::max(0.0, (3.0 * p - 1.0) / 2.0)).epsilon(1e-12));
    }

    DensityMatrix4 skew = DensityMatrix4::Identity() / 4.0;
    skew(0, 1) = 0.1;
    CHECK_THROWS_AS(wootters(skew), DomainError);
}

TEST_CASE("closed forms at t = 0") {
    const AmplitudePair start{};
    CHECK(concurrence_qubits(0.2, start, start) == doctest::Approx(0.9797958971132712).epsilon(1e-15));
    CHECK(concurrence_reservoirs(0.2, start, start) == 0.0);
    CHECK(concurrence_qubit_own_reservoir(0.2, start) == 0.0);
    CHECK(concurrence_qubits(-0.2, start, start) == concurrence_qubits(0.2, start, start));
}

TEST_CASE("Markovian limits of the closed forms") {
    const double s = 0.2;
    const double gamma_t = -std::log(1.0 - std::sqrt(2.0 / 3.0));
    CHECK(gamma_t == doctest::Approx(1.6955219791146436).epsilon(1e-15));
    const auto markov = [](double gt) {
        const double e = std::exp(-gt / 2.0);
        return AmplitudePair{e, std::sqrt(1.0 - e * e)};
    };
    CHECK(concurrence_qubits(s, markov(gamma_t * (1.0 - 1e-9)), markov(gamma_t * (1.0 - 1e-9))) > 0.0);
    CHECK(concurrence_qubits(s, markov(gamma_t * (1.0 + 1e-9)), markov(gamma_t * (1.0 + 1e-9))) == 0.0);

    CHECK(concurrence_reservoirs(s, markov(60.0), markov(60.0)) == doctest::Approx(std::sqrt(1.0 - s * s)).epsilon(1e-12));

    // maximum of (1 + s)|E F| at |E|^2 = 1/2
    double best = 0.0;
    for (int k = 0; k <= 20000; ++k) {
        best = std::max(best, concurrence_qubit_own_reservoir(s, markov(5.0 * k / 20000.0)));
    }
    CHECK(best == doctest::Approx((1.0 + s) / 2.0).epsilon(1e-8));
}

TEST_CASE("closed forms equal Wootters on the reduced states") {
    testing::Sampler rng(41);
    for (int i = 0; i < 50; ++i) {
        const InitialState init = rng.initial();
        const CavityParams p1 = rng.cavity();
        const CavityParams p2 = rng.cavity();
        const double t = rng.uniform(0.0, 15.0);
        const AmplitudePair a1 = amplitude(p1, t);
        const AmplitudePair a2 = amplitude(p2, t);
        const JointState psi = evolve_state(init, p1, p2, t);
        CHECK(std::abs(wootters(reduce(psi, Subsystem::A1, Subsystem::A2)) - concurrence_qubits(init.s, a1, a2)) < 1e-10);
        CHECK(std::abs(wootters(reduce(psi, Subsystem::R1, Subsystem::R2)) - concurrence_reservoirs(init.s, a1, a2)) <
              1e-10);
        CHECK(std::abs(wootters(reduce(psi, Subsystem::A1, Subsystem::R1)) - concurrence_qubit_own_reservoir(init.s, a1)) <
              1e-10);
        CHECK(std::abs(wootters(reduce(psi, Subsystem::A2, Subsystem::R2)) - concurrence_qubit_own_reservoir(init.s, a2)) <
              1e-10);
    }
}

TEST_CASE("bi-local tangle is 1 - s^2 at all times") {
    for (double s : {1.0, -1.0}) {
        for (double t : {0.0, 1.0, 5.0}) {
            CHECK(std::abs(bilocal_tangle(reduce(evolve_state({s, 0.0}, {1.0, 0.5, 0.0}, {1.0, 2.0, 1.0}, t),
                                                 Subsystem::A1, Subsystem::R1))) < 1e-14);
        }
    }
    for (double t = 0.0; t < 20.0; t += 0.25) {
        const JointState psi = evolve_state({0.3, 0.0}, {1.0, 0.2, 0.3}, {1.5, 0.7, -1.0}, t);
        CHECK(std::abs(bilocal_tangle(reduce(psi, Subsystem::A1, Subsystem::R1)) - 0.91) < 1e-10);
        CHECK(std::abs(bilocal_tangle(reduce(psi, Subsystem::A2, Subsystem::R2)) - 0.91) < 1e-10);
    }
    testing::Sampler rng(42);
    for (int i = 0; i < 10; ++i) {
        const CavityParams p1 = rng.cavity();
        const CavityParams p2 = rng.cavity();
        double lo = 1.0;
        double hi = 0.0;
        for (double t : {0.0, 1.0 / p1.lambda, 5.0 / p1.lambda}) {
            const double tau = bilocal_tangle(reduce(evolve_state({0.2, 0.0}, p1, p2, t), Subsystem::A1, Subsystem::R1));
            lo = std::min(lo, tau);
            hi = std::max(hi, tau);
            CHECK(tau == doctest::Approx(0.96).epsilon(1e-10));
        }
        CHECK(hi - lo < 1e-10);
    }
}

TEST_CASE("cross concurrences") {
    const JointState start = evolve_state({0.2, 0.0}, {1.0, 1.0, 0.0}, {1.0, 1.0, 0.0}, 0.0);
    const CrossConcurrences c0 = cross_concurrences(start);
    CHECK(c0.c_1r2 == 0.0);
    CHECK(c0.c_2r1 == 0.0);
    for (double t : {0.5, 2.0, 9.0}) {
        const CrossConcurrences c = cross_concurrences(evolve_state({1.0, 0.0}, {1.0, 0.4, 0.2}, {0.6, 1.0, 0.0}, t));
        CHECK(c.c_1r2 == 0.0);
        CHECK(c.c_2r1 == 0.0);
    }

    const double omega2 = solve_omega2(1.0, 0.0, 3.0, 1.0 / std::sqrt(2.0));
    const JointState psi = evolve_state({1.0 / 3.0, 0.0}, {1.0, 1.0, 0.0}, {omega2, 1.0, 0.0}, 3.0);
    const MeasurementResult m = measure(psi, Subsystem::R2, 0);
    CHECK(wootters(reduce(m.post_state, Subsystem::A2, Subsystem::R1)) > 0.98);
}

TEST_CASE("snapshot") {
    const EntanglementSnapshot s0 = snapshot({0.2, 0.0}, {1.0, 0.1, 0.5}, {1.0, 0.1, 0.5}, 0.0);
    CHECK(s0.c_12 == doctest::Approx(0.9797958971132712).epsilon(1e-14));
    CHECK(s0.c_r1r2 == 0.0);
    CHECK(s0.c_1r1 == 0.0);
    CHECK(s0.c_2r2 == 0.0);
    CHECK(s0.c_1r2 == 0.0);
    CHECK(s0.c_2r1 == 0.0);
    CHECK(s0.tangle_bilocal == doctest::Approx(0.96).epsilon(1e-14));

    // out-of-phase oscillation of c_12 and c_r1r2 over the first three Rabi periods
    const CavityParams good{1.0, 0.1, 0.5};
    const double horizon = 3.0 * 2.0 * std::numbers::pi / good.rabi();
    for (int k = 0; k <= 3000; ++k) {
        const EntanglementSnapshot s = snapshot({0.2, 0.0}, good, good, horizon * k / 3000.0);
        CHECK_FALSE((s.c_12 > 0.5 && s.c_r1r2 > 0.5));
    }
}

TEST_CASE("concurrence-sum inequality on random snapshots") {
    testing::Sampler rng(43);
    for (int i = 0; i < 1000; ++i) {
        const InitialState init = rng.initial();
        const EntanglementSnapshot s = snapshot(init, rng.cavity(), rng.cavity(), rng.uniform(0.0, 30.0));
        const double sum = s.squared_sum();
        CHECK(sum >= 0.0);
        CHECK(sum <= 1.0 - init.s * init.s + 1e-10);
        for (double c : {s.c_12, s.c_r1r2, s.c_1r1, s.c_2r2, s.c_1r2, s.c_2r1, s.tangle_bilocal}) {
            CHECK(c >= 0.0);
            CHECK(c <= 1.0);
        }
    }
}

TEST_CASE("phase invariance of every concurrence") {
    testing::Sampler rng(44);
    for (int i = 0; i < 20; ++i) {
        const double s = rng.uniform(-1.0, 1.0);
        const CavityParams p1 = rng.cavity();
        const CavityParams p2 = rng.cavity();
        const double t = rng.uniform(0.0, 10.0);
        const JointState a = evolve_state({s, 0.0}, p1, p2, t);
        const JointState b = apply_local_phase(evolve_state({s, rng.uniform(0.0, 6.0)}, p1, p2, t), Subsystem::R2, 1.3);
        for (auto [x, y] : {std::pair{Subsystem::A1, Subsystem::A2}, std::pair{Subsystem::R1, Subsystem::R2},
                            std::pair{Subsystem::A1, Subsystem::R1}, std::pair{Subsystem::A1, Subsystem::R2},
                            std::pair{Subsystem::A2, Subsystem::R1}}) {
            CHECK(std::abs(wootters(reduce(a, x, y)) - wootters(reduce(b, x, y))) < 1e-12);
        }
    }
}

TEST_CASE("exchanging the two atom-cavity pairs") {
    testing::Sampler rng(45);
    for (int i = 0; i < 20; ++i) {
        const InitialState init = rng.initial();
        const CavityParams p1 = rng.cavity();
        const CavityParams p2 = rng.cavity();
        const double t = rng.uniform(0.0, 10.0);
        const EntanglementSnapshot a = snapshot(init, p1, p2, t);
        const EntanglementSnapshot b = snapshot(init, p2, p1, t);
        CHECK(a.c_1r1 == doctest::Approx(b.c_2r2).epsilon(1e-14));
        CHECK(a.c_12 == doctest::Approx(b.c_12).epsilon(1e-14));
        CHECK(a.c_r1r2 == doctest::Approx(b.c_r1r2).epsilon(1e-14));
    }
}

TEST_CASE("c_12 vanishes exactly beyond the ESD threshold") {
    testing::Sampler rng(46);
    for (int i = 0; i < 200; ++i) {
        const double s = rng.uniform(0.01, 0.99);
        const CavityParams p1 = rng.cavity();
        const CavityParams p2 = rng.cavity();
        const double t = rng.uniform(0.0, 20.0);
        const AmplitudePair a1 = amplitude(p1, t);
        const AmplitudePair a2 = amplitude(p2, t);
        const double g = a1.f_mag * a2.f_mag - std::sqrt((1.0 - s) / (1.0 + s));
        if (std::abs(g) < 1e-9) {
            continue;
        }
        CHECK((concurrence_qubits(s, a1, a2) == 0.0) == (g > 0.0));
    }
}

} // TEST_SUITE
