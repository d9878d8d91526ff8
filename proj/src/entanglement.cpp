#include "cavityent/entanglement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "cavityent/errors.hpp"

namespace cavityent {

namespace {

constexpr double kHermitianTol = 1e-8;
constexpr double kZeroConcurrence = 1e-12;
constexpr double kInequalitySlack = 1e-10;
// Eigenvalues of rho below this are treated as exact zeros before taking square roots.
constexpr double kRankTol = 1e-14;

double snap_to_zero(double c) {
    return c < kZeroConcurrence ? 0.0 : c;
}

Eigen::Matrix4cd spin_flip() {
    Eigen::Matrix4cd y = Eigen::Matrix4cd::Zero();
    y(0, 3) = -1.0;
    y(1, 2) = 1.0;
    y(2, 1) = 1.0;
    y(3, 0) = -1.0;
    return y;
}

} // namespace

double EntanglementSnapshot::squared_sum() const {
    return c_12 * c_12 + c_r1r2 * c_r1r2 + c_1r2 * c_1r2 + c_2r1 * c_2r1;
}

double wootters(const DensityMatrix4& rho) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
        throw DomainError("density matrix is not Hermitian");
    }
    const Eigen::Matrix4cd herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> eig(herm);
    Eigen::Vector4d roots = eig.eigenvalues();
    for (int i = 0; i < 4; ++i) {
        roots(i) = roots(i) > kRankTol ? std::sqrt(roots(i)) : 0.0;
    }
    const Eigen::Matrix4cd sqrt_rho = eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().adjoint();

    // sqrt(rho) rho~ sqrt(rho) = M M^dagger with M = sqrt(rho) Y conj(sqrt(rho)); the l_i are the
    // singular values of M.
    const Eigen::Matrix4cd m = sqrt_rho * spin_flip() * sqrt_rho.conjugate();
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(m);
    std::array<double, 4> l{};
    for (int i = 0; i < 4; ++i) {
        l[static_cast<std::size_t>(i)] = svd.singularValues()(i);
    }
    std::sort(l.begin(), l.end(), std::greater<>());
    return snap_to_zero(std::max(0.0, l[0] - l[1] - l[2] - l[3]));
}

double concurrence_qubits(double s, const AmplitudePair& a1, const AmplitudePair& a2) {
    const double c = std::abs(a1.e * a2.e) * (std::sqrt(1.0 - s * s) - (1.0 + s) * a1.f_mag * a2.f_mag);
    return snap_to_zero(std::max(0.0, c));
}

double concurrence_reservoirs(double s, const AmplitudePair& a1, const AmplitudePair& a2) {
    const double c = a1.f_mag * a2.f_mag * (std::sqrt(1.0 - s * s) - (1.0 + s) * std::abs(a1.e * a2.e));
    return snap_to_zero(std::max(0.0, c));
}

double concurrence_qubit_own_reservoir(double s, const AmplitudePair& a) {
    return snap_to_zero((1.0 + s) * std::abs(a.e) * a.f_mag);
}

double bilocal_tangle(const DensityMatrix4& rho) {
    return 2.0 * (1.0 - (rho * rho).trace().real());
}

CrossConcurrences cross_concurrences(const JointState& state) {
    return {wootters(reduce(state, Subsystem::A1, Subsystem::R2)),
            wootters(reduce(state, Subsystem::A2, Subsystem::R1))};
}

EntanglementSnapshot snapshot(const InitialState& init, const CavityParams& p1, const CavityParams& p2, double t) {
    init.validate();
    const AmplitudePair a1 = amplitude(p1, t);
    const AmplitudePair a2 = amplitude(p2, t);
    const JointState state = compose_state(init, a1, a2);
    const CrossConcurrences cross = cross_concurrences(state);

    EntanglementSnapshot snap;
    snap.t = t;
    snap.c_12 = concurrence_qubits(init.s, a1, a2);
    snap.c_r1r2 = concurrence_reservoirs(init.s, a1, a2);
    snap.c_1r1 = concurrence_qubit_own_reservoir(init.s, a1);
    snap.c_2r2 = concurrence_qubit_own_reservoir(init.s, a2);
    snap.c_1r2 = cross.c_1r2;
    snap.c_2r1 = cross.c_2r1;
    snap.tangle_bilocal = bilocal_tangle(reduce(state, Subsystem::A1, Subsystem::R1));
    snap.abs_e1 = std::abs(a1.e);
    snap.abs_e2 = std::abs(a2.e);

    if (snap.squared_sum() > snap.tangle_bilocal + kInequalitySlack) {
        throw std::logic_error("concurrence-sum inequality violated");
    }
    return snap;
}

} // namespace cavityent
