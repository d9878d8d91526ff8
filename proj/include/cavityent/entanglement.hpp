// entanglement.hpp: concurrences, the bi-local tangle and their closed forms
//
// For the two-excitation state of the model, with E_a and F_a the amplitudes of atom a:
//
//   C(1,2)    = max{0, |E1 E2| [sqrt(1 - s^2) - (1 + s) |F1 F2|]}
//   C(r1,r2)  = max{0, |F1 F2| [sqrt(1 - s^2) - (1 + s) |E1 E2|]}
//   C(a,r_a)  = (1 + s) |E_a F_a|
//
// and the tangle of the (atom 1 + cavity 1) / (atom 2 + cavity 2) bipartition is 1 - s^2 at
// all times.  The generic Wootters concurrence is provided to check these independently.

#pragma once

#include "cavityent/amplitudes.hpp"
#include "cavityent/quantum_state.hpp"

namespace cavityent {

struct EntanglementSnapshot {
    double t{0.0};
    double c_12{0.0};
    double c_r1r2{0.0};
    double c_1r1{0.0};
    double c_2r2{0.0};
    double c_1r2{0.0};
    double c_2r1{0.0};
    double tangle_bilocal{0.0};
    double abs_e1{1.0};
    double abs_e2{1.0};

    // c_12^2 + c_r1r2^2 + c_1r2^2 + c_2r1^2
    double squared_sum() const;
};

// Wootters concurrence max{0, l1 - l2 - l3 - l4}, l_i the decreasing square roots of the
// eigenvalues of rho (sy x sy) rho* (sy x sy).  DomainError when rho is not Hermitian to 1e-8.
double wootters(const DensityMatrix4& rho);

double concurrence_qubits(double s, const AmplitudePair& a1, const AmplitudePair& a2);
double concurrence_reservoirs(double s, const AmplitudePair& a1, const AmplitudePair& a2);
double concurrence_qubit_own_reservoir(double s, const AmplitudePair& a);

// 2 (1 - Tr rho^2)
double bilocal_tangle(const DensityMatrix4& rho);

struct CrossConcurrences {
    double c_1r2{0.0};
    double c_2r1{0.0};
};

CrossConcurrences cross_concurrences(const JointState& state);

// All measures at one time.  Throws std::logic_error if the concurrence-sum inequality fails.
EntanglementSnapshot snapshot(const InitialState& init, const CavityParams& p1, const CavityParams& p2, double t);

} // namespace cavityent
