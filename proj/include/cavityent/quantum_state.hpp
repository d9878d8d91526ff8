// quantum_state.hpp: joint state of (atom 1, reservoir 1, atom 2, reservoir 2)
//
// Each reservoir holds at most one photon, so under single-excitation dynamics it acts as a
// qubit spanned by {vacuum, emitted photon wavepacket}.  The joint state is a 16-component
// vector indexed by the bits (a1 r1 a2 r2), a1 most significant; 0 = ground/vacuum,
// 1 = excited/photon.

#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string_view>

#include <Eigen/Dense>

#include "cavityent/amplitudes.hpp"

namespace cavityent {

enum class Subsystem { A1 = 0, R1 = 1, A2 = 2, R2 = 3 };

std::string_view to_string(Subsystem s);
// Bit position of a subsystem inside a state index (A1 -> 3, ..., R2 -> 0).
constexpr int bit_of(Subsystem s) { return 3 - static_cast<int>(s); }

struct InitialState {
    double s{0.0};    // separability parameter in [-1, 1]
    double phi{0.0};  // relative phase of the doubly excited component

    void validate() const;
};

class JointState {
public:
    static constexpr std::size_t kDim = 16;

    JointState() = default;
    explicit JointState(const std::array<complex, kDim>& amps) : amps_(amps) {}

    static constexpr std::size_t index(int a1, int r1, int a2, int r2) {
        return static_cast<std::size_t>((a1 << 3) | (r1 << 2) | (a2 << 1) | r2);
    }

    const complex& operator[](std::size_t i) const { return amps_[i]; }
    complex& operator[](std::size_t i) { return amps_[i]; }
    const std::array<complex, kDim>& amplitudes() const { return amps_; }

    double norm_squared() const;

private:
    std::array<complex, kDim> amps_{};
};

using DensityMatrix4 = Eigen::Matrix4cd;

// (g,0,g,0) sqrt((1-s)/2) + e^{i phi} sqrt((1+s)/2) (E1|e,0> + F1|g,1>)(E2|e,0> + F2|g,1>)
JointState compose_state(const InitialState& init, const AmplitudePair& a1, const AmplitudePair& a2);

JointState evolve_state(const InitialState& init, const CavityParams& p1, const CavityParams& p2, double t);

// Coefficients of the five components the model can populate.
struct FiveComponents {
    complex ground;                 // |g1 g2, 0 0>
    complex both_excited;           // |e1 e2, 0 0>
    complex atom1_excited_photon2;  // |e1 g2, 0 photon2>
    complex atom2_excited_photon1;  // |g1 e2, photon1 0>
    complex two_photons;            // |g1 g2, photon1 photon2>
};

// Throws StructureError when any other amplitude exceeds 1e-10 in magnitude.
FiveComponents five_component_view(const JointState& state);

// Reduced density matrix of the ordered pair (first, second); rows and columns are ordered
// (00, 01, 10, 11) with `first` as the high bit.  DomainError for a repeated label.
DensityMatrix4 reduce(const JointState& state, Subsystem first, Subsystem second);

struct MeasurementResult {
    JointState post_state;
    double probability{0.0};
};

// Projects `subsystem` onto `outcome` (0 or 1) and renormalizes.  MeasurementError when the
// outcome probability is at or below 1e-12.
MeasurementResult measure(const JointState& state, Subsystem subsystem, int outcome);

// Multiplies every amplitude with `subsystem` in state 1 by exp(i chi).
JointState apply_local_phase(const JointState& state, Subsystem subsystem, double chi);

// 16 lines "bits re im" in ascending index order.
void write_state_dump(std::ostream& os, const JointState& state);

} // namespace cavityent
