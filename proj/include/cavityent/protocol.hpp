// protocol.hpp: W-state preparation and Bell-state extraction
//
// One atom (the "decaying" atom) is left in its cavity until its photon has almost surely
// been emitted, |F| ~ 1.  The coupling of the other ("tuned") atom is chosen so that its
// excited amplitude has magnitude 1/sqrt(2) at that same time.  With s = 1/3 and phi = 0 the
// tuned atom and the two cavity fields then approximate
//
//   |W> = (|g, 0, 0> + |e, photon_d, 0> + |g, photon_d, photon_t>) / sqrt(3)
//
// over (tuned atom, decaying cavity, tuned cavity).  Measuring one party of |W> leaves the
// other two in a Bell state.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cavityent/amplitudes.hpp"
#include "cavityent/quantum_state.hpp"

namespace cavityent {

// Which atom plays the decaying role.  Atom 1 is the direct arrangement; atom 2 is the
// swapped one.
struct ProtocolRoles {
    Subsystem decaying_atom{Subsystem::A1};
    Subsystem decaying_cavity{Subsystem::R1};
    Subsystem tuned_atom{Subsystem::A2};
    Subsystem tuned_cavity{Subsystem::R2};

    static ProtocolRoles direct();
    static ProtocolRoles swapped();
    int decaying_index() const { return decaying_atom == Subsystem::A1 ? 1 : 2; }
};

// Named after the direct arrangement; under swapped roles atom 2 <-> atom 1 and
// cavity 1 <-> cavity 2.
enum class BellMeasurement {
    atom2_ground,    // tuned atom found in |g>: cavity fields entangled
    cavity1_photon,  // photon found in the decaying cavity: tuned atom entangled with its cavity
    cavity2_vacuum,  // tuned cavity found empty: tuned atom entangled with the distant cavity
};

std::string_view to_string(BellMeasurement m);
// Label of the measurement under the given roles ("atom1_ground" under swapped roles, ...).
std::string bell_label(BellMeasurement m, const ProtocolRoles& roles);

// Smallest t with |F(t)| >= f_threshold that also keeps |F| >= f_threshold on sampled times up
// to 2t.  HorizonError when not reached within 100 / envelope rate; SolverError for lambda = 0.
double find_tbar(const CavityParams& decaying, double f_threshold);

// Smallest coupling in (0, 10 lambda] with |E(t_bar)| = target_e.  SolverError without a sign
// change in the bracket.
double solve_omega2(double lambda2, double delta2, double t_bar, double target_e);

struct WFidelity {
    double fidelity{0.0};               // |<g_d| <W|psi>|^2
    double conditional{0.0};            // same after projecting the decaying atom on |g>
    double phase_corrected{0.0};        // maximised over the ground/excited relative phase
    double decaying_ground_probability{0.0};
    bool precondition_ok{true};         // decaying atom ground probability >= 0.5
};

WFidelity w_fidelity(const JointState& state, const ProtocolRoles& roles = ProtocolRoles::direct());

struct BellOutcome {
    double probability{0.0};
    double fidelity{0.0};
    JointState post_state;
};

struct BellRecord {
    BellMeasurement which{};
    double probability{0.0};
    double fidelity{0.0};
};

struct ProtocolRequest {
    InitialState init{1.0 / 3.0, 0.0};
    CavityParams decaying{1.0, 1.0, 0.0};  // decaying atom's cavity
    double tuned_lambda{1.0};
    double tuned_delta{0.0};
    double f_threshold{0.99};
    std::optional<double> t_bar;  // use this interaction time instead of searching for it
    double target_e{0.70710678118654752440};
};

struct ProtocolDesign {
    ProtocolRoles roles;
    double t_bar{0.0};
    double omega2{0.0};  // solved coupling of the tuned atom
    double f1_at_tbar{0.0};   // |F| of the decaying atom at t_bar
    complex e1_at_tbar{};     // residual excited amplitude of the decaying atom
    complex e2_at_tbar{};     // tuned atom's excited amplitude
    WFidelity w;
    std::vector<BellRecord> bell_outcomes;
    std::vector<std::string> warnings;

    double w_fidelity() const { return w.fidelity; }
};

// Cavity parameters of atoms 1 and 2 implied by a design.
CavityParams cavity_of_atom(const ProtocolRequest& request, const ProtocolDesign& design, int atom);

// State of the four parties at the design time.
JointState design_state(const ProtocolRequest& request, const ProtocolDesign& design);

BellOutcome run_bell_extraction(const JointState& state, BellMeasurement which,
                                const ProtocolRoles& roles = ProtocolRoles::direct());

BellOutcome run_bell_extraction(const ProtocolDesign& design, const InitialState& init, const CavityParams& p1,
                                const CavityParams& p2, BellMeasurement which);

// find_tbar (or the requested t_bar) -> solve_omega2 -> W fidelity -> three Bell measurements,
// with atom 1 decaying.
ProtocolDesign design_protocol(const ProtocolRequest& request);

// The same pipeline with atom 2 decaying and atom 1 tuned.
ProtocolDesign swapped_design(const ProtocolRequest& request);

ProtocolDesign run_protocol(const ProtocolRequest& request, const ProtocolRoles& roles);

} // namespace cavityent
