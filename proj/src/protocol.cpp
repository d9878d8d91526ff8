#include "cavityent/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "cavityent/errors.hpp"

namespace cavityent {

namespace {

constexpr std::size_t kCouplingScanPoints = 4000;
constexpr double kCouplingBracket = 10.0;  // upper end of the coupling bracket, in units of lambda
constexpr double kHorizonRates = 100.0;

// Index of the basis state with the listed subsystems excited; unlisted ones are 0.
std::size_t index_of(std::initializer_list<std::pair<Subsystem, int>> bits) {
    std::size_t idx = 0;
    for (const auto& [sub, value] : bits) {
        idx |= static_cast<std::size_t>(value & 1) << bit_of(sub);
    }
    return idx;
}

double bisect_coupling(double lambda2, double delta2, double t_bar, double target, double lo, double hi) {
    const auto f = [&](double om) { return std::abs(amplitude({om, lambda2, delta2}, t_bar).e) - target; };
    // f(lo) > 0 >= f(hi)
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi || hi - lo <= 1e-15 * hi) {
            break;
        }
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct BellSpec {
    Subsystem measured;
    int outcome;
    Subsystem first;
    Subsystem second;
    int ket_a;  // target (|ket_a> + |ket_b>) / sqrt(2) in the (first, second) basis
    int ket_b;
};

BellSpec bell_spec(BellMeasurement which, const ProtocolRoles& r) {
    switch (which) {
        case BellMeasurement::atom2_ground:
            return {r.tuned_atom, 0, r.decaying_cavity, r.tuned_cavity, 0b00, 0b11};
        case BellMeasurement::cavity1_photon:
            return {r.decaying_cavity, 1, r.tuned_atom, r.tuned_cavity, 0b10, 0b01};
        case BellMeasurement::cavity2_vacuum:
            return {r.tuned_cavity, 0, r.tuned_atom, r.decaying_cavity, 0b00, 0b11};
    }
    throw DomainError("unknown Bell measurement");
}

} // namespace

ProtocolRoles ProtocolRoles::direct() {
    return {};
}

ProtocolRoles ProtocolRoles::swapped() {
    return {Subsystem::A2, Subsystem::R2, Subsystem::A1, Subsystem::R1};
}

std::string_view to_string(BellMeasurement m) {
    switch (m) {
        case BellMeasurement::atom2_ground: return "atom2_ground";
        case BellMeasurement::cavity1_photon: return "cavity1_photon";
        case BellMeasurement::cavity2_vacuum: return "cavity2_vacuum";
    }
    return "?";
}

std::string bell_label(BellMeasurement m, const ProtocolRoles& roles) {
    const int tuned = roles.decaying_index() == 1 ? 2 : 1;
    const int decaying = roles.decaying_index();
    switch (m) {
        case BellMeasurement::atom2_ground: return "atom" + std::to_string(tuned) + "_ground";
        case BellMeasurement::cavity1_photon: return "cavity" + std::to_string(decaying) + "_photon";
        case BellMeasurement::cavity2_vacuum: return "cavity" + std::to_string(tuned) + "_vacuum";
    }
    return "?";
}

double find_tbar(const CavityParams& decaying, double f_threshold) {
    decaying.validate();
    if (!std::isfinite(f_threshold) || f_threshold >= 1.0) {
        throw DomainError("photon-amplitude threshold must be below 1");
    }
    if (f_threshold <= 0.0) {
        return 0.0;
    }
    if (!(decaying.lambda > 0.0)) {
        throw SolverError("an ideal cavity never retains the photon: |F| oscillates forever");
    }
    const double horizon = kHorizonRates / decaying.envelope_rate();
    const double step = std::min(2.0 * std::numbers::pi / (200.0 * decaying.rabi()), horizon / 20000.0);
    const auto f = [&](double t) { return amplitude(decaying, t).f_mag; };

    const auto n = static_cast<std::size_t>(std::ceil(horizon / step));
    std::vector<double> fs(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        fs[i] = f(step * static_cast<double>(i));
    }
    const auto holds_until = [&](double start, double stop) {
        for (double t = start; t < stop; t += step) {
            if (f(t) < f_threshold) {
                return false;
            }
        }
        return f(stop) >= f_threshold;
    };

    for (std::size_t i = 1; i <= n; ++i) {
        if (!(fs[i - 1] < f_threshold && fs[i] >= f_threshold)) {
            continue;
        }
        double lo = step * static_cast<double>(i - 1);
        double hi = step * static_cast<double>(i);
        while (hi - lo > 1e-12 * hi) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) {
                break;
            }
            (f(mid) >= f_threshold ? hi : lo) = mid;
        }
        if (holds_until(hi, 2.0 * hi)) {
            return hi;
        }
    }
    std::ostringstream msg;
    msg << "|F| does not settle above " << f_threshold << " within t = " << horizon;
    throw HorizonError(msg.str());
}

double solve_omega2(double lambda2, double delta2, double t_bar, double target_e) {
    if (!std::isfinite(target_e) || !(target_e > 0.0) || !(target_e < 1.0)) {
        throw DomainError("target amplitude must lie in (0, 1)");
    }
    if (!std::isfinite(t_bar) || t_bar < 0.0 || !std::isfinite(lambda2) || lambda2 < 0.0) {
        throw DomainError("solve_omega2 needs t_bar >= 0 and lambda >= 0");
    }
    const double upper = kCouplingBracket * lambda2;
    if (!(upper > 0.0)) {
        throw SolverError("coupling bracket (0, 10 lambda] is empty");
    }
    const auto f = [&](double om) { return std::abs(amplitude({om, lambda2, delta2}, t_bar).e) - target_e; };
    double prev = 0.0;  // |E| -> 1 as the coupling vanishes
    for (std::size_t i = 1; i <= kCouplingScanPoints; ++i) {
        const double om = upper * static_cast<double>(i) / static_cast<double>(kCouplingScanPoints);
        if (f(om) <= 0.0) {
            const double lo = prev > 0.0 ? prev : om * 1e-9;
            return bisect_coupling(lambda2, delta2, t_bar, target_e, lo, om);
        }
        prev = om;
    }
    std::ostringstream msg;
    msg << "no coupling in (0, " << upper << "] gives |E(" << t_bar << ")| = " << target_e;
    throw SolverError(msg.str());
}

WFidelity w_fidelity(const JointState& state, const ProtocolRoles& roles) {
    const Subsystem da = roles.decaying_atom;
    const Subsystem dc = roles.decaying_cavity;
    const Subsystem ta = roles.tuned_atom;
    const Subsystem tc = roles.tuned_cavity;

    const complex ground = state[index_of({{da, 0}, {ta, 0}, {dc, 0}, {tc, 0}})];
    const complex branch = state[index_of({{da, 0}, {ta, 1}, {dc, 1}, {tc, 0}})] +
                           state[index_of({{da, 0}, {ta, 0}, {dc, 1}, {tc, 1}})];

    double p_ground = 0.0;
    for (std::size_t i = 0; i < JointState::kDim; ++i) {
        if (((i >> bit_of(da)) & 1U) == 0U) {
            p_ground += std::norm(state[i]);
        }
    }

    WFidelity w;
    w.fidelity = std::norm(ground + branch) / 3.0;
    w.phase_corrected = std::pow(std::abs(ground) + std::abs(branch), 2) / 3.0;
    w.decaying_ground_probability = p_ground;
    w.conditional = p_ground > 0.0 ? w.fidelity / p_ground : 0.0;
    w.precondition_ok = p_ground >= 0.5;
    return w;
}

BellOutcome run_bell_extraction(const JointState& state, BellMeasurement which, const ProtocolRoles& roles) {
    const BellSpec plan = bell_spec(which, roles);
    const MeasurementResult m = measure(state, plan.measured, plan.outcome);
    const DensityMatrix4 rho = reduce(m.post_state, plan.first, plan.second);
    const complex overlap =
        rho(plan.ket_a, plan.ket_a) + rho(plan.ket_b, plan.ket_b) + rho(plan.ket_a, plan.ket_b) + rho(plan.ket_b, plan.ket_a);
    return {m.probability, 0.5 * overlap.real(), m.post_state};
}

BellOutcome run_bell_extraction(const ProtocolDesign& design, const InitialState& init, const CavityParams& p1,
                                const CavityParams& p2, BellMeasurement which) {
    return run_bell_extraction(evolve_state(init, p1, p2, design.t_bar), which, design.roles);
}

CavityParams cavity_of_atom(const ProtocolRequest& request, const ProtocolDesign& design, int atom) {
    if (atom == design.roles.decaying_index()) {
        return request.decaying;
    }
    return {design.omega2, request.tuned_lambda, request.tuned_delta};
}

JointState design_state(const ProtocolRequest& request, const ProtocolDesign& design) {
    return evolve_state(request.init, cavity_of_atom(request, design, 1), cavity_of_atom(request, design, 2),
                        design.t_bar);
}

ProtocolDesign run_protocol(const ProtocolRequest& request, const ProtocolRoles& roles) {
    request.init.validate();
    request.decaying.validate();

    ProtocolDesign design;
    design.roles = roles;
    design.t_bar = request.t_bar ? *request.t_bar : find_tbar(request.decaying, request.f_threshold);
    if (design.t_bar < 0.0 || !std::isfinite(design.t_bar)) {
        throw DomainError("interaction time must be non-negative");
    }
    design.omega2 = solve_omega2(request.tuned_lambda, request.tuned_delta, design.t_bar, request.target_e);

    const AmplitudePair decaying = amplitude(request.decaying, design.t_bar);
    const AmplitudePair tuned = amplitude({design.omega2, request.tuned_lambda, request.tuned_delta}, design.t_bar);
    design.f1_at_tbar = decaying.f_mag;
    design.e1_at_tbar = decaying.e;
    design.e2_at_tbar = tuned.e;

    const JointState state = design_state(request, design);
    design.w = w_fidelity(state, roles);

    if (std::abs(std::remainder(request.init.phi, 2.0 * std::numbers::pi)) > 1e-12) {
        design.warnings.emplace_back("phi != 0: fidelity is measured against the equal-phase W state");
    }
    if (std::abs(request.init.s - 1.0 / 3.0) > 1e-9) {
        design.warnings.emplace_back("s != 1/3: the W-state weights are unbalanced");
    }
    if (!design.w.precondition_ok) {
        design.warnings.emplace_back("decaying atom ground probability below 0.5");
    }

    for (auto which : {BellMeasurement::atom2_ground, BellMeasurement::cavity1_photon, BellMeasurement::cavity2_vacuum}) {
        try {
            const BellOutcome out = run_bell_extraction(state, which, roles);
            design.bell_outcomes.push_back({which, out.probability, out.fidelity});
        } catch (const MeasurementError& e) {
            design.bell_outcomes.push_back({which, 0.0, 0.0});
            design.warnings.emplace_back(bell_label(which, roles) + ": " + e.what());
        }
    }
    return design;
}

ProtocolDesign design_protocol(const ProtocolRequest& request) {
    return run_protocol(request, ProtocolRoles::direct());
}

ProtocolDesign swapped_design(const ProtocolRequest& request) {
    return run_protocol(request, ProtocolRoles::swapped());
}

} // namespace cavityent
