#include "cavityent/quantum_state.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "cavityent/errors.hpp"

namespace cavityent {

namespace {

constexpr double kStructureTol = 1e-10;
constexpr double kMinProbability = 1e-12;

constexpr std::array<std::size_t, 5> kModelIndices = {
    JointState::index(0, 0, 0, 0), JointState::index(1, 0, 1, 0), JointState::index(1, 0, 0, 1),
    JointState::index(0, 1, 1, 0), JointState::index(0, 1, 0, 1)};

int bit(std::size_t index, Subsystem s) {
    return static_cast<int>((index >> bit_of(s)) & 1U);
}

} // namespace

std::string_view to_string(Subsystem s) {
    switch (s) {
        case Subsystem::A1: return "A1";
        case Subsystem::R1: return "R1";
        case Subsystem::A2: return "A2";
        case Subsystem::R2: return "R2";
    }
    return "?";
}

void InitialState::validate() const {
    if (!std::isfinite(s) || s < -1.0 || s > 1.0) {
        throw DomainError("separability parameter s must lie in [-1, 1]");
    }
    if (!std::isfinite(phi)) {
        throw DomainError("initial phase must be finite");
    }
}

double JointState::norm_squared() const {
    double n = 0.0;
    for (const auto& a : amps_) {
        n += std::norm(a);
    }
    return n;
}

JointState compose_state(const InitialState& init, const AmplitudePair& a1, const AmplitudePair& a2) {
    init.validate();
    const double ground = std::sqrt(0.5 * (1.0 - init.s));
    const complex excited = std::polar(std::sqrt(0.5 * (1.0 + init.s)), init.phi);
    const complex f1 = a1.f_mag;
    const complex f2 = a2.f_mag;

    JointState state;
    state[JointState::index(0, 0, 0, 0)] = ground;
    state[JointState::index(1, 0, 1, 0)] = excited * a1.e * a2.e;
    state[JointState::index(1, 0, 0, 1)] = excited * a1.e * f2;
    state[JointState::index(0, 1, 1, 0)] = excited * f1 * a2.e;
    state[JointState::index(0, 1, 0, 1)] = excited * f1 * f2;
    return state;
}

JointState evolve_state(const InitialState& init, const CavityParams& p1, const CavityParams& p2, double t) {
    return compose_state(init, amplitude(p1, t), amplitude(p2, t));
}

FiveComponents five_component_view(const JointState& state) {
    for (std::size_t i = 0; i < JointState::kDim; ++i) {
        bool allowed = false;
        for (auto idx : kModelIndices) {
            allowed = allowed || idx == i;
        }
        if (!allowed && std::abs(state[i]) > kStructureTol) {
            throw StructureError("amplitude outside the five-component manifold at index " + std::to_string(i));
        }
    }
    return {state[kModelIndices[0]], state[kModelIndices[1]], state[kModelIndices[2]], state[kModelIndices[3]],
            state[kModelIndices[4]]};
}

DensityMatrix4 reduce(const JointState& state, Subsystem first, Subsystem second) {
    if (first == second) {
        throw DomainError("reduced pair needs two distinct subsystems");
    }
    // Sum over the two traced bits: rho(ij, kl) = sum_env psi(ij env) conj(psi(kl env)).
    std::array<Subsystem, 2> traced{};
    std::size_t nt = 0;
    for (auto s : {Subsystem::A1, Subsystem::R1, Subsystem::A2, Subsystem::R2}) {
        if (s != first && s != second) {
            traced[nt++] = s;
        }
    }
    const auto compose = [&](int hi, int lo, int env) {
        std::size_t idx = 0;
        idx |= static_cast<std::size_t>(hi) << bit_of(first);
        idx |= static_cast<std::size_t>(lo) << bit_of(second);
        idx |= static_cast<std::size_t>((env >> 1) & 1) << bit_of(traced[0]);
        idx |= static_cast<std::size_t>(env & 1) << bit_of(traced[1]);
        return idx;
    };

    DensityMatrix4 rho = DensityMatrix4::Zero();
    for (int row = 0; row < 4; ++row) {
        for (int col = 0; col < 4; ++col) {
            complex acc{0.0, 0.0};
            for (int env = 0; env < 4; ++env) {
                acc += state[compose(row >> 1, row & 1, env)] * std::conj(state[compose(col >> 1, col & 1, env)]);
            }
            rho(row, col) = acc;
        }
    }
    return rho;
}

MeasurementResult measure(const JointState& state, Subsystem subsystem, int outcome) {
    if (outcome != 0 && outcome != 1) {
        throw DomainError("measurement outcome must be 0 or 1");
    }
    JointState post;
    double prob = 0.0;
    for (std::size_t i = 0; i < JointState::kDim; ++i) {
        if (bit(i, subsystem) == outcome) {
            post[i] = state[i];
            prob += std::norm(state[i]);
        }
    }
    if (!(prob > kMinProbability)) {
        throw MeasurementError("outcome " + std::to_string(outcome) + " on " + std::string(to_string(subsystem)) +
                               " has vanishing probability");
    }
    const double scale = 1.0 / std::sqrt(prob);
    for (std::size_t i = 0; i < JointState::kDim; ++i) {
        post[i] *= scale;
    }
    return {post, prob};
}

JointState apply_local_phase(const JointState& state, Subsystem subsystem, double chi) {
    JointState out = state;
    const complex phase = std::polar(1.0, chi);
    for (std::size_t i = 0; i < JointState::kDim; ++i) {
        if (bit(i, subsystem) == 1) {
            out[i] *= phase;
        }
    }
    return out;
}

void write_state_dump(std::ostream& os, const JointState& state) {
    char line[96];
    for (std::size_t i = 0; i < JointState::kDim; ++i) {
        std::snprintf(line, sizeof line, "%d%d%d%d %.12g %.12g\n", static_cast<int>((i >> 3) & 1U),
                      static_cast<int>((i >> 2) & 1U), static_cast<int>((i >> 1) & 1U), static_cast<int>(i & 1U),
                      state[i].real(), state[i].imag());
        os << line;
    }
}

} // namespace cavityent
