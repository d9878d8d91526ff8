// support.hpp: shared helpers for the test binaries

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cavityent/amplitudes.hpp"
#include "cavityent/quantum_state.hpp"

namespace testing {

using cavityent::CavityParams;
using cavityent::complex;

// Fixed-seed source of random model parameters.
class Sampler {
public:
    explicit Sampler(unsigned seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    // Omega = 1, lambda / Omega log-uniform in [0.05, 20], delta / Omega in [-3, 3].
    CavityParams cavity() {
        return {1.0, std::exp(uniform(std::log(0.05), std::log(20.0))), uniform(-3.0, 3.0)};
    }

    // Omega / lambda in [0.1, 10] and delta / lambda in [-4, 4] with lambda = 1.
    CavityParams oracle_cavity() { return {uniform(0.1, 10.0), 1.0, uniform(-4.0, 4.0)}; }

    cavityent::InitialState initial() { return {uniform(-1.0, 1.0), uniform(0.0, 2.0 * std::numbers::pi)}; }

private:
    std::mt19937_64 rng_;
};

inline double sup_distance(const std::vector<complex>& a, const std::vector<complex>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

inline std::vector<complex> closed_form(const CavityParams& p, const std::vector<double>& times) {
    std::vector<complex> out;
    for (double t : times) {
        out.push_back(cavityent::amplitude(p, t).e);
    }
    return out;
}

// RK4 grid with h * max(lambda, omega, |delta|) = 0.005 over [0, t_max].
inline std::size_t fine_steps(const CavityParams& p, double t_max) {
    const double rate = std::max({p.lambda, p.omega, std::abs(p.delta)});
    return static_cast<std::size_t>(std::ceil(t_max * rate / 0.005)) + 1;
}

} // namespace testing
