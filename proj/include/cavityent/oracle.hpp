// oracle.hpp: brute-force reference solutions for the single-atom amplitude
//
// Two routes that do not use the closed form:
//
//  * memory_kernel_solve integrates the exponential-memory equation
//        E'(t) = -omega^2 int_0^t exp(-(lambda - i delta)(t - s)) E(s) ds
//    written as the first-order system E' = -omega^2 z, z' = E - (lambda - i delta) z.
//
//  * discretized_modes_solve replaces the Lorentzian continuum by a finite set of modes
//    and evolves the single-excitation Schrodinger equation exactly.

#pragma once

#include <cstddef>
#include <vector>

#include "cavityent/amplitudes.hpp"

namespace cavityent::oracle {

struct TimeGrid {
    double t_max{1.0};
    std::size_t n_steps{2};

    void validate() const;
    double step() const { return t_max / static_cast<double>(n_steps - 1); }
    double at(std::size_t i) const { return step() * static_cast<double>(i); }
    std::vector<double> times() const;
};

struct ModeDiscretization {
    std::size_t n_modes{2001};  // odd, so one mode sits on the cavity frequency
    double cutoff{50.0};        // half-width of the frequency window in units of lambda

    void validate() const;
};

// Classical RK4 on the grid spacing.  Throws ResolutionError when
// step * max(lambda, omega, |delta|) > 0.1.
std::vector<complex> memory_kernel_solve(const CavityParams& params, const TimeGrid& grid);

struct ModeSolution {
    std::vector<complex> excited;  // c_e(t) on the grid
    std::vector<double> norm;      // |c_e|^2 + sum_k |c_k|^2 on the grid
};

// Modes at w_c + (k - (n-1)/2) dw, dw = 2 cutoff lambda / n, with |g_k|^2 = J(w_k) dw.
// Throws DomainError for lambda = 0 and AliasingError when t_max > 2 pi / dw.
ModeSolution discretized_modes_solve(const CavityParams& params, const ModeDiscretization& disc,
                                     const TimeGrid& grid);

// Same as discretized_modes_solve but propagates with the serial reference kernel.
ModeSolution discretized_modes_solve_reference(const CavityParams& params, const ModeDiscretization& disc,
                                               const TimeGrid& grid);

} // namespace cavityent::oracle
