#include "cavityent/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "cavityent/errors.hpp"
#include "cavityent/kernels.hpp"

namespace cavityent::oracle {

namespace {

constexpr double kMaxStepRate = 0.1;

Eigen::MatrixXd mode_generator(const CavityParams& params, const ModeDiscretization& disc, double& spacing) {
    const auto n = static_cast<Eigen::Index>(disc.n_modes);
    spacing = 2.0 * disc.cutoff * params.lambda / static_cast<double>(n);
    const SpectralDensity sd{params};
    const double centre = 0.5 * static_cast<double>(n - 1);

    // Rotated frame a_k = c_k exp(i delta_k t), delta_k = delta - x_k:
    //   i d/dt c_e = sum_k g_k a_k,   i d/dt a_k = g_k c_e - delta_k a_k
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double x = (static_cast<double>(k) - centre) * spacing;
        const double g = std::sqrt(spectral_density(sd, x) * spacing);
        h(0, k + 1) = g;
        h(k + 1, 0) = g;
        h(k + 1, k + 1) = x - params.delta;
    }
    return h;
}

template <typename Propagate>
ModeSolution solve_modes(const CavityParams& params, const ModeDiscretization& disc, const TimeGrid& grid,
                         Propagate&& propagate_fn) {
    params.validate();
    disc.validate();
    grid.validate();
    if (!(params.lambda > 0.0)) {
        throw DomainError("mode discretization needs a finite linewidth");
    }
    double spacing = 0.0;
    const Eigen::MatrixXd h = mode_generator(params, disc, spacing);
    const double recurrence = 2.0 * std::numbers::pi / spacing;
    if (grid.t_max > recurrence) {
        std::ostringstream msg;
        msg << "horizon " << grid.t_max << " exceeds the mode recurrence time " << recurrence;
        throw AliasingError(msg.str());
    }

    const auto prop = kernels::SpectralPropagator::from_symmetric(h, 0);
    ModeSolution out;
    out.excited.reserve(grid.n_steps);
    out.norm.reserve(grid.n_steps);
    std::vector<complex> psi(prop.size());
    for (std::size_t i = 0; i < grid.n_steps; ++i) {
        propagate_fn(prop, grid.at(i), std::span<complex>(psi));
        double norm = 0.0;
        for (const auto& c : psi) {
            norm += std::norm(c);
        }
        out.excited.push_back(psi.front());
        out.norm.push_back(norm);
    }
    return out;
}

} // namespace

void TimeGrid::validate() const {
    if (!std::isfinite(t_max) || !(t_max > 0.0)) {
        throw DomainError("time grid t_max must be positive");
    }
    if (n_steps < 2) {
        throw DomainError("time grid needs at least two points");
    }
}

std::vector<double> TimeGrid::times() const {
    validate();
    std::vector<double> ts(n_steps);
    for (std::size_t i = 0; i < n_steps; ++i) {
        ts[i] = at(i);
    }
    return ts;
}

void ModeDiscretization::validate() const {
    if (n_modes == 0 || n_modes % 2 == 0) {
        throw DomainError("mode count must be odd so that one mode sits on the cavity frequency");
    }
    if (!std::isfinite(cutoff) || cutoff < 5.0) {
        throw DomainError("frequency cutoff must be at least 5 linewidths");
    }
}

std::vector<complex> memory_kernel_solve(const CavityParams& params, const TimeGrid& grid) {
    params.validate();
    grid.validate();
    const double h = grid.step();
    const double fastest = std::max({params.lambda, params.omega, std::abs(params.delta)});
    if (h * fastest > kMaxStepRate) {
        std::ostringstream msg;
        msg << "grid step " << h << " too coarse: step * max rate = " << h * fastest << " > " << kMaxStepRate;
        throw ResolutionError(msg.str());
    }

    const double om2 = params.omega * params.omega;
    const complex a = params.damping();
    // y = (E, z) with E' = -omega^2 z, z' = E - a z
    const auto rhs = [&](complex e, complex z, complex& de, complex& dz) {
        de = -om2 * z;
        dz = e - a * z;
    };

    std::vector<complex> out(grid.n_steps);
    complex e{1.0, 0.0};
    complex z{0.0, 0.0};
    out[0] = e;
    for (std::size_t i = 1; i < grid.n_steps; ++i) {
        complex k1e, k1z, k2e, k2z, k3e, k3z, k4e, k4z;
        rhs(e, z, k1e, k1z);
        rhs(e + 0.5 * h * k1e, z + 0.5 * h * k1z, k2e, k2z);
        rhs(e + 0.5 * h * k2e, z + 0.5 * h * k2z, k3e, k3z);
        rhs(e + h * k3e, z + h * k3z, k4e, k4z);
        e += h / 6.0 * (k1e + 2.0 * k2e + 2.0 * k3e + k4e);
        z += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
        out[i] = e;
    }
    return out;
}

ModeSolution discretized_modes_solve(const CavityParams& params, const ModeDiscretization& disc,
                                     const TimeGrid& grid) {
    return solve_modes(params, disc, grid, [](const auto& prop, double t, std::span<complex> psi) {
        kernels::propagate(prop, t, psi);
    });
}

ModeSolution discretized_modes_solve_reference(const CavityParams& params, const ModeDiscretization& disc,
                                               const TimeGrid& grid) {
    return solve_modes(params, disc, grid, [](const auto& prop, double t, std::span<complex> psi) {
        kernels::propagate_reference(prop, t, psi);
    });
}

} // namespace cavityent::oracle
