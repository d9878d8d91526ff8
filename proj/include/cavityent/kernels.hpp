// kernels.hpp: data-parallel kernels and their serial references
//
// Every kernel here has a *_reference twin that runs the same per-element arithmetic in a
// plain loop.  The parallel versions split independent output elements across OpenMP
// threads and never reduce across threads, so both produce bit-identical results.

#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cavityent/amplitudes.hpp"
#include "cavityent/entanglement.hpp"
#include "cavityent/quantum_state.hpp"

namespace cavityent::kernels {

// Number of OpenMP threads used by the parallel kernels (0 restores the runtime default).
void set_threads(int n);
int max_threads();

// Runs body(i) for i in [0, n) across threads; the first exception thrown is rethrown.
template <typename Body>
void for_each_index(std::size_t n, Body&& body) {
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

// Eigen-decomposition of a real symmetric generator, laid out for row-wise propagation.
struct SpectralPropagator {
    Eigen::VectorXd energies;                                                   // E_j
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> vectors;  // V(k, j)
    Eigen::VectorXd overlap;                                                    // V^T psi(0)

    static SpectralPropagator from_symmetric(const Eigen::MatrixXd& generator, std::size_t initial_index);
    std::size_t size() const { return static_cast<std::size_t>(energies.size()); }
};

// psi_k(t) = sum_j V(k, j) overlap_j exp(-i E_j t) for every k.
void propagate(const SpectralPropagator& prop, double t, std::span<complex> out);
void propagate_reference(const SpectralPropagator& prop, double t, std::span<complex> out);

// Entanglement snapshot at each time.
std::vector<EntanglementSnapshot> snapshot_grid(const InitialState& init, const CavityParams& p1,
                                                const CavityParams& p2, std::span<const double> times);
std::vector<EntanglementSnapshot> snapshot_grid_reference(const InitialState& init, const CavityParams& p1,
                                                          const CavityParams& p2,
                                                          std::span<const double> times);

} // namespace cavityent::kernels
