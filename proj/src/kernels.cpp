#include "cavityent/kernels.hpp"

#include <Eigen/Eigenvalues>
#include <omp.h>

namespace cavityent::kernels {

namespace {

int g_default_threads = 0;

inline complex propagate_row(const SpectralPropagator& prop, const std::vector<complex>& weights, std::size_t k) {
    const auto row = prop.vectors.row(static_cast<Eigen::Index>(k));
    complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < weights.size(); ++j) {
        acc += row(static_cast<Eigen::Index>(j)) * weights[j];
    }
    return acc;
}

std::vector<complex> phase_weights(const SpectralPropagator& prop, double t) {
    std::vector<complex> w(prop.size());
    for (std::size_t j = 0; j < w.size(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        w[j] = prop.overlap(jj) * std::polar(1.0, -prop.energies(jj) * t);
    }
    return w;
}

} // namespace

void set_threads(int n) {
    if (g_default_threads == 0) {
        g_default_threads = omp_get_max_threads();
    }
    omp_set_num_threads(n > 0 ? n : g_default_threads);
}

int max_threads() {
    return omp_get_max_threads();
}

SpectralPropagator SpectralPropagator::from_symmetric(const Eigen::MatrixXd& generator, std::size_t initial_index) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(generator);
    SpectralPropagator prop;
    prop.energies = eig.eigenvalues();
    prop.vectors = eig.eigenvectors();
    prop.overlap = eig.eigenvectors().row(static_cast<Eigen::Index>(initial_index)).transpose();
    return prop;
}

void propagate(const SpectralPropagator& prop, double t, std::span<complex> out) {
    const std::vector<complex> w = phase_weights(prop, t);
    for_each_index(out.size(), [&](std::size_t k) { out[k] = propagate_row(prop, w, k); });
}

void propagate_reference(const SpectralPropagator& prop, double t, std::span<complex> out) {
    const std::vector<complex> w = phase_weights(prop, t);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = propagate_row(prop, w, k);
    }
}

std::vector<EntanglementSnapshot> snapshot_grid(const InitialState& init, const CavityParams& p1,
                                                const CavityParams& p2, std::span<const double> times) {
    std::vector<EntanglementSnapshot> out(times.size());
    for_each_index(times.size(), [&](std::size_t i) { out[i] = snapshot(init, p1, p2, times[i]); });
    return out;
}

std::vector<EntanglementSnapshot> snapshot_grid_reference(const InitialState& init, const CavityParams& p1,
                                                          const CavityParams& p2,
                                                          std::span<const double> times) {
    std::vector<EntanglementSnapshot> out;
    out.reserve(times.size());
    for (double t : times) {
        out.push_back(snapshot(init, p1, p2, t));
    }
    return out;
}

} // namespace cavityent::kernels
