#include "cavityent/amplitudes.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cavityent/errors.hpp"

namespace cavityent {

namespace {

constexpr double kSeriesThreshold = 1e-6;
constexpr double kOverflowThreshold = 350.0;

void require_time(double t) {
    if (!std::isfinite(t) || t < 0.0) {
        throw DomainError("time must be finite and non-negative, got " + std::to_string(t));
    }
}

} // namespace

void CavityParams::validate() const {
    if (!std::isfinite(omega) || !std::isfinite(lambda) || !std::isfinite(delta)) {
        throw DomainError("cavity parameters must be finite");
    }
    if (!(omega > 0.0)) {
        throw DomainError("cavity coupling omega must be positive");
    }
    if (lambda < 0.0) {
        throw DomainError("cavity linewidth lambda must be non-negative");
    }
}

double CavityParams::gamma() const {
    if (!(lambda > 0.0)) {
        throw DomainError("Markovian rate gamma = 2 omega^2 / lambda needs lambda > 0");
    }
    return 2.0 * omega * omega / lambda;
}

double CavityParams::rabi() const {
    return std::sqrt(omega * omega + 0.25 * delta * delta);
}

complex CavityParams::damping() const {
    return {lambda, -delta};
}

complex CavityParams::root() const {
    const complex a = damping();
    return std::sqrt(a * a - 4.0 * omega * omega);
}

double CavityParams::envelope_rate() const {
    return 0.5 * (lambda - std::abs(root().real()));
}

namespace detail {

complex amplitude_from_root(complex damping, complex root, double t) {
    const complex x = 0.5 * root * t;
    const complex decay = std::exp(-0.5 * damping * t);
    if (std::abs(x) < kSeriesThreshold) {
        // sinh(x) / w = (t / 2) sinh(x) / x
        const complex x2 = x * x;
        const complex sinhc = 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
        return decay * (std::cosh(x) + damping * (0.5 * t) * sinhc);
    }
    if (std::abs(x.real()) > kOverflowThreshold) {
        const complex ratio = damping / root;
        return 0.5 * (std::exp(0.5 * (root - damping) * t) * (1.0 + ratio) +
                      std::exp(-0.5 * (root + damping) * t) * (1.0 - ratio));
    }
    return decay * (std::cosh(x) + damping / root * std::sinh(x));
}

} // namespace detail

AmplitudePair amplitude(const CavityParams& params, double t) {
    params.validate();
    require_time(t);
    complex e = detail::amplitude_from_root(params.damping(), params.root(), t);
    double mag2 = std::norm(e);
    if (mag2 > 1.0) {
        e /= std::sqrt(mag2);
        mag2 = 1.0;
    }
    return {e, std::sqrt(1.0 - mag2)};
}

complex markovian_amplitude(const CavityParams& params, double t) {
    params.validate();
    require_time(t);
    const double gamma = params.gamma();
    const double rate = params.delta * params.delta / (4.0 * params.lambda) + 0.5 * gamma;
    return std::exp(-rate * t);
}

complex jc_amplitude(const CavityParams& params, double t) {
    params.validate();
    require_time(t);
    const double r = params.rabi();
    const complex i{0.0, 1.0};
    return std::exp(0.5 * i * params.delta * t) *
           (std::cos(r * t) - i * params.delta / (2.0 * r) * std::sin(r * t));
}

complex jc_corrected_amplitude(const CavityParams& params, double t) {
    params.validate();
    require_time(t);
    if (params.delta != 0.0) {
        throw UnsupportedRegimeError("linewidth-corrected ideal-cavity amplitude is only known on resonance");
    }
    const double shifted = params.omega - params.lambda * params.lambda / (8.0 * params.omega);
    return std::exp(-0.5 * params.lambda * t) * std::cos(shifted * t);
}

double spectral_density(const SpectralDensity& sd, double omega_offset) {
    sd.params.validate();
    if (!(sd.params.lambda > 0.0)) {
        throw DomainError("Lorentzian spectral density is a distribution at lambda = 0");
    }
    const double lam = sd.params.lambda;
    const double om = sd.params.omega;
    return om * om / std::numbers::pi * lam / (omega_offset * omega_offset + lam * lam);
}

complex correlation_function(const SpectralDensity& sd, double tau) {
    sd.params.validate();
    const double om = sd.params.omega;
    return om * om * std::exp(-sd.params.lambda * std::abs(tau)) *
           std::exp(complex{0.0, sd.params.delta * tau});
}

} // namespace cavityent
