// amplitudes.hpp: exact single-atom decay amplitudes for a Lorentzian reservoir
//
// An atom that starts in |e, vacuum> inside a lossy cavity keeps the excited-state amplitude
//
//   E(t) = exp(-(lambda - i delta) t / 2) [cosh(w t / 2) + (lambda - i delta) / w sinh(w t / 2)]
//   w    = sqrt(lambda^2 - 2 i delta lambda - 4 R^2),   R = sqrt(omega^2 + delta^2 / 4)
//
// with delta = w_a - w_c.  The photon branch has |F(t)| = sqrt(1 - |E(t)|^2); the phase of F
// is absorbed into the photon basis ket, so F is stored real and non-negative.
//
// Limits: lambda >> omega gives Markovian decay exp(-gamma t / 2) with gamma = 2 omega^2 / lambda;
// lambda -> 0 gives the Jaynes-Cummings vacuum Rabi oscillation.

#pragma once

#include <complex>

namespace cavityent {

using complex = std::complex<double>;

struct CavityParams {
    double omega{1.0};   // vacuum Rabi coupling (> 0)
    double lambda{0.0};  // cavity linewidth, inverse photon lifetime (>= 0)
    double delta{0.0};   // atom-cavity detuning w_a - w_c

    // Throws DomainError unless omega > 0, lambda >= 0 and all fields are finite.
    void validate() const;

    // Markovian decay rate 2 omega^2 / lambda; DomainError when lambda == 0.
    double gamma() const;
    // Detuned Rabi frequency sqrt(omega^2 + delta^2 / 4).
    double rabi() const;
    // Principal square root of (lambda - i delta)^2 - 4 omega^2.
    complex root() const;
    // lambda - i delta, the damping coefficient of the amplitude equation.
    complex damping() const;
    // Slowest exponential rate of the amplitude envelope, (lambda - Re w) / 2.  Zero for an
    // ideal cavity.
    double envelope_rate() const;
};

struct AmplitudePair {
    complex e{1.0, 0.0};  // excited-state amplitude
    double f_mag{0.0};    // magnitude of the emitted-photon amplitude
};

struct SpectralDensity {
    CavityParams params;
};

// Exact amplitude at time t >= 0.  The closed form is evaluated through a series for
// sinh(x)/x near critical damping and through an explicit two-exponential form when
// cosh would overflow.
AmplitudePair amplitude(const CavityParams& params, double t);

// Markovian form exp{-(delta^2 / 4 lambda + gamma / 2) t}.
complex markovian_amplitude(const CavityParams& params, double t);

// Ideal-cavity form exp(i delta t / 2) [cos(R t) - i delta / (2 R) sin(R t)].
complex jc_amplitude(const CavityParams& params, double t);

// Leading linewidth correction to the resonant ideal-cavity form,
// exp(-lambda t / 2) cos((omega - lambda^2 / (8 omega)) t).  Resonance only.
complex jc_corrected_amplitude(const CavityParams& params, double t);

// J(w) = (omega^2 / pi) lambda / ((w - w_c)^2 + lambda^2), as a function of w - w_c.
double spectral_density(const SpectralDensity& sd, double omega_offset);

// Reservoir correlation function seen in the atom's rotating frame,
// omega^2 exp(-lambda |tau|) exp(i delta tau).
complex correlation_function(const SpectralDensity& sd, double tau);

namespace detail {

// E(t) for a given damping a = lambda - i delta and an explicit choice of root w with
// w^2 = a^2 - 4 omega^2.  Even in w; exposed so the branch invariance can be tested.
complex amplitude_from_root(complex damping, complex root, double t);

} // namespace detail

} // namespace cavityent
