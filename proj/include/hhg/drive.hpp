#pragma once

#include <string>
#include <variant>

namespace hhg {

/// Gaussian envelope with FWHM of `n_fwhm` carrier cycles. The pulse spans four FWHM,
/// centred, so the envelope is ~1.5e-5 at the edges.
struct GaussianEnvelope {
    double n_fwhm = 20.0;
    friend bool operator==(const GaussianEnvelope&, const GaussianEnvelope&) = default;
};

/// Linear ramp up over n_on cycles, flat for n_p cycles, linear ramp down over n_off cycles.
struct TrapezoidEnvelope {
    double n_on = 1.0;
    double n_p = 50.0;
    double n_off = 1.0;
    friend bool operator==(const TrapezoidEnvelope&, const TrapezoidEnvelope&) = default;
};

using Envelope = std::variant<GaussianEnvelope, TrapezoidEnvelope>;

inline constexpr double kGaussianSpanInFwhm = 4.0;

/// Total number of carrier cycles covered by the envelope.
double envelope_cycles(const Envelope& envelope);
std::string envelope_name(const Envelope& envelope);
void validate_envelope(const Envelope& envelope);

/// Linearly polarized pulse E(t) = p(t) * e_peak * sin(omega_d t) on [0, duration].
class Pulse {
public:
    Pulse(double omega_d, double e_peak, Envelope envelope);

    double omega_d() const { return omega_d_; }
    double e_peak() const { return e_peak_; }
    const Envelope& envelope() const { return envelope_; }
    double period() const;
    double duration() const;

    Pulse with_amplitude(double e_peak) const { return Pulse(omega_d_, e_peak, envelope_); }

    friend bool operator==(const Pulse&, const Pulse&) = default;

private:
    double omega_d_;
    double e_peak_;
    Envelope envelope_;
};

/// Envelope value p(t) in [0, 1]. Throws for t outside [0, tau].
double envelope_at(const Envelope& envelope, double omega_d, double t);

/// E(t) in a.u. Throws for t outside [0, tau].
double field_at(const Pulse& pulse, double t);

/// Peak field amplitude (a.u.) for a peak intensity in W/cm^2.
double intensity_to_field(double intensity_wcm2);
double field_to_intensity(double e_peak);

/// Omega_R = mu * E for a transition dipole mu and a peak amplitude E.
double rabi_frequency(double mu, double e_peak);

}  // namespace hhg
