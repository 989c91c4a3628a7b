#include "hhg/drive.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hhg/errors.hpp"
#include "hhg/units.hpp"

namespace hhg {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double cycles_to_time(double cycles, double omega_d) { return 2.0 * std::numbers::pi * cycles / omega_d; }

}  // namespace

double envelope_cycles(const Envelope& envelope) {
    return std::visit(overloaded{[](const GaussianEnvelope& g) { return kGaussianSpanInFwhm * g.n_fwhm; },
                                 [](const TrapezoidEnvelope& t) { return t.n_on + t.n_p + t.n_off; }},
                      envelope);
}

std::string envelope_name(const Envelope& envelope) {
    return std::holds_alternative<GaussianEnvelope>(envelope) ? "gaussian" : "trapezoid";
}

void validate_envelope(const Envelope& envelope) {
    std::visit(overloaded{[](const GaussianEnvelope& g) {
                              require(g.n_fwhm > 0.0 && std::isfinite(g.n_fwhm), "n_fwhm must be positive");
                          },
                          [](const TrapezoidEnvelope& t) {
                              require(t.n_on > 0.0 && t.n_p > 0.0 && t.n_off > 0.0,
                                      "trapezoid cycle counts (n_on, n_p, n_off) must be positive");
                          }},
               envelope);
}

Pulse::Pulse(double omega_d, double e_peak, Envelope envelope)
    : omega_d_(omega_d), e_peak_(e_peak), envelope_(envelope) {
    require(omega_d > 0.0 && std::isfinite(omega_d), "carrier frequency must be positive");
    require(e_peak >= 0.0 && std::isfinite(e_peak), "peak field amplitude must be non-negative");
    validate_envelope(envelope_);
}

double Pulse::period() const { return cycles_to_time(1.0, omega_d_); }

double Pulse::duration() const { return cycles_to_time(envelope_cycles(envelope_), omega_d_); }

double envelope_at(const Envelope& envelope, double omega_d, double t) {
    const double tau = cycles_to_time(envelope_cycles(envelope), omega_d);
    if (!(t >= 0.0 && t <= tau)) {
        std::ostringstream msg;
        msg << "time " << t << " outside pulse window [0, " << tau << "]";
        throw ValidationError(msg.str());
    }
    return std::visit(
        overloaded{[&](const GaussianEnvelope& g) {
                       const double fwhm = cycles_to_time(g.n_fwhm, omega_d);
                       const double s = t - 0.5 * tau;
                       return std::exp(-4.0 * std::numbers::ln2 * s * s / (fwhm * fwhm));
                   },
                   [&](const TrapezoidEnvelope& tr) {
                       const double t_on = cycles_to_time(tr.n_on, omega_d);
                       const double t_off = cycles_to_time(tr.n_off, omega_d);
                       if (t < t_on) return t / t_on;
                       if (t <= tau - t_off) return 1.0;
                       return (tau - t) / t_off;
                   }},
        envelope);
}

double field_at(const Pulse& pulse, double t) {
    return envelope_at(pulse.envelope(), pulse.omega_d(), t) * pulse.e_peak() * std::sin(pulse.omega_d() * t);
}

double intensity_to_field(double intensity_wcm2) {
    require(intensity_wcm2 >= 0.0 && std::isfinite(intensity_wcm2), "intensity must be non-negative");
    return std::sqrt(intensity_wcm2 / units::kAtomicIntensityWcm2);
}

double field_to_intensity(double e_peak) {
    require(e_peak >= 0.0, "field amplitude must be non-negative");
    return e_peak * e_peak * units::kAtomicIntensityWcm2;
}

double rabi_frequency(double mu, double e_peak) {
    require(mu >= 0.0 && e_peak >= 0.0, "dipole and field amplitude must be non-negative");
    return mu * e_peak;
}

}  // namespace hhg
