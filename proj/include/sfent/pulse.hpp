#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace sfent {

enum class Envelope { symmetric, half_rate };

inline std::string to_string(Envelope e) { return e == Envelope::symmetric ? "symmetric" : "half-rate"; }

inline Envelope envelope_from_string(const std::string& s) {
    if (s == "symmetric") return Envelope::symmetric;
    if (s == "half-rate") return Envelope::half_rate;
    throw ConfigError("unknown pulse.envelope '" + s + "' (expected symmetric or half-rate)");
}

/// Few-cycle linearly polarized pulse along z; cep is in units of pi.
struct PulseSpec {
    double F = 0.1;
    double T = 100.0;
    double cep = 0.0;
    Envelope envelope = Envelope::symmetric;

    double duration() const { return 3.0 * T; }

    void validate() const {
        if (!(F >= 0.0) || !std::isfinite(F)) throw ConfigError("pulse.F must be finite and >= 0");
        if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("pulse.T must be positive");
        if (!std::isfinite(cep)) throw ConfigError("pulse.cep must be finite");
    }
};

inline double envelope_at(const PulseSpec& p, double t) {
    const double arg = p.envelope == Envelope::symmetric ? std::numbers::pi * t / (3.0 * p.T)
                                                         : std::numbers::pi * t / (6.0 * p.T);
    const double s = std::sin(arg);
    return s * s;
}

/// E_z(t) = F env(t) cos(2 pi t / T + cep pi) on [0, 3T], zero outside.
inline double field_at(const PulseSpec& p, double t) {
    if (t <= 0.0 || t >= p.duration()) return 0.0;
    return p.F * envelope_at(p, t) * std::cos(2.0 * std::numbers::pi * t / p.T + p.cep * std::numbers::pi);
}

/// Field strength above which the Coulomb barrier is suppressed: |eps0|^2 / 4.
inline double critical_field(double epsilon0) {
    if (!(epsilon0 < 0.0)) throw std::invalid_argument("not a bound state");
    return epsilon0 * epsilon0 / 4.0;
}

/// Plot-alignment offset cep*T/2 mapping carrier zero crossings onto the cep = 0 ones.
inline double cep_time_shift(const PulseSpec& p) { return p.cep * p.T / 2.0; }

}  // namespace sfent
