// params.hpp — device parameters and unit conventions
//
// All frequencies and rates inside the library are angular (rad/us, i.e.
// 2*pi x MHz). External interfaces (config files, CSV, CLI flags) use
// ordinary frequency in MHz; conversion happens at the boundary.

#pragma once

#include <stdexcept>

namespace kpo {

inline constexpr double two_pi = 6.283185307179586476925286766559;

inline double mhz_to_angular(double f_mhz) { return two_pi * f_mhz; }
inline double angular_to_mhz(double w) { return w / two_pi; }

// Static device parameters of the oscillator.
struct KpoParams {
    double delta = 0.0;      // detuning w_r - w_p/2, angular
    double chi = 0.0;        // Kerr nonlinearity, angular, > 0
    double kappa_e = 0.0;    // external loss rate, angular, >= 0
    double kappa_i = 0.0;    // internal loss rate, angular, >= 0
    double gamma_phi = 0.0;  // pure dephasing rate, angular, >= 0
    int dim = 30;            // Fock-space truncation, >= 4

    double kappa_total() const { return kappa_e + kappa_i; }

    void validate() const {
        if (!(chi > 0.0)) throw std::invalid_argument("KpoParams: chi must be > 0");
        if (kappa_e < 0.0) throw std::invalid_argument("KpoParams: kappa_e must be >= 0");
        if (kappa_i < 0.0) throw std::invalid_argument("KpoParams: kappa_i must be >= 0");
        if (gamma_phi < 0.0) throw std::invalid_argument("KpoParams: gamma_phi must be >= 0");
        if (dim < 4) throw std::invalid_argument("KpoParams: dim must be >= 4");
    }
};

} // namespace kpo
