// calibration.hpp — generator power to on-chip two-photon drive amplitude,
// and least-squares recovery of the line attenuation from measured
// transition frequencies.

#pragma once

#include <span>
#include <vector>

#include "kpo/eigensystem.hpp"
#include "kpo/params.hpp"

namespace kpo {

// Pump-line model. domega_di is the flux-bias slope d(omega_r)/di in angular
// frequency per microampere (its sign is irrelevant; only |domega_di|
// enters). attenuation_db is the total generator-to-chip attenuation
// R (negative dB).
struct DriveLine {
    double domega_di = 0.0;     // angular (rad/us) per uA, signed
    double z0 = 50.0;           // characteristic impedance, Ohm
    double attenuation_db = 0.0;

    void validate() const;
};

// p_KPO = p_RT + R; i_amp = sqrt(2/(1000 Z0)) 10^(p_KPO/20) amperes;
// beta = |domega/di| i_amp / 4 (current converted to uA to match the slope).
double power_to_beta(double p_rt_dbm, const DriveLine& line);

// Frequency-modulation amplitude of the resonator under the drive: 4 beta.
double beta_to_delta_omega(double beta);

struct Observation {
    double p_rt_dbm = 0.0;
    int m = 0, n = 0;      // transition labels (m~ <- n~)
    double omega = 0.0;    // measured omega_mn relative to w_p/2, angular
};

struct CalibrationResidual {
    Observation obs;
    double beta = 0.0;        // drive amplitude implied by the fitted R
    double omega_model = 0.0;
    double residual = 0.0;    // omega_meas - omega_model
};

struct CalibrationResult {
    double attenuation_db = 0.0;
    double objective = 0.0;   // sum of squared residuals, angular^2
    bool ill_conditioned = false;  // flat objective valley around the minimizer
    std::vector<CalibrationResidual> residuals;
};

// Minimize sum (omega_meas - omega_model(beta(p_RT, R)))^2 over R by a
// 0.5 dB coarse grid on [-80, -30] dB followed by golden-section refinement
// to 0.01 dB. Model frequencies come from diagonalizing the rotating-frame
// Hamiltonian with adiabatic labels tracked from beta = 0 (labels are
// restricted to those the observations need, which keeps the tracking away
// from truncation-edge states at large candidate drives).
CalibrationResult fit_attenuation(std::span<const Observation> observations,
                                  const KpoParams& params, const DriveLine& line);

// Adiabatically labeled transition frequencies at arbitrary beta: anchors on
// a fixed fine grid up to beta_max, queries diagonalize at the requested
// beta and label against the nearest anchor.
class LevelTracker {
public:
    LevelTracker(const KpoParams& params, double beta_max, int max_label);
    double omega(int m, int n, double beta) const;  // E_m - E_n

private:
    KpoParams params_;
    int max_label_;
    std::vector<double> anchors_;
    std::vector<LabeledEigensystem> systems_;
};

} // namespace kpo
