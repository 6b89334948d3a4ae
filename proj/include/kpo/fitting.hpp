// fitting.hpp — single-resonance fits of the reflection coefficient to the
// bare-resonator form, and the model-predicted nominal loss rates they are
// compared against.

#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kpo/exec.hpp"
#include "kpo/params.hpp"
#include "kpo/spectrum.hpp"

namespace kpo {

struct DegenerateDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fit target: Gamma(w) = 1 - ke / (i(w - w0) + (ke + ki)/2), three real
// parameters (w0, ke, ki). ke may come out negative for amplification peaks.
struct ResonanceFit {
    double omega_mn = 0.0;
    double kappa_e_nominal = 0.0;
    double kappa_i_nominal = 0.0;
    double residual = 0.0;   // RMS misfit
    bool converged = false;
};

// Damped Gauss-Newton on the complex residuals (or on |Gamma| when
// amp_only). Converged when the relative step norm drops below 1e-10 within
// 200 iterations and the RMS residual is below residual_ceiling;
// non-convergence returns best-so-far with converged = false. Data with
// variance below 1e-14 raises DegenerateDataError.
ResonanceFit fit_resonance(std::span<const double> probe,
                           std::span<const std::complex<double>> gamma,
                           const ResonanceFit& initial,
                           double residual_ceiling = 0.1);
ResonanceFit fit_resonance_amplitude(std::span<const double> probe,
                                     std::span<const double> abs_gamma,
                                     const ResonanceFit& initial,
                                     double residual_ceiling = 0.1);

// Initial guess from the data: w0 at the extremum of ||Gamma| - 1|, total
// linewidth from the full width at half depth, ke from the extremal
// depth/height via the on-resonance closed form.
ResonanceFit initial_guess(std::span<const double> probe,
                           std::span<const double> abs_gamma);

struct NominalLossPrediction {
    int m = 0, n = 0;
    double kappa_e_pred = 0.0;  // -ke |X_mn|^2 (rho_mm - rho_nn)
    double kappa_i_pred = 0.0;  // (ke+ki)(Y_mm+Y_nn) + ke |X_mn|^2 (rho_mm - rho_nn)
};

// Predictions for every ordered pair of the table (populations required).
std::vector<NominalLossPrediction> predict_nominal_losses(const TransitionTable& table,
                                                          const KpoParams& params);

struct LossComparisonRow {
    double beta = 0.0;
    int m = 0, n = 0;
    ResonanceFit fit;
    NominalLossPrediction pred;
    bool overlap_flag = false;  // another transition contaminates the fit window
};

// For each beta and pair: synthesize the driven reflection in a window of
// +-2.5 nominal linewidths around omega_mn, fit the bare-resonator form, and
// report it next to the prediction. Flagged (not dropped) when another
// transition lies within 3 nominal linewidths or its tail at the window edge
// exceeds 20 percent of the pair's own resonance amplitude. Pairs outside
// the visibility threshold at a given beta are skipped there.
std::vector<LossComparisonRow> loss_comparison_sweep(
    const KpoParams& params, std::span<const double> betas,
    std::span<const std::pair<int, int>> pairs, Exec exec = Exec::serial);
std::vector<LossComparisonRow> loss_comparison_sweep(
    const BetaTables& tabs, const KpoParams& params,
    std::span<const std::pair<int, int>> pairs, Exec exec = Exec::serial);

} // namespace kpo
